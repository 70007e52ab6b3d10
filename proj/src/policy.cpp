#include "strat/policy.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <stdexcept>
#include <string>

#include "strat/int_arith.hpp"

namespace strat {

namespace {

using u64 = std::uint64_t;

constexpr u64 kMaxParam = u64{1} << 62;

[[noreturn]] void throw_bad_param(const char* what) {
  throw std::invalid_argument(std::string("policy parameter out of domain: ") +
                              what);
}

u64 ceil_div(u64 a, u64 b) { return a / b + (a % b != 0); }

// number of multiples of g in [0, hi)
u64 multiples_below(u64 hi, u64 g) { return hi == 0 ? 0 : (hi - 1) / g + 1; }

// number of multiples of g in [lo, hi)
u64 multiples_in(u64 lo, u64 hi, u64 g) {
  return hi <= lo ? 0 : multiples_below(hi, g) - multiples_below(lo, g);
}

// ---------------------------------------------------------------- fixed

namespace fr {

u64 count(u64 r, u64 n) {
  if (n == 0) return 0;
  return ceil_div(n, r) + ((n - 1) % r != 0);
}

bool pred(u64 r, u64 t, u64 n) { return t == n - 1 || t % r == 0; }

RankVec ranks(u64 r, u64 n) {
  RankVec out;
  if (n == 0) return out;
  out.reserve(count(r, n));
  for (u64 t = 0; t < n; t += r) out.push_back(t);
  if (out.back() != n - 1) out.push_back(n - 1);
  return out;
}

u64 at_index(u64 r, u64 i, u64 n) {
  const u64 m = ceil_div(n, r);
  return i < m ? i * r : n - 1;
}

u64 index_of(u64 r, u64 t, u64 /*n*/) { return ceil_div(t, r); }

}  // namespace fr

// ------------------------------------------------------- depth proportional

// grid spacing at depth n: largest power of two <= n/r (at least 1)
u64 dpr_gap(u64 r, u64 n) {
  const u64 q = n / r;
  return q >= 1 ? std::bit_floor(q) : 1;
}

namespace dpr {

u64 count(u64 r, u64 n) {
  if (n == 0) return 0;
  const u64 u = dpr_gap(r, n);
  return ceil_div(n, u) + ((n - 1) % u != 0);
}

bool pred(u64 r, u64 t, u64 n) {
  return t == n - 1 || t % dpr_gap(r, n) == 0;
}

RankVec ranks(u64 r, u64 n) {
  RankVec out;
  if (n == 0) return out;
  const u64 u = dpr_gap(r, n);
  out.reserve(count(r, n));
  for (u64 t = 0; t < n; t += u) out.push_back(t);
  if (out.back() != n - 1) out.push_back(n - 1);
  return out;
}

u64 at_index(u64 r, u64 i, u64 n) {
  const u64 u = dpr_gap(r, n);
  const u64 m = ceil_div(n, u);
  return i < m ? i * u : n - 1;
}

u64 index_of(u64 r, u64 t, u64 n) { return ceil_div(t, dpr_gap(r, n)); }

u64 bound(u64 r, u64 n) { return std::max<u64>(1, ceil_div(n, r)); }

}  // namespace dpr

// ----------------------------------------------- tapered depth proportional
//
// Same grids as DPR, but phased-out strata are eliminated one per deposit,
// oldest first, so the record holds exactly min(n, 2r+1) items. At depths
// >= 8r the surviving set has a closed form: the current grid's multiples,
// the not-yet-purged odd multiples of the previous grid, and a sliding
// window of recent ranks. Below that threshold the deposit process is
// replayed directly.

namespace tdpr {

struct Shape {
  u64 g;         // current grid spacing
  u64 rg;        // epoch start depth (r * g)
  u64 podd;      // odd multiples of g/2 already purged
  u64 window_lo; // oldest rank that may still sit in the sliding window
  u64 surv;      // non-grid survivors in [window_lo, n-1)
};

Shape shape(u64 r, u64 n) {
  Shape s{};
  s.g = dpr_gap(r, n);
  s.rg = r * s.g;
  const u64 epoch_drops = n - s.rg + 1;
  s.podd = std::min(r, epoch_drops);
  const u64 extra = epoch_drops > r ? epoch_drops - r : 0;
  s.window_lo = s.rg - 2;
  const u64 queue =
      (n - 1 - s.window_lo) - multiples_in(s.window_lo, n - 1, s.g);
  assert(queue >= extra);
  s.surv = queue - extra;
  return s;
}

RankVec replay(u64 r, u64 n) {
  const u64 cap = 2 * r + 1;
  RankVec s;
  s.reserve(cap + 1);
  for (u64 d = 0; d < n; ++d) {
    s.push_back(d);
    if (s.size() > cap) {
      const u64 g = dpr_gap(r, d + 1);
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] % g != 0 && s[i] != d) {
          s.erase(s.begin() + static_cast<std::ptrdiff_t>(i));
          break;
        }
      }
    }
  }
  return s;
}

bool closed_form_applies(u64 r, u64 n) { return n > 2 * r + 1 && n >= 8 * r; }

RankVec ranks(u64 r, u64 n) {
  if (n == 0) return {};
  if (n <= 2 * r + 1) {
    RankVec all(n);
    for (u64 t = 0; t < n; ++t) all[t] = t;
    return all;
  }
  if (!closed_form_applies(r, n)) return replay(r, n);
  const Shape s = shape(r, n);
  RankVec out;
  out.reserve(2 * r + 1);
  for (u64 t = 0; t < n; t += s.g) out.push_back(t);
  const u64 half = s.g / 2;
  for (u64 j = s.podd; j < r; ++j) out.push_back((2 * j + 1) * half);
  // sliding window: the last `surv` non-grid ranks before n-1
  RankVec window;
  window.reserve(s.surv);
  for (u64 t = n - 2; window.size() < s.surv; --t) {
    if (t % s.g != 0) window.push_back(t);
    if (t == s.window_lo) break;
  }
  out.insert(out.end(), window.rbegin(), window.rend());
  out.push_back(n - 1);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool pred(u64 r, u64 t, u64 n) {
  if (n <= 2 * r + 1) return true;
  if (!closed_form_applies(r, n)) {
    const RankVec s = replay(r, n);
    return std::binary_search(s.begin(), s.end(), t);
  }
  if (t == n - 1) return true;
  const Shape s = shape(r, n);
  if (t % s.g == 0) return true;
  const u64 half = s.g / 2;
  if (t < s.rg && t % half == 0) {
    const u64 j = (t / half - 1) / 2;
    return j >= s.podd;
  }
  if (t >= s.window_lo && t < n - 1) {
    const u64 younger_nongrid = (n - 1 - t - 1) - multiples_in(t + 1, n - 1, s.g);
    return younger_nongrid < s.surv;
  }
  return false;
}

u64 count(u64 /*r*/, u64 n, u64 cap) { return std::min(n, cap); }

}  // namespace tdpr

// --------------------------------------------------- recency proportional
//
// The retained set decomposes into maximal arithmetic runs whose strides are
// nonincreasing powers of two, followed by a fully retained tail. Visiting
// runs instead of individual ranks makes predicate/count/index queries
// O(log n).

namespace rpr {

// f(start, stride, len) -> bool (false stops the walk). Emits every retained
// rank exactly once, ascending.
template <typename F>
void visit_runs(u64 r, u64 n, F&& f) {
  if (n == 0) return;
  u64 cur = 0;
  u64 last = ~u64{0};
  while (true) {
    const u64 rem = n - cur;
    const u64 mu = rem / (r + 1);
    if (mu == 0) {
      f(cur, 1, rem);  // tail [cur, n)
      return;
    }
    const u64 s = std::bit_floor(mu);
    const u64 k = rem / s - r;  // length of the constant-stride run
    if (!f(cur, s, k)) return;
    last = cur + (k - 1) * s;
    cur += k * s;
    if (cur >= n) {
      if (last != n - 1) f(n - 1, 1, 1);
      return;
    }
  }
}

RankVec ranks(u64 r, u64 n) {
  RankVec out;
  visit_runs(r, n, [&](u64 start, u64 stride, u64 len) {
    for (u64 i = 0; i < len; ++i) out.push_back(start + i * stride);
    return true;
  });
  return out;
}

u64 count(u64 r, u64 n) {
  u64 c = 0;
  visit_runs(r, n, [&](u64, u64, u64 len) {
    c += len;
    return true;
  });
  return c;
}

bool pred(u64 r, u64 t, u64 n) {
  if (t == n - 1) return true;
  bool hit = false;
  visit_runs(r, n, [&](u64 start, u64 stride, u64 len) {
    const u64 end = start + len * stride;
    if (t < end) {
      hit = t >= start && (t - start) % stride == 0;
      return false;
    }
    return true;
  });
  return hit;
}

u64 at_index(u64 r, u64 i, u64 n) {
  u64 result = 0;
  u64 seen = 0;
  visit_runs(r, n, [&](u64 start, u64 stride, u64 len) {
    if (i < seen + len) {
      result = start + (i - seen) * stride;
      return false;
    }
    seen += len;
    return true;
  });
  return result;
}

u64 index_of(u64 r, u64 t, u64 n) {
  u64 idx = 0;
  visit_runs(r, n, [&](u64 start, u64 stride, u64 len) {
    const u64 end = start + len * stride;
    if (t <= start) return false;
    if (t >= end) {
      idx += len;
      return true;
    }
    idx += (t - start + stride - 1) / stride;
    return false;
  });
  return idx;
}

u64 bound(u64 r, u64 t, u64 n) {
  const u64 age = n - t;
  return r == 0 ? age : std::max<u64>(1, ceil_div(age, r));
}

}  // namespace rpr

// ---------------------------------------------------- geometric nth root
//
// Retains, for each target age n^{x/a} (x = 0..a), the multiples of a
// power-of-two cadence kappa at or after a backstop time point beta. All
// quantities are evaluated in exact integer arithmetic; see int_arith.hpp.

namespace gsnr {

struct Table {
  u64 a = 0;
  u64 n = 0;
  // (kappa, beta) per target exponent x = 0..a
  std::vector<std::pair<u64, u64>> kb;
};

void fill_table(Table& tab, u64 a, u64 n) {
  tab.a = a;
  tab.n = n;
  tab.kb.clear();
  tab.kb.reserve(a + 1);
  for (u64 x = 0; x <= a; ++x) {
    const unsigned e = floor_log2_pow(n, static_cast<unsigned>(x),
                                      static_cast<unsigned>(a));
    const u64 kappa = e >= 1 ? u64{1} << (e - 1) : 1;
    const u64 m = ceil_scaled_root_pow(n, static_cast<unsigned>(x),
                                       static_cast<unsigned>(a), 3, 2);
    const u64 floor_b = n > m ? n - m : 0;
    const u64 beta = floor_b + (kappa - floor_b % kappa) % kappa;
    tab.kb.emplace_back(kappa, beta);
  }
}

const Table& table(u64 a, u64 n) {
  thread_local Table cache;
  if (cache.a != a || cache.n != n) fill_table(cache, a, n);
  return cache;
}

RankVec ranks(u64 a, u64 n) {
  RankVec out;
  if (n == 0) return out;
  const Table& tab = table(a, n);
  out.reserve(6 * (a + 1));
  for (const auto& [kappa, beta] : tab.kb) {
    for (u64 t = beta; t < n; t += kappa) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool pred(u64 a, u64 t, u64 n) {
  const Table& tab = table(a, n);
  for (const auto& [kappa, beta] : tab.kb) {
    if (t >= beta && t % kappa == 0) return true;
  }
  return false;
}

u64 bound(u64 a, u64 t, u64 n) {
  const u64 alpha = ceil_root_pow(n, 1, static_cast<unsigned>(a));
  return sat_mul_u64(alpha, std::max<u64>(n - t, 1));
}

}  // namespace gsnr

// --------------------------------------- curbed recency proportional
//
// Below the handoff depth 2^(cap-1) the record follows the densest
// recency-proportional resolution whose size bound (r+1)*(floor(log2 n)+1)+1
// fits the cap; the resolution steps down as depth doubles. Past the
// handoff, a geometric nth-root layout takes over, intersected with the
// ranks that actually survived the recency-proportional era.

namespace crpr {

u64 amax(u64 cap) { return std::max<u64>(1, (cap - 2) / 6); }

u64 handoff(u64 cap) {
  return cap <= 64 ? u64{1} << (cap - 1) : ~u64{0};
}

u64 rstar(u64 cap, u64 n) {
  if (n < 2) return cap;
  const u64 k = std::bit_width(n);  // floor(log2 n) + 1
  const u64 s = (cap - 1) / k;
  assert(s >= 1);
  return s - 1;
}

bool before_handoff(u64 cap, u64 n) { return n < handoff(cap); }

RankVec ranks(u64 cap, u64 n) {
  if (n == 0) return {};
  if (before_handoff(cap, n)) return rpr::ranks(rstar(cap, n), n);
  const u64 h = handoff(cap);
  const RankVec base = rpr::ranks(rstar(cap, h - 1), h - 1);
  RankVec out;
  for (u64 t : gsnr::ranks(amax(cap), n)) {
    if (t >= h - 1 || std::binary_search(base.begin(), base.end(), t))
      out.push_back(t);
  }
  if (out.empty() || out.back() != n - 1) out.push_back(n - 1);
  return out;
}

bool pred(u64 cap, u64 t, u64 n) {
  if (before_handoff(cap, n)) return rpr::pred(rstar(cap, n), t, n);
  if (t == n - 1) return true;
  const u64 h = handoff(cap);
  if (!gsnr::pred(amax(cap), t, n)) return false;
  return t >= h - 1 || rpr::pred(rstar(cap, h - 1), t, h - 1);
}

u64 bound(u64 cap, u64 t, u64 n) {
  if (before_handoff(cap, n)) return rpr::bound(rstar(cap, n), t, n);
  return n;  // deep coverage is not guaranteed past the handoff
}

}  // namespace crpr

RankVec materialized(const PolicySpec& p, u64 n);

u64 generic_index_of(const PolicySpec& p, u64 rank, u64 n) {
  const RankVec r = materialized(p, n);
  return static_cast<u64>(
      std::lower_bound(r.begin(), r.end(), rank) - r.begin());
}

RankVec materialized(const PolicySpec& p, u64 n) {
  switch (p.family) {
    case PolicyFamily::kFixedResolution: return fr::ranks(p.param, n);
    case PolicyFamily::kDepthProportional: return dpr::ranks(p.param, n);
    case PolicyFamily::kTaperedDepthProportional: return tdpr::ranks(p.param, n);
    case PolicyFamily::kRecencyProportional: return rpr::ranks(p.param, n);
    case PolicyFamily::kGeomSeqNthRoot: return gsnr::ranks(p.param, n);
    case PolicyFamily::kCurbedRecencyProportional: return crpr::ranks(p.param, n);
  }
  throw std::logic_error("unreachable policy family");
}

}  // namespace

PolicySpec PolicySpec::fixed_resolution(u64 r) {
  return {PolicyFamily::kFixedResolution, r};
}
PolicySpec PolicySpec::depth_proportional(u64 r) {
  return {PolicyFamily::kDepthProportional, r};
}
PolicySpec PolicySpec::tapered_depth_proportional(u64 r) {
  return {PolicyFamily::kTaperedDepthProportional, r};
}
PolicySpec PolicySpec::recency_proportional(u64 r) {
  return {PolicyFamily::kRecencyProportional, r};
}
PolicySpec PolicySpec::geom_seq_nth_root(u64 a) {
  return {PolicyFamily::kGeomSeqNthRoot, a};
}
PolicySpec PolicySpec::curbed_recency_proportional(u64 cap) {
  return {PolicyFamily::kCurbedRecencyProportional, cap};
}

void PolicySpec::validate() const {
  if (param > kMaxParam) throw_bad_param("parameter too large");
  switch (family) {
    case PolicyFamily::kFixedResolution:
    case PolicyFamily::kDepthProportional:
    case PolicyFamily::kTaperedDepthProportional:
      if (param < 1) throw_bad_param("resolution must be >= 1");
      return;
    case PolicyFamily::kRecencyProportional:
      return;  // any nonnegative resolution
    case PolicyFamily::kGeomSeqNthRoot:
      if (param < 1) throw_bad_param("hierarchy level count must be >= 1");
      if (param > kMaxRootExponent)
        throw_bad_param("hierarchy level count above 64 is not supported");
      return;
    case PolicyFamily::kCurbedRecencyProportional:
      if (param < 8) throw_bad_param("size cap must be >= 8");
      return;
  }
  throw_bad_param("unknown family");
}

const char* family_name(PolicyFamily f) {
  switch (f) {
    case PolicyFamily::kFixedResolution: return "fr";
    case PolicyFamily::kDepthProportional: return "dpr";
    case PolicyFamily::kTaperedDepthProportional: return "tdpr";
    case PolicyFamily::kRecencyProportional: return "rpr";
    case PolicyFamily::kGeomSeqNthRoot: return "gsnr";
    case PolicyFamily::kCurbedRecencyProportional: return "crpr";
  }
  return "?";
}

PolicyFamily family_from_name(std::string_view name) {
  if (name == "fr") return PolicyFamily::kFixedResolution;
  if (name == "dpr") return PolicyFamily::kDepthProportional;
  if (name == "tdpr") return PolicyFamily::kTaperedDepthProportional;
  if (name == "rpr") return PolicyFamily::kRecencyProportional;
  if (name == "gsnr") return PolicyFamily::kGeomSeqNthRoot;
  if (name == "crpr") return PolicyFamily::kCurbedRecencyProportional;
  throw std::invalid_argument("unknown policy family: " + std::string(name));
}

RankVec retained_ranks(const PolicySpec& policy, u64 depth) {
  policy.validate();
  return materialized(policy, depth);
}

RankVec dropped_ranks(const PolicySpec& policy, u64 depth) {
  policy.validate();
  if (depth < 1) throw std::out_of_range("dropped_ranks: depth must be >= 1");
  if (depth == ~u64{0})
    throw std::out_of_range("dropped_ranks: depth overflow");
  const RankVec cur = materialized(policy, depth);
  const RankVec next = materialized(policy, depth + 1);
  RankVec out;
  std::set_difference(cur.begin(), cur.end(), next.begin(), next.end(),
                      std::back_inserter(out));
  return out;
}

bool retention_predicate(const PolicySpec& policy, u64 rank, u64 depth) {
  policy.validate();
  if (rank >= depth)
    throw std::out_of_range("retention_predicate: rank must be < depth");
  switch (policy.family) {
    case PolicyFamily::kFixedResolution:
      return fr::pred(policy.param, rank, depth);
    case PolicyFamily::kDepthProportional:
      return dpr::pred(policy.param, rank, depth);
    case PolicyFamily::kTaperedDepthProportional:
      return tdpr::pred(policy.param, rank, depth);
    case PolicyFamily::kRecencyProportional:
      return rpr::pred(policy.param, rank, depth);
    case PolicyFamily::kGeomSeqNthRoot:
      return gsnr::pred(policy.param, rank, depth);
    case PolicyFamily::kCurbedRecencyProportional:
      return crpr::pred(policy.param, rank, depth);
  }
  throw std::logic_error("unreachable policy family");
}

u64 retained_count(const PolicySpec& policy, u64 depth) {
  policy.validate();
  switch (policy.family) {
    case PolicyFamily::kFixedResolution:
      return fr::count(policy.param, depth);
    case PolicyFamily::kDepthProportional:
      return dpr::count(policy.param, depth);
    case PolicyFamily::kTaperedDepthProportional:
      return tdpr::count(policy.param, depth, 2 * policy.param + 1);
    case PolicyFamily::kRecencyProportional:
      return rpr::count(policy.param, depth);
    case PolicyFamily::kGeomSeqNthRoot:
      return static_cast<u64>(gsnr::ranks(policy.param, depth).size());
    case PolicyFamily::kCurbedRecencyProportional:
      if (crpr::before_handoff(policy.param, depth))
        return rpr::count(crpr::rstar(policy.param, depth), depth);
      return static_cast<u64>(crpr::ranks(policy.param, depth).size());
  }
  throw std::logic_error("unreachable policy family");
}

u64 rank_at_index(const PolicySpec& policy, u64 index, u64 depth) {
  policy.validate();
  if (index >= retained_count(policy, depth))
    throw std::out_of_range("rank_at_index: index past retained count");
  switch (policy.family) {
    case PolicyFamily::kFixedResolution:
      return fr::at_index(policy.param, index, depth);
    case PolicyFamily::kDepthProportional:
      return dpr::at_index(policy.param, index, depth);
    case PolicyFamily::kRecencyProportional:
      return rpr::at_index(policy.param, index, depth);
    case PolicyFamily::kCurbedRecencyProportional:
      if (crpr::before_handoff(policy.param, depth))
        return rpr::at_index(crpr::rstar(policy.param, depth), index, depth);
      break;
    default:
      break;
  }
  return materialized(policy, depth)[index];
}

u64 retained_index_of(const PolicySpec& policy, u64 rank, u64 depth) {
  policy.validate();
  switch (policy.family) {
    case PolicyFamily::kFixedResolution:
      return fr::index_of(policy.param, rank, depth);
    case PolicyFamily::kDepthProportional:
      return dpr::index_of(policy.param, rank, depth);
    case PolicyFamily::kRecencyProportional:
      return rpr::index_of(policy.param, rank, depth);
    case PolicyFamily::kCurbedRecencyProportional:
      if (crpr::before_handoff(policy.param, depth))
        return rpr::index_of(crpr::rstar(policy.param, depth), rank, depth);
      break;
    default:
      break;
  }
  return generic_index_of(policy, rank, depth);
}

u64 gap_bound(const PolicySpec& policy, u64 rank, u64 depth) {
  policy.validate();
  if (rank >= depth)
    throw std::out_of_range("gap_bound: rank must be < depth");
  // the most recent rank has no following gap beyond the next deposit
  if (rank == depth - 1) return 1;
  switch (policy.family) {
    case PolicyFamily::kFixedResolution:
      return policy.param;
    case PolicyFamily::kDepthProportional:
    case PolicyFamily::kTaperedDepthProportional:
      return dpr::bound(policy.param, depth);
    case PolicyFamily::kRecencyProportional:
      return rpr::bound(policy.param, rank, depth);
    case PolicyFamily::kGeomSeqNthRoot:
      return gsnr::bound(policy.param, rank, depth);
    case PolicyFamily::kCurbedRecencyProportional:
      return crpr::bound(policy.param, rank, depth);
  }
  throw std::logic_error("unreachable policy family");
}

}  // namespace strat
