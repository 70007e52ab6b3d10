#include "strat/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <stdexcept>

#include "strat/mrca.hpp"
#include "strat/phylo_io.hpp"
#include "strat/tracker.hpp"
#include "strat/trie_reconstruct.hpp"
#include "strat/upgma.hpp"

namespace strat {

namespace {

using u64 = std::uint64_t;

u64 mix64(u64 z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

// splitmix stream; labeled substreams keep the run reproducible without any
// shared generator state
struct SubRng {
  u64 state;

  SubRng(u64 seed, u64 label) : state(mix64(seed ^ mix64(label))) {}

  u64 next() {
    state += 0x9e3779b97f4a7c15ull;
    return mix64(state);
  }

  u64 next_below(u64 bound) {  // bound >= 1
    return static_cast<u64>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

constexpr u64 kSelectionStream = 0xa11ce;
constexpr u64 kDifferentiaStream = 0xd1ff;
constexpr u64 kLandscapeStream = 0x1a5d;

}  // namespace

void SimConfig::validate() const {
  if (population_size < 2)
    throw std::invalid_argument("simulate: population size must be >= 2");
  if (generations < 1)
    throw std::invalid_argument("simulate: generations must be >= 1");
  if (selection == SelectionScheme::kTournament && tournament_k < 1)
    throw std::invalid_argument("simulate: tournament size must be >= 1");
  policy.validate();
  if (width_bits != 1 && width_bits != 8 && width_bits != 64)
    throw std::invalid_argument("simulate: width must be 1, 8 or 64");
}

SimResult simulate(const SimConfig& config) {
  config.validate();
  const u64 n = config.population_size;
  SubRng select(config.seed, kSelectionStream);
  SubRng diff_seeds(config.seed, kDifferentiaStream);
  SubRng landscape(config.seed, kLandscapeStream);

  std::vector<u64> founder_ids(n);
  for (u64 i = 0; i < n; ++i) founder_ids[i] = i;
  TrackerForest tracker(TrackerForest::Mode::kPruning, founder_ids);

  std::vector<Column> cols;
  std::vector<u64> ids(n);
  std::vector<double> fitness(n, 0.0);
  cols.reserve(n);
  for (u64 i = 0; i < n; ++i) {
    cols.emplace_back(config.policy, config.width_bits, diff_seeds.next());
    ids[i] = i;
    fitness[i] = landscape.next_unit();
  }
  u64 next_id = n;

  const auto pick_parent = [&]() -> u64 {
    if (config.selection == SelectionScheme::kNeutralDrift)
      return select.next_below(n);
    u64 best = select.next_below(n);
    for (unsigned c = 1; c < config.tournament_k; ++c) {
      const u64 cand = select.next_below(n);
      if (fitness[cand] > fitness[best]) best = cand;
    }
    return best;
  };

  if (config.synchronous) {
    for (u64 g = 1; g <= config.generations; ++g) {
      std::vector<Column> next_cols;
      std::vector<u64> next_ids(n);
      std::vector<double> next_fit(n);
      next_cols.reserve(n);
      for (u64 i = 0; i < n; ++i) {
        const u64 parent = pick_parent();
        next_cols.push_back(cols[parent].clone_for_offspring(diff_seeds.next()));
        next_ids[i] = next_id;
        next_fit[i] = fitness[parent] + (landscape.next_unit() - 0.5) * 0.1;
        tracker.on_birth(ids[parent], next_id, g);
        ++next_id;
      }
      for (u64 i = 0; i < n; ++i) tracker.on_removal(ids[i]);
      cols = std::move(next_cols);
      ids = std::move(next_ids);
      fitness = std::move(next_fit);
    }
  } else {
    const u64 events = n * config.generations;
    for (u64 e = 1; e <= events; ++e) {
      const u64 parent = pick_parent();
      const u64 victim = select.next_below(n);
      const u64 time = 1 + (e - 1) / n;
      Column child = cols[parent].clone_for_offspring(diff_seeds.next());
      tracker.on_birth(ids[parent], next_id, time);
      tracker.on_removal(ids[victim]);
      cols[victim] = std::move(child);
      fitness[victim] = fitness[parent] + (landscape.next_unit() - 0.5) * 0.1;
      ids[victim] = next_id;
      ++next_id;
    }
  }

  SimResult out;
  out.seed = config.seed;
  out.ground_truth = tracker.extract_tree(false, false);
  out.population = std::move(cols);
  out.labels.reserve(n);
  for (u64 i = 0; i < n; ++i) out.labels.push_back(std::to_string(ids[i]));
  return out;
}

namespace {

u64 count_for(PolicyFamily family, u64 param, u64 depth) {
  return retained_count({family, param}, depth);
}

// largest r in [lo, hi] with count(r) <= budget, given count monotone
// nondecreasing in r; returns lo-1 semantics via `found`
u64 bisect_max_fitting(PolicyFamily family, u64 lo, u64 hi, u64 depth,
                       u64 budget, bool* found) {
  *found = false;
  u64 best = lo;
  while (lo <= hi) {
    const u64 mid = lo + (hi - lo) / 2;
    if (count_for(family, mid, depth) <= budget) {
      best = mid;
      *found = true;
      lo = mid + 1;
    } else {
      if (mid == 0) break;
      hi = mid - 1;
    }
  }
  return best;
}

}  // namespace

FootprintFit fit_policy_to_footprint(PolicyFamily family, unsigned width_bits,
                                     std::uint64_t target_bits,
                                     std::uint64_t depth) {
  if (width_bits == 0) throw std::invalid_argument("fit: zero width");
  const u64 budget = target_bits / width_bits;  // retained-count budget
  FootprintFit out;
  switch (family) {
    case PolicyFamily::kFixedResolution: {
      // count decreases with r: smallest fitting r maximizes the footprint
      u64 lo = 1, hi = std::max<u64>(depth, 1);
      u64 best = hi;
      bool found = false;
      while (lo <= hi) {
        const u64 mid = lo + (hi - lo) / 2;
        if (count_for(family, mid, depth) <= budget) {
          best = mid;
          found = true;
          hi = mid - 1;
          if (mid == 1) break;
        } else {
          lo = mid + 1;
        }
      }
      out.policy = PolicySpec::fixed_resolution(found ? best
                                                      : std::max<u64>(depth, 1));
      out.fits = found;
      break;
    }
    case PolicyFamily::kDepthProportional:
    case PolicyFamily::kTaperedDepthProportional: {
      bool found = false;
      const u64 hi = std::max<u64>(1, budget);  // count <= 2r+1
      const u64 best = bisect_max_fitting(family, 1, hi, depth, budget, &found);
      out.policy = {family, found ? best : 1};
      out.fits = found;
      break;
    }
    case PolicyFamily::kRecencyProportional: {
      bool found = false;
      const u64 hi = std::max<u64>(1, budget);
      const u64 best = bisect_max_fitting(family, 0, hi, depth, budget, &found);
      out.policy = PolicySpec::recency_proportional(found ? best : 0);
      out.fits = found;
      break;
    }
    case PolicyFamily::kGeomSeqNthRoot: {
      // counts are not monotone in the level count: scan the small domain
      u64 best_a = 0, best_count = 0;
      for (u64 a = 1; a <= 64 && 6 * (a - 1) <= budget + 6; ++a) {
        const u64 c = count_for(family, a, depth);
        if (c <= budget && c > best_count) {
          best_count = c;
          best_a = a;
        }
      }
      out.policy = PolicySpec::geom_seq_nth_root(best_a != 0 ? best_a : 1);
      out.fits = best_a != 0;
      break;
    }
    case PolicyFamily::kCurbedRecencyProportional: {
      const u64 cap = std::max<u64>(8, budget);
      out.policy = PolicySpec::curbed_recency_proportional(cap);
      out.fits = count_for(family, cap, depth) <= budget;
      break;
    }
  }
  out.end_state_bits = retained_count(out.policy, depth) * width_bits;
  return out;
}

ReconstructionMethod method_from_name(const std::string& name) {
  if (name == "upgma") return ReconstructionMethod::kUpgma;
  if (name == "trie") return ReconstructionMethod::kTrie;
  throw std::invalid_argument("unknown reconstruction method: " + name);
}

const char* method_name(ReconstructionMethod m) {
  return m == ReconstructionMethod::kUpgma ? "upgma" : "trie";
}

PhyloTree reconstruct(const std::vector<Column>& population,
                      const std::vector<std::string>& labels,
                      ReconstructionMethod method, double confidence) {
  if (method == ReconstructionMethod::kTrie)
    return trie_reconstruct(population, labels);
  const std::size_t n = population.size();
  DistanceMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      m.set(i, j, pairwise_distance(population[i], population[j], confidence));
  return upgma(m, labels);
}

PhyloTree reduce_for_comparison(const PhyloTree& tree) {
  return tree.prune_stem().collapse_unifurcations();
}

const char* RunReport::csv_header() {
  return "seed,family,param,width,bits,rf_distance,rf_similarity,"
         "wall_ms_reconstruct";
}

std::string RunReport::csv_row() const {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%llu,%s,%llu,%u,%llu,%llu,%.6f,%.3f",
                static_cast<unsigned long long>(seed), family_name(family),
                static_cast<unsigned long long>(param), width_bits,
                static_cast<unsigned long long>(max_column_bits),
                static_cast<unsigned long long>(rf_distance), rf_similarity,
                wall_ms_reconstruct);
  return buf;
}

RunReport evaluate(const SimResult& sim, ReconstructionMethod method,
                   double confidence) {
  RunReport report;
  report.seed = sim.seed;
  report.family = sim.population.front().policy().family;
  report.param = sim.population.front().policy().param;
  report.width_bits = sim.population.front().width_bits();
  for (const auto& col : sim.population) {
    report.max_column_bits =
        std::max<u64>(report.max_column_bits, col.size() * col.width_bits());
  }
  const auto t0 = std::chrono::steady_clock::now();
  const PhyloTree estimate =
      reconstruct(sim.population, sim.labels, method, confidence);
  const auto t1 = std::chrono::steady_clock::now();
  report.wall_ms_reconstruct =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  const auto [dist, sim_score] = robinson_foulds(
      reduce_for_comparison(sim.ground_truth), reduce_for_comparison(estimate));
  report.rf_distance = dist;
  report.rf_similarity = sim_score;
  return report;
}

}  // namespace strat
