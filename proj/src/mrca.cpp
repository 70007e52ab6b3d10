#include "strat/mrca.hpp"

#include <algorithm>
#include <cmath>

namespace strat {

namespace {

void check_compatible(const Column& a, const Column& b) {
  if (!(a.policy() == b.policy()) || a.width_bits() != b.width_bits())
    throw incompatible_columns(
        "columns must share retention policy and differentia width");
}

void check_confidence(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("confidence must lie in (0, 1)");
}

}  // namespace

std::vector<AlignedStratum> align_columns(const Column& a, const Column& b) {
  check_compatible(a, b);
  std::vector<AlignedStratum> out;
  std::size_t ia = 0, ib = 0;
  while (ia < a.size() && ib < b.size()) {
    const std::uint64_t ra = a.rank_at(ia);
    const std::uint64_t rb = b.rank_at(ib);
    if (ra == rb) {
      out.push_back({ra, a.differentia_at(ia), b.differentia_at(ib)});
      ++ia;
      ++ib;
    } else if (ra < rb) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return out;
}

unsigned required_consecutive_matches(unsigned width_bits, double confidence) {
  check_confidence(confidence);
  const double target = 1.0 - confidence;
  const double collision = std::ldexp(1.0, -static_cast<int>(width_bits));
  double p = 1.0;
  unsigned k = 0;
  while (p > target) {
    p *= collision;
    ++k;
  }
  return k;
}

MrcaBounds mrca_bounds(const Column& a, const Column& b, double confidence) {
  const auto aligned = align_columns(a, b);
  check_confidence(confidence);
  const unsigned k = required_consecutive_matches(a.width_bits(), confidence);

  std::size_t first_mismatch = aligned.size();
  for (std::size_t i = 0; i < aligned.size(); ++i) {
    if (aligned[i].a_differentia != aligned[i].b_differentia) {
      first_mismatch = i;
      break;
    }
  }

  MrcaBounds out;
  out.confidence = confidence;
  if (first_mismatch < aligned.size())
    out.upper_rank = aligned[first_mismatch].rank;
  if (first_mismatch >= k)
    out.lower_rank = aligned[first_mismatch - k].rank;
  return out;
}

double expected_collision_bias(unsigned width_bits) {
  const double p = std::ldexp(1.0, -static_cast<int>(width_bits));
  return p / (1.0 - p);
}

double pairwise_distance(const Column& a, const Column& b, double confidence) {
  const MrcaBounds bounds = mrca_bounds(a, b, confidence);
  const double min_depth = static_cast<double>(std::min(a.depth(), b.depth()));
  double midpoint;
  if (!bounds.upper_rank.has_value()) {
    midpoint = min_depth;
  } else {
    const double hi = static_cast<double>(*bounds.upper_rank);
    const double lo =
        bounds.lower_rank.has_value() ? static_cast<double>(*bounds.lower_rank) : 0.0;
    midpoint = (hi + lo) / 2.0;
  }
  return (static_cast<double>(a.depth()) - midpoint) +
         (static_cast<double>(b.depth()) - midpoint);
}

}  // namespace strat
