#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "strat/column.hpp"

namespace strat {

class incompatible_columns : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct AlignedStratum {
  std::uint64_t rank;
  std::uint64_t a_differentia;
  std::uint64_t b_differentia;
};

// Ranks retained by both columns after truncating the deeper record to the
// shallower depth, ascending, with both differentia attached. Columns must
// share policy and differentia width.
std::vector<AlignedStratum> align_columns(const Column& a, const Column& b);

struct MrcaBounds {
  // nullopt upper: no disparity found (columns agree over the alignment)
  std::optional<std::uint64_t> upper_rank;
  // nullopt lower: insufficient matches to certify any bound (pre-origin)
  std::optional<std::uint64_t> lower_rank;
  double confidence = 0.0;
};

// consecutive matching aligned strata needed before a rank can serve as the
// confidence-backed lower bound: least k with 2^(-width*k) <= 1 - confidence
unsigned required_consecutive_matches(unsigned width_bits, double confidence);

// Hard upper bound: the first aligned rank whose differentia mismatch proves
// divergence. Soft lower bound: k aligned matches back from the disparity
// (or from the end of the alignment when no disparity exists).
MrcaBounds mrca_bounds(const Column& a, const Column& b, double confidence);

// Expected number of spuriously matching aligned strata past the true
// divergence point, in aligned-stratum units: p/(1-p) with p = 2^-width.
// Conversion to generations multiplies by the local gap between retained
// ranks at the estimate, which depends on the retention policy in force.
double expected_collision_bias(unsigned width_bits);

// Sum of both columns' generational distances back to the estimated MRCA
// (midpoint of the confidence bounds; the shallower depth when no disparity
// exists, the interval [0, upper] when the lower bound is pre-origin).
double pairwise_distance(const Column& a, const Column& b, double confidence);

}  // namespace strat
