#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace strat {

// Retention policy families for curated records of a rank-indexed stream.
// Every operation below is a pure function of (policy, arguments); no state
// is kept between calls, so retained time points never need to be stored
// alongside the data they index.
enum class PolicyFamily : std::uint8_t {
  kFixedResolution = 0,           // keep multiples of r; O(n) size, gap <= r
  kDepthProportional = 1,         // <= 2r+1 items, gap <= ceil(n/r)
  kTaperedDepthProportional = 2,  // DPR with one-by-one eliminations
  kRecencyProportional = 3,       // O(r log n) items, gap <= (n-t)/r
  kGeomSeqNthRoot = 4,            // <= 6a+2 items, gap <= n^{1/a} * age
  kCurbedRecencyProportional = 5, // recency-proportional under a hard cap c
};

struct PolicySpec {
  PolicyFamily family = PolicyFamily::kFixedResolution;
  std::uint64_t param = 1;

  static PolicySpec fixed_resolution(std::uint64_t r);
  static PolicySpec depth_proportional(std::uint64_t r);
  static PolicySpec tapered_depth_proportional(std::uint64_t r);
  static PolicySpec recency_proportional(std::uint64_t r);
  static PolicySpec geom_seq_nth_root(std::uint64_t a);
  static PolicySpec curbed_recency_proportional(std::uint64_t cap);

  // throws std::invalid_argument when param is outside the family's domain
  void validate() const;

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

const char* family_name(PolicyFamily f);              // "fr", "dpr", ...
PolicyFamily family_from_name(std::string_view name); // throws std::invalid_argument

using RankVec = std::vector<std::uint64_t>;

// All retained deposit ranks at record depth n, ascending. Invariants for
// n > 0: rank 0 and rank n-1 are always present.
RankVec retained_ranks(const PolicySpec& policy, std::uint64_t depth);

// Ranks discarded while depositing rank `depth` (the transition from depth
// to depth+1): retained(depth) \ retained(depth+1). Requires depth >= 1.
RankVec dropped_ranks(const PolicySpec& policy, std::uint64_t depth);

// True iff `rank` is in retained_ranks(policy, depth). Requires rank < depth.
bool retention_predicate(const PolicySpec& policy, std::uint64_t rank,
                         std::uint64_t depth);

// |retained_ranks(policy, depth)|, without materializing the set.
std::uint64_t retained_count(const PolicySpec& policy, std::uint64_t depth);

// The index-th smallest retained rank. Requires index < retained_count.
std::uint64_t rank_at_index(const PolicySpec& policy, std::uint64_t index,
                            std::uint64_t depth);

// Number of retained ranks strictly below `rank`; the inverse of
// rank_at_index for retained ranks.
std::uint64_t retained_index_of(const PolicySpec& policy, std::uint64_t rank,
                                std::uint64_t depth);

// Guaranteed upper bound on the spacing between the retained ranks that
// bracket `rank` at record depth `depth` (never smaller than the realized
// gap). Requires rank < depth.
std::uint64_t gap_bound(const PolicySpec& policy, std::uint64_t rank,
                        std::uint64_t depth);

}  // namespace strat
