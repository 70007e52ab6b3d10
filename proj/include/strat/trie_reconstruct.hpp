#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "strat/column.hpp"
#include "strat/tree.hpp"

namespace strat {

struct TrieOptions {
  // expand internal multifurcations into zero-length bifurcation ladders
  bool split_polytomies = false;
  // pull internal node times back by the expected spurious-collision
  // overshoot, converted to generations with the local inter-node gap
  bool collision_bias_correction = false;
  // node-visit allowance per insertion for wildcard path search; past it
  // the search degrades to the greedy first candidate (and is counted)
  std::uint64_t wildcard_visit_budget = 10000;
};

struct TrieStats {
  std::uint64_t wildcard_hops = 0;
  std::uint64_t budget_exhaustions = 0;
};

// Builds a trie keyed on (rank, differentia), inserting columns youngest
// first. A column lacking a stratum at an existing trie rank treats that
// rank as a wildcard: among candidate edges, the one starting the longest
// consecutive run of matching subsequent strata wins (ties toward the
// smaller differentia, then the older edge). Internal node origin_time is
// the deposit rank of its differentia; leaf origin_time is the column
// depth. Interior unifurcations are collapsed in the returned tree.
// An empty label list numbers taxa "0", "1", ... by population index.
PhyloTree trie_reconstruct(const std::vector<Column>& population,
                           const std::vector<std::string>& labels = {},
                           const TrieOptions& options = {},
                           TrieStats* stats = nullptr);

}  // namespace strat
