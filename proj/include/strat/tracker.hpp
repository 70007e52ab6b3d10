#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "strat/tree.hpp"

namespace strat {

// Ground-truth lineage recorder: a parent-pointer forest fed birth/removal
// events. Naive mode keeps every node ever created; pruning mode reclaims
// extinct lineages as they die out. Node storage is an arena with a free
// list, so birth and removal bookkeeping stay O(1) amortized.
class TrackerForest {
 public:
  enum class Mode { kNaive, kPruning };

  TrackerForest(Mode mode, const std::vector<std::uint64_t>& founder_ids);

  void on_birth(std::uint64_t parent_id, std::uint64_t child_id,
                std::uint64_t time);

  // marks the taxon dead; in pruning mode frees the maximal dead,
  // descendant-free suffix of its lineage and returns the count freed
  std::uint64_t on_removal(std::uint64_t taxon_id);

  // exact phylogeny of living taxa; a multi-root forest gains a synthetic
  // root. A living taxon with stored children also appears as a leaf.
  PhyloTree extract_tree(bool collapse_unifurcations, bool prune_stem) const;

  Mode mode() const { return mode_; }
  std::size_t node_count() const { return stored_; }  // nodes currently held
  std::uint64_t alive_count() const { return alive_; }
  // total removal-path work, for the amortized pruning cost property
  std::uint64_t prune_work() const { return prune_work_; }

 private:
  struct Node {
    std::uint64_t id = 0;
    std::int64_t parent = -1;  // slot index
    std::uint64_t origin_time = 0;
    std::uint32_t stored_children = 0;
    bool alive = false;
    bool in_use = false;
  };

  std::int64_t slot_of(std::uint64_t id) const;
  std::int64_t alloc(std::uint64_t id, std::int64_t parent, std::uint64_t time);
  void release(std::int64_t slot);

  Mode mode_;
  std::vector<Node> nodes_;
  std::vector<std::int64_t> free_slots_;
  std::unordered_map<std::uint64_t, std::int64_t> by_id_;
  std::size_t stored_ = 0;
  std::uint64_t alive_ = 0;
  std::uint64_t prune_work_ = 0;
};

}  // namespace strat
