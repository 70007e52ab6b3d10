#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace strat {

// Rooted tree with branch origin times; the common output of perfect
// tracking and of both reconstruction methods. Nodes are stored in a flat
// arena addressed by index; `kNoParent` marks the root.
inline constexpr std::int64_t kNoParent = -1;

struct PhyloNode {
  std::int64_t parent = kNoParent;  // arena index
  double origin_time = 0.0;
  std::string label;                // nonempty for leaves (taxon id)
  std::vector<std::int64_t> children;
};

class PhyloTree {
 public:
  std::int64_t add_root(double origin_time, std::string label = {});
  std::int64_t add_child(std::int64_t parent, double origin_time,
                         std::string label = {});

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  const PhyloNode& node(std::int64_t i) const {
    return nodes_[static_cast<std::size_t>(i)];
  }
  PhyloNode& node(std::int64_t i) { return nodes_[static_cast<std::size_t>(i)]; }
  std::int64_t root() const { return root_; }

  std::vector<std::int64_t> leaves() const;
  std::vector<std::string> leaf_labels() const;  // sorted

  // checks single-rootedness, child ordering of origin times and unique
  // leaf labels; throws std::invalid_argument on violation
  void validate() const;

  // removes interior nodes with exactly one child, splicing their edge;
  // the root and the leaves always survive
  PhyloTree collapse_unifurcations() const;

  // re-roots at the first node with more than one child (the global MRCA),
  // discarding the unary stem above it
  PhyloTree prune_stem() const;

  // order-insensitive structural fingerprint; equal fingerprints mean equal
  // trees up to child order. Origin times participate rounded to 1e-9.
  std::string canonical_signature(bool with_times = true) const;

 private:
  std::vector<PhyloNode> nodes_;
  std::int64_t root_ = kNoParent;
};

bool same_topology(const PhyloTree& a, const PhyloTree& b);

}  // namespace strat
