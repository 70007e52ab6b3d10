#include "strat/tracker.hpp"

#include <stdexcept>
#include <string>

namespace strat {

TrackerForest::TrackerForest(Mode mode,
                             const std::vector<std::uint64_t>& founder_ids)
    : mode_(mode) {
  if (founder_ids.empty())
    throw std::invalid_argument("tracker: founder set must be nonempty");
  for (auto id : founder_ids) {
    if (by_id_.count(id))
      throw std::invalid_argument("tracker: duplicate founder id " +
                                  std::to_string(id));
    const auto slot = alloc(id, -1, 0);
    nodes_[static_cast<std::size_t>(slot)].alive = true;
    ++alive_;
  }
}

std::int64_t TrackerForest::slot_of(std::uint64_t id) const {
  const auto it = by_id_.find(id);
  if (it == by_id_.end())
    throw std::invalid_argument("tracker: unknown taxon id " +
                                std::to_string(id));
  return it->second;
}

std::int64_t TrackerForest::alloc(std::uint64_t id, std::int64_t parent,
                                  std::uint64_t time) {
  std::int64_t slot;
  if (!free_slots_.empty()) {
    slot = free_slots_.back();
    free_slots_.pop_back();
  } else {
    nodes_.emplace_back();
    slot = static_cast<std::int64_t>(nodes_.size()) - 1;
  }
  auto& n = nodes_[static_cast<std::size_t>(slot)];
  n = Node{};
  n.id = id;
  n.parent = parent;
  n.origin_time = time;
  n.in_use = true;
  by_id_[id] = slot;
  ++stored_;
  return slot;
}

void TrackerForest::release(std::int64_t slot) {
  auto& n = nodes_[static_cast<std::size_t>(slot)];
  by_id_.erase(n.id);
  n.in_use = false;
  free_slots_.push_back(slot);
  --stored_;
}

void TrackerForest::on_birth(std::uint64_t parent_id, std::uint64_t child_id,
                             std::uint64_t time) {
  const auto parent_slot = slot_of(parent_id);
  if (by_id_.count(child_id))
    throw std::invalid_argument("tracker: child id already present " +
                                std::to_string(child_id));
  const auto slot = alloc(child_id, parent_slot, time);
  nodes_[static_cast<std::size_t>(slot)].alive = true;
  ++alive_;
  ++nodes_[static_cast<std::size_t>(parent_slot)].stored_children;
}

std::uint64_t TrackerForest::on_removal(std::uint64_t taxon_id) {
  const auto slot = slot_of(taxon_id);
  auto& n = nodes_[static_cast<std::size_t>(slot)];
  if (!n.alive)
    throw std::invalid_argument("tracker: taxon already removed " +
                                std::to_string(taxon_id));
  n.alive = false;
  --alive_;
  if (mode_ == Mode::kNaive) return 0;

  std::uint64_t freed = 0;
  std::int64_t cur = slot;
  ++prune_work_;
  while (cur >= 0) {
    auto& node = nodes_[static_cast<std::size_t>(cur)];
    if (node.alive || node.stored_children != 0) break;
    const auto parent = node.parent;
    release(cur);
    ++freed;
    ++prune_work_;
    if (parent >= 0) --nodes_[static_cast<std::size_t>(parent)].stored_children;
    cur = parent;
  }
  return freed;
}

PhyloTree TrackerForest::extract_tree(bool collapse, bool prune) const {
  if (alive_ == 0)
    throw std::invalid_argument("tracker: no living taxa to extract");
  // keep nodes that are alive or ancestral to a living node
  std::vector<char> keep(nodes_.size(), 0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].in_use || !nodes_[i].alive) continue;
    std::int64_t cur = static_cast<std::int64_t>(i);
    while (cur >= 0 && !keep[static_cast<std::size_t>(cur)]) {
      keep[static_cast<std::size_t>(cur)] = 1;
      cur = nodes_[static_cast<std::size_t>(cur)].parent;
    }
  }
  std::vector<std::vector<std::int64_t>> children(nodes_.size());
  std::vector<std::int64_t> roots;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!keep[i]) continue;
    const auto p = nodes_[i].parent;
    if (p < 0)
      roots.push_back(static_cast<std::int64_t>(i));
    else
      children[static_cast<std::size_t>(p)].push_back(
          static_cast<std::int64_t>(i));
  }

  PhyloTree tree;
  std::vector<std::pair<std::int64_t, std::int64_t>> stack;  // (slot, dst)
  if (roots.size() == 1) {
    const auto r = roots.front();
    const auto& rn = nodes_[static_cast<std::size_t>(r)];
    const bool leafish = children[static_cast<std::size_t>(r)].empty();
    tree.add_root(static_cast<double>(rn.origin_time),
                  leafish ? std::to_string(rn.id) : std::string{});
    stack.emplace_back(r, tree.root());
  } else {
    tree.add_root(0.0);
    for (auto r : roots) {
      const auto& rn = nodes_[static_cast<std::size_t>(r)];
      const bool leafish = children[static_cast<std::size_t>(r)].empty();
      const auto dst =
          tree.add_child(tree.root(), static_cast<double>(rn.origin_time),
                         leafish ? std::to_string(rn.id) : std::string{});
      stack.emplace_back(r, dst);
    }
  }
  while (!stack.empty()) {
    const auto [slot, dst] = stack.back();
    stack.pop_back();
    const auto& n = nodes_[static_cast<std::size_t>(slot)];
    // a living taxon that is also an ancestor appears as its own leaf
    if (n.alive && !children[static_cast<std::size_t>(slot)].empty()) {
      tree.add_child(dst, static_cast<double>(n.origin_time),
                     std::to_string(n.id));
    }
    for (auto c : children[static_cast<std::size_t>(slot)]) {
      const auto& cn = nodes_[static_cast<std::size_t>(c)];
      const bool leafish = children[static_cast<std::size_t>(c)].empty();
      const auto cdst =
          tree.add_child(dst, static_cast<double>(cn.origin_time),
                         leafish ? std::to_string(cn.id) : std::string{});
      stack.emplace_back(c, cdst);
    }
  }
  PhyloTree out = std::move(tree);
  if (prune) out = out.prune_stem();
  if (collapse) out = out.collapse_unifurcations();
  return out;
}

}  // namespace strat
