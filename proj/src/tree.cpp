#include "strat/tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace strat {

namespace {

std::string time_token(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9f", t);
  return buf;
}

}  // namespace

std::int64_t PhyloTree::add_root(double origin_time, std::string label) {
  if (root_ != kNoParent)
    throw std::invalid_argument("tree already has a root");
  nodes_.push_back({kNoParent, origin_time, std::move(label), {}});
  root_ = static_cast<std::int64_t>(nodes_.size()) - 1;
  return root_;
}

std::int64_t PhyloTree::add_child(std::int64_t parent, double origin_time,
                                  std::string label) {
  nodes_.push_back({parent, origin_time, std::move(label), {}});
  const auto idx = static_cast<std::int64_t>(nodes_.size()) - 1;
  nodes_[static_cast<std::size_t>(parent)].children.push_back(idx);
  return idx;
}

std::vector<std::int64_t> PhyloTree::leaves() const {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].children.empty()) out.push_back(static_cast<std::int64_t>(i));
  return out;
}

std::vector<std::string> PhyloTree::leaf_labels() const {
  std::vector<std::string> out;
  for (auto i : leaves()) out.push_back(node(i).label);
  std::sort(out.begin(), out.end());
  return out;
}

void PhyloTree::validate() const {
  if (empty()) return;
  if (root_ == kNoParent) throw std::invalid_argument("tree has no root");
  std::size_t rooted = 0;
  for (const auto& n : nodes_) rooted += n.parent == kNoParent;
  if (rooted != 1) throw std::invalid_argument("tree must have a single root");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (n.parent != kNoParent &&
        n.origin_time < node(n.parent).origin_time - 1e-9)
      throw std::invalid_argument("child origin_time precedes parent's");
  }
  std::set<std::string> seen;
  for (auto i : leaves()) {
    if (!seen.insert(node(i).label).second)
      throw std::invalid_argument("duplicate leaf label: " + node(i).label);
  }
}

PhyloTree PhyloTree::collapse_unifurcations() const {
  PhyloTree out;
  if (empty()) return out;
  // walk from the root, skipping interior unary chains
  struct Item {
    std::int64_t src;
    std::int64_t dst_parent;
  };
  std::vector<Item> stack;
  out.add_root(node(root_).origin_time, node(root_).label);
  for (auto c : node(root_).children) stack.push_back({c, out.root()});
  while (!stack.empty()) {
    auto [src, dst_parent] = stack.back();
    stack.pop_back();
    while (nodes_[static_cast<std::size_t>(src)].children.size() == 1)
      src = nodes_[static_cast<std::size_t>(src)].children.front();
    const auto& n = nodes_[static_cast<std::size_t>(src)];
    const auto dst = out.add_child(dst_parent, n.origin_time, n.label);
    for (auto c : n.children) stack.push_back({c, dst});
  }
  return out;
}

PhyloTree PhyloTree::prune_stem() const {
  if (empty()) return {};
  std::int64_t top = root_;
  while (node(top).children.size() == 1) top = node(top).children.front();
  if (top == root_) return *this;
  PhyloTree out;
  struct Item {
    std::int64_t src;
    std::int64_t dst_parent;
  };
  out.add_root(node(top).origin_time, node(top).label);
  std::vector<Item> stack;
  for (auto c : node(top).children) stack.push_back({c, out.root()});
  while (!stack.empty()) {
    auto [src, dst_parent] = stack.back();
    stack.pop_back();
    const auto& n = nodes_[static_cast<std::size_t>(src)];
    const auto dst = out.add_child(dst_parent, n.origin_time, n.label);
    for (auto c : n.children) stack.push_back({c, dst});
  }
  return out;
}

namespace {

std::string signature_of(const PhyloTree& t, std::int64_t i, bool with_times) {
  const auto& n = t.node(i);
  std::string sig = "(";
  if (n.children.empty()) {
    sig += n.label;
  } else {
    std::vector<std::string> parts;
    parts.reserve(n.children.size());
    for (auto c : n.children) parts.push_back(signature_of(t, c, with_times));
    std::sort(parts.begin(), parts.end());
    for (const auto& p : parts) sig += p;
  }
  if (with_times) {
    sig += "@";
    sig += time_token(n.origin_time);
  }
  sig += ")";
  return sig;
}

}  // namespace

std::string PhyloTree::canonical_signature(bool with_times) const {
  if (empty()) return "()";
  return signature_of(*this, root_, with_times);
}

bool same_topology(const PhyloTree& a, const PhyloTree& b) {
  return a.canonical_signature(false) == b.canonical_signature(false);
}

}  // namespace strat
