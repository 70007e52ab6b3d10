#include "strat/trie_reconstruct.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "strat/mrca.hpp"

namespace strat {

namespace {

using u64 = std::uint64_t;

struct TrieNode {
  u64 rank = 0;
  u64 differentia = 0;
  std::int64_t parent = -1;
  std::vector<std::int64_t> children;   // internal trie nodes
  std::vector<std::int64_t> leaf_taxa;  // population indices ending here
};

struct Strata {
  std::vector<u64> ranks;
  std::vector<u64> diffs;
};

class TrieBuilder {
 public:
  TrieBuilder(const TrieOptions& options, TrieStats* stats)
      : options_(options), stats_(stats) {
    nodes_.push_back(TrieNode{});  // synthetic root, pre-origin
  }

  void insert(const Strata& s, std::int64_t taxon) {
    std::int64_t cur = 0;
    std::size_t i = 0;
    budget_ = options_.wildcard_visit_budget;
    while (i < s.ranks.size()) {
      const u64 t = s.ranks[i];
      const u64 d = s.diffs[i];
      // candidate edges: the exact (rank, differentia) child plus any child
      // at a rank this column no longer retains
      std::int64_t exact = -1;
      bool any_at_rank = false;
      bool any_wildcard = false;
      for (auto c : nodes_[static_cast<std::size_t>(cur)].children) {
        const auto& cn = nodes_[static_cast<std::size_t>(c)];
        if (cn.rank == t) {
          any_at_rank = true;
          if (cn.differentia == d) exact = c;
        } else if (cn.rank < t) {
          any_wildcard = true;
        }
      }
      if (exact >= 0 && !any_wildcard) {
        cur = exact;
        ++i;
        continue;
      }
      if (!any_wildcard) {
        // divergence (or fresh branch) at this node
        (void)any_at_rank;
        cur = attach_chain(cur, s, i);
        i = s.ranks.size();
        break;
      }
      // wildcard position: score candidate edges by their best consecutive
      // match run and follow the winner
      std::int64_t best = -1;
      u64 best_score = 0;
      for (auto c : nodes_[static_cast<std::size_t>(cur)].children) {
        const auto& cn = nodes_[static_cast<std::size_t>(c)];
        u64 score = 0;
        if (cn.rank == t) {
          if (cn.differentia != d) continue;  // mismatch: not traversable
          score = 1 + run_length(c, s, i + 1);
        } else if (cn.rank < t) {
          score = run_length(c, s, i);
        } else {
          continue;
        }
        if (best < 0 || score > best_score ||
            (score == best_score && tie_prefers(c, best))) {
          best = c;
          best_score = score;
        }
      }
      if (best < 0) {
        cur = attach_chain(cur, s, i);
        i = s.ranks.size();
        break;
      }
      if (stats_) stats_->wildcard_hops += nodes_[static_cast<std::size_t>(best)].rank != t;
      if (nodes_[static_cast<std::size_t>(best)].rank == t) ++i;
      cur = best;
    }
    nodes_[static_cast<std::size_t>(cur)].leaf_taxa.push_back(taxon);
  }

  PhyloTree materialize(const std::vector<Column>& population,
                        const std::vector<std::string>& labels) const {
    PhyloTree tree;
    tree.add_root(0.0);
    struct Item {
      std::int64_t src;
      std::int64_t dst;
    };
    std::vector<Item> stack{{0, tree.root()}};
    while (!stack.empty()) {
      const auto [src, dst] = stack.back();
      stack.pop_back();
      const auto& n = nodes_[static_cast<std::size_t>(src)];
      for (auto taxon : n.leaf_taxa) {
        tree.add_child(dst,
                       static_cast<double>(
                           population[static_cast<std::size_t>(taxon)].depth()),
                       labels[static_cast<std::size_t>(taxon)]);
      }
      for (auto c : n.children) {
        const auto& cn = nodes_[static_cast<std::size_t>(c)];
        const auto cdst =
            tree.add_child(dst, static_cast<double>(cn.rank), std::string{});
        stack.push_back({c, cdst});
      }
    }
    return tree;
  }

 private:
  // longest run of consecutive differentia matches starting at strata[i],
  // entering through node v; wildcard hops neither extend nor break a run
  u64 run_length(std::int64_t v, const Strata& s, std::size_t i) {
    if (i >= s.ranks.size()) return 0;
    if (budget_ == 0) {
      if (stats_) ++stats_->budget_exhaustions;
      return 0;
    }
    --budget_;
    const u64 t = s.ranks[i];
    const u64 d = s.diffs[i];
    u64 best = 0;
    for (auto c : nodes_[static_cast<std::size_t>(v)].children) {
      const auto& cn = nodes_[static_cast<std::size_t>(c)];
      u64 score = 0;
      if (cn.rank == t && cn.differentia == d) {
        score = 1 + run_length(c, s, i + 1);
      } else if (cn.rank < t) {
        score = run_length(c, s, i);
      }
      best = std::max(best, score);
      if (budget_ == 0) break;
    }
    return best;
  }

  bool tie_prefers(std::int64_t a, std::int64_t b) const {
    const auto& na = nodes_[static_cast<std::size_t>(a)];
    const auto& nb = nodes_[static_cast<std::size_t>(b)];
    if (na.differentia != nb.differentia)
      return na.differentia < nb.differentia;
    return a < b;  // older creation order
  }

  std::int64_t attach_chain(std::int64_t cur, const Strata& s, std::size_t i) {
    for (; i < s.ranks.size(); ++i) {
      nodes_.push_back(TrieNode{s.ranks[i], s.diffs[i], cur, {}, {}});
      const auto idx = static_cast<std::int64_t>(nodes_.size()) - 1;
      nodes_[static_cast<std::size_t>(cur)].children.push_back(idx);
      cur = idx;
    }
    return cur;
  }

  TrieOptions options_;
  TrieStats* stats_;
  u64 budget_ = 0;
  std::vector<TrieNode> nodes_;
};

void split_polytomies_at(PhyloTree* tree, std::int64_t node) {
  // expand >2-ary nodes into a zero-length bifurcation ladder, preserving
  // child order: (c0, c1, c2, c3) -> (c0, (c1, (c2, c3)))
  const auto kids = tree->node(node).children;
  for (auto c : kids) split_polytomies_at(tree, c);
  if (kids.size() <= 2) return;
  const double t = tree->node(node).origin_time;
  std::int64_t cur = node;
  std::size_t next = 0;
  while (kids.size() - next > 2) {
    tree->node(cur).children.clear();
    tree->node(cur).children.push_back(kids[next]);
    tree->node(kids[next]).parent = cur;
    const auto inner = tree->add_child(cur, t);  // appends itself to cur
    cur = inner;
    ++next;
  }
  tree->node(cur).children = {kids[next], kids[next + 1]};
  tree->node(kids[next]).parent = cur;
  tree->node(kids[next + 1]).parent = cur;
}

void correct_collision_bias(PhyloTree* tree, std::int64_t node,
                            double bias_strata) {
  for (auto c : tree->node(node).children) {
    auto& cn = tree->node(c);
    if (!cn.children.empty()) {
      const double parent_time = tree->node(node).origin_time;
      const double local_gap = std::max(1.0, cn.origin_time - parent_time);
      cn.origin_time =
          std::max(parent_time, cn.origin_time - bias_strata * local_gap);
    }
    correct_collision_bias(tree, c, bias_strata);
  }
}

}  // namespace

PhyloTree trie_reconstruct(const std::vector<Column>& population,
                           const std::vector<std::string>& labels_in,
                           const TrieOptions& options, TrieStats* stats) {
  if (population.empty())
    throw std::invalid_argument("trie_reconstruct: empty population");
  std::vector<std::string> labels = labels_in;
  if (labels.empty()) {
    labels.resize(population.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = std::to_string(i);
  }
  if (labels.size() != population.size())
    throw std::invalid_argument("trie_reconstruct: label count mismatch");
  for (const auto& col : population) {
    if (!(col.policy() == population.front().policy()) ||
        col.width_bits() != population.front().width_bits())
      throw incompatible_columns(
          "trie_reconstruct: population columns are incompatible");
  }

  // youngest first so no insertion retroactively injects a trie node
  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return population[a].depth() < population[b].depth();
  });

  TrieBuilder builder(options, stats);
  for (auto idx : order) {
    const auto& col = population[idx];
    Strata s;
    s.ranks.reserve(col.size());
    s.diffs.reserve(col.size());
    for (std::size_t i = 0; i < col.size(); ++i) {
      s.ranks.push_back(col.rank_at(i));
      s.diffs.push_back(col.differentia_at(i));
    }
    builder.insert(s, static_cast<std::int64_t>(idx));
  }

  PhyloTree tree =
      builder.materialize(population, labels).collapse_unifurcations();
  if (options.collision_bias_correction) {
    correct_collision_bias(&tree, tree.root(),
                           expected_collision_bias(
                               population.front().width_bits()));
  }
  if (options.split_polytomies) split_polytomies_at(&tree, tree.root());
  return tree;
}

}  // namespace strat
