#include "strat/upgma.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace strat {

void DistanceMatrix::validate() const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (at(i, i) != 0.0)
      throw std::invalid_argument("distance matrix: nonzero diagonal");
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (at(i, j) != at(j, i))
        throw std::invalid_argument("distance matrix: asymmetric");
      if (at(i, j) < 0.0 || !std::isfinite(at(i, j)))
        throw std::invalid_argument("distance matrix: bad entry");
    }
  }
}

PhyloTree upgma(const DistanceMatrix& matrix,
                const std::vector<std::string>& labels) {
  const std::size_t n = matrix.size();
  if (n < 2) throw std::invalid_argument("upgma: need at least two taxa");
  if (labels.size() != n)
    throw std::invalid_argument("upgma: labels must match matrix size");
  matrix.validate();

  // working copy over active cluster slots, with nearest-neighbour caching
  std::vector<double> d(matrix.size() * matrix.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = matrix.at(i, j);

  struct Cluster {
    bool active = true;
    std::size_t weight = 1;   // member count
    double height = 0.0;      // ultrametric height of the cluster node
    std::vector<std::size_t> member_nodes;  // pending subtree roots
  };
  std::vector<Cluster> clusters(n);

  struct Pending {
    double height;
    std::string label;               // leaf label, or empty
    std::vector<std::size_t> kids;   // indices into `pending`
  };
  std::vector<Pending> pending;
  pending.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    pending.push_back({0.0, labels[i], {}});
    clusters[i].member_nodes = {i};
  }

  const auto better = [&](std::size_t ai, std::size_t aj, double ad,
                          std::size_t bi, std::size_t bj, double bd) {
    // ties break toward the lowest index pair
    if (ad != bd) return ad < bd;
    const auto alo = std::min(ai, aj), ahi = std::max(ai, aj);
    const auto blo = std::min(bi, bj), bhi = std::max(bi, bj);
    return alo != blo ? alo < blo : ahi < bhi;
  };

  // nearest-neighbour cache keeps merges near O(n) each
  std::vector<std::size_t> nn(n, 0);
  const auto recompute_nn = [&](std::size_t i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = i;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !clusters[j].active) continue;
      if (arg == i || better(i, j, d[i * n + j], i, arg, best)) {
        best = d[i * n + j];
        arg = j;
      }
    }
    nn[i] = arg;
  };
  for (std::size_t i = 0; i < n; ++i) recompute_nn(i);

  std::size_t remaining = n;
  while (remaining > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    bool have = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!clusters[i].active || nn[i] == i) continue;
      const double dij = d[i * n + nn[i]];
      if (!have || better(i, nn[i], dij, bi, bj, best)) {
        best = dij;
        bi = i;
        bj = nn[i];
        have = true;
      }
    }
    if (bi > bj) std::swap(bi, bj);
    // merge bj into bi with arithmetic-mean linkage
    const std::size_t wi = clusters[bi].weight;
    const std::size_t wj = clusters[bj].weight;
    for (std::size_t k = 0; k < n; ++k) {
      if (!clusters[k].active || k == bi || k == bj) continue;
      const double merged =
          (static_cast<double>(wi) * d[bi * n + k] +
           static_cast<double>(wj) * d[bj * n + k]) /
          static_cast<double>(wi + wj);
      d[bi * n + k] = merged;
      d[k * n + bi] = merged;
    }
    pending.push_back({best / 2.0, {}, {}});
    auto& joined = pending.back();
    for (auto m : clusters[bi].member_nodes) joined.kids.push_back(m);
    for (auto m : clusters[bj].member_nodes) joined.kids.push_back(m);
    clusters[bi].member_nodes = {pending.size() - 1};
    clusters[bi].weight = wi + wj;
    clusters[bi].height = best / 2.0;
    clusters[bj].active = false;
    --remaining;
    if (remaining == 1) break;
    // repair the cache: stale pointers to the merged pair rescan; everyone
    // else at most adopts the merged cluster when it moved closer
    for (std::size_t k = 0; k < n; ++k) {
      if (!clusters[k].active || k == bi) continue;
      if (nn[k] == bi || nn[k] == bj) {
        recompute_nn(k);
      } else if (better(k, bi, d[k * n + bi], k, nn[k], d[k * n + nn[k]])) {
        nn[k] = bi;
      }
    }
    recompute_nn(bi);
  }

  // materialize: origin_time = -height keeps parents at or before children
  std::size_t root_idx = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (clusters[i].active) root_idx = clusters[i].member_nodes.front();

  PhyloTree tree;
  struct Item {
    std::size_t src;
    std::int64_t dst_parent;
  };
  tree.add_root(-pending[root_idx].height, pending[root_idx].label);
  std::vector<Item> stack;
  for (auto k : pending[root_idx].kids) stack.push_back({k, tree.root()});
  while (!stack.empty()) {
    const auto [src, dst_parent] = stack.back();
    stack.pop_back();
    const auto dst =
        tree.add_child(dst_parent, -pending[src].height, pending[src].label);
    for (auto k : pending[src].kids) stack.push_back({k, dst});
  }
  return tree;
}

}  // namespace strat
