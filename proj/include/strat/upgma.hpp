#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "strat/tree.hpp"

namespace strat {

// Symmetric nonnegative distance matrix with a zero diagonal.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    d_[i * n_ + j] = v;
    d_[j * n_ + i] = v;
  }

  // throws std::invalid_argument on asymmetry, negative entries or a
  // nonzero diagonal
  void validate() const;

 private:
  std::size_t n_;
  std::vector<double> d_;
};

// Unweighted pair-group agglomeration with arithmetic-mean linkage. Node
// heights are half the merge distance; ties break toward the lowest index
// pair. Leaves sit at origin_time 0 and internal nodes at minus their
// ultrametric height, so child times never precede their parent's.
PhyloTree upgma(const DistanceMatrix& matrix,
                const std::vector<std::string>& labels);

}  // namespace strat
