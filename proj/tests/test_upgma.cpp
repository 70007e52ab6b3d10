#include "strat/upgma.hpp"

#include <random>
#include <stdexcept>

#include "doctest.h"

using strat::DistanceMatrix;
using strat::PhyloTree;

namespace {

double height_of(const PhyloTree& t, std::int64_t leaf) {
  return t.node(leaf).origin_time - t.node(t.root()).origin_time;
}

}  // namespace

TEST_CASE("two taxa merge at half their distance") {
  DistanceMatrix m(2);
  m.set(0, 1, 10.0);
  const PhyloTree t = upgma(m, {"A", "B"});
  REQUIRE(t.size() == 3);
  for (auto leaf : t.leaves()) CHECK(height_of(t, leaf) == doctest::Approx(5.0));
}

TEST_CASE("three-taxon worked example") {
  DistanceMatrix m(3);
  m.set(0, 1, 2.0);
  m.set(0, 2, 8.0);
  m.set(1, 2, 8.0);
  const PhyloTree t = upgma(m, {"A", "B", "C"});
  t.validate();
  // ((A,B),C): root at height 4, inner node at height 1
  REQUIRE(t.node(t.root()).children.size() == 2);
  double inner_height = -1, root_height = -height_of(t, t.leaves().front());
  (void)root_height;
  for (auto c : t.node(t.root()).children) {
    if (!t.node(c).children.empty())
      inner_height = t.node(c).origin_time - t.node(t.root()).origin_time;
  }
  CHECK(-t.node(t.root()).origin_time == doctest::Approx(4.0));
  CHECK(inner_height == doctest::Approx(3.0));  // from root -4 up to -1
  // inner node groups A with B
  for (auto c : t.node(t.root()).children) {
    if (t.node(c).children.empty()) CHECK(t.node(c).label == "C");
  }
}

TEST_CASE("identical rows merge at equal heights") {
  DistanceMatrix m(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) m.set(i, j, 6.0);
  const PhyloTree t = upgma(m, {"A", "B", "C", "D"});
  t.validate();
  for (auto leaf : t.leaves()) CHECK(height_of(t, leaf) == doctest::Approx(3.0));
  // every internal node sits at the same height: zero-length ladder
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& n = t.node(static_cast<std::int64_t>(i));
    if (!n.children.empty())
      CHECK(n.origin_time == doctest::Approx(-3.0));
  }
}

TEST_CASE("upgma output is ultrametric and monotone on random matrices") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 9;
    DistanceMatrix m(n);
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = std::to_string(i);
      for (std::size_t j = i + 1; j < n; ++j)
        m.set(i, j, std::uniform_real_distribution<double>(0.1, 50.0)(rng));
    }
    const PhyloTree t = upgma(m, labels);
    CHECK_NOTHROW(t.validate());  // includes parent<=child monotonicity
    // all leaves sit at distance root-height from the root
    const double h = height_of(t, t.leaves().front());
    for (auto leaf : t.leaves()) CHECK(height_of(t, leaf) == doctest::Approx(h));
  }
}

TEST_CASE("degenerate inputs are rejected") {
  DistanceMatrix one(1);
  CHECK_THROWS_AS(upgma(one, {"A"}), std::invalid_argument);

  DistanceMatrix m(2);
  m.set(0, 1, 3.0);
  CHECK_THROWS_AS(upgma(m, {"A"}), std::invalid_argument);  // label mismatch

  DistanceMatrix neg(2);
  neg.set(0, 1, -1.0);
  CHECK_THROWS_AS(upgma(neg, {"A", "B"}), std::invalid_argument);
}

TEST_CASE("ties break toward the lowest index pair") {
  DistanceMatrix m(3);
  m.set(0, 1, 4.0);
  m.set(0, 2, 4.0);
  m.set(1, 2, 4.0);
  const PhyloTree t = upgma(m, {"A", "B", "C"});
  // (A,B) merges first; C joins later
  for (auto c : t.node(t.root()).children) {
    if (t.node(c).children.empty()) CHECK(t.node(c).label == "C");
  }
}
