#include "strat/mrca.hpp"

#include <cmath>

#include "doctest.h"
#include "strat/column.hpp"

using strat::Column;
using strat::PolicySpec;

namespace {

Column grown(const PolicySpec& p, unsigned width, std::uint64_t seed,
             int depth) {
  Column c(p, width, seed);
  for (int i = 0; i < depth; ++i) c.deposit();
  return c;
}

void grow_to(Column* c, std::uint64_t depth) {
  while (c->depth() < depth) c->deposit();
}

}  // namespace

TEST_CASE("align_columns intersects retained ranks") {
  const auto p = PolicySpec::recency_proportional(2);
  const Column a = grown(p, 8, 1, 100);
  const Column b = grown(p, 8, 2, 100);
  const auto aligned = strat::align_columns(a, b);
  const auto retained = strat::retained_ranks(p, 100);
  REQUIRE(aligned.size() == retained.size());
  for (std::size_t i = 0; i < aligned.size(); ++i)
    CHECK(aligned[i].rank == retained[i]);

  // unequal depths: common ranks are the deeper column's view restricted to
  // the shallower depth
  const Column deep = grown(p, 8, 3, 150);
  const auto uneven = strat::align_columns(a, deep);
  for (std::size_t i = 0; i + 1 < uneven.size(); ++i)
    CHECK(uneven[i].rank < uneven[i + 1].rank);
  CHECK(uneven.back().rank < 100);
  const auto deep_view = strat::retained_ranks(p, 150);
  for (const auto& s : uneven) {
    CHECK(std::binary_search(deep_view.begin(), deep_view.end(), s.rank));
  }

  const Column empty(p, 8, 4);
  CHECK(strat::align_columns(empty, a).empty());

  const Column other_policy = grown(PolicySpec::recency_proportional(3), 8, 5, 100);
  CHECK_THROWS_AS(strat::align_columns(a, other_policy),
                  strat::incompatible_columns);
  const Column other_width = grown(p, 64, 6, 100);
  CHECK_THROWS_AS(strat::align_columns(a, other_width),
                  strat::incompatible_columns);
}

TEST_CASE("required consecutive matches from the closed form") {
  CHECK(strat::required_consecutive_matches(1, 0.95) == 5);
  CHECK(strat::required_consecutive_matches(8, 0.95) == 1);
  CHECK(strat::required_consecutive_matches(64, 0.95) == 1);
  CHECK(strat::required_consecutive_matches(1, 0.99) == 7);  // 2^-7 < 0.01
  CHECK_THROWS_AS(strat::required_consecutive_matches(1, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(strat::required_consecutive_matches(1, 0.0),
                  std::invalid_argument);
}

TEST_CASE("identical columns report no disparity") {
  const auto p = PolicySpec::fixed_resolution(1);
  const Column a = grown(p, 64, 7, 120);
  Column b = a;
  const auto bounds = strat::mrca_bounds(a, b, 0.95);
  CHECK_FALSE(bounds.upper_rank.has_value());
  CHECK(bounds.lower_rank.has_value());  // confident match depth exists
}

TEST_CASE("divergence at generation 500 under full retention") {
  const auto p = PolicySpec::fixed_resolution(1);
  Column parent = grown(p, 64, 11, 500);
  Column a = parent.clone_for_offspring(21);
  Column b = parent.clone_for_offspring(22);
  grow_to(&a, 1000);
  grow_to(&b, 1000);
  const auto bounds = strat::mrca_bounds(a, b, 0.95);
  REQUIRE(bounds.upper_rank.has_value());
  CHECK(*bounds.upper_rank == 500);
  REQUIRE(bounds.lower_rank.has_value());
  CHECK(*bounds.lower_rank == 499);
  CHECK(strat::pairwise_distance(a, b, 0.95) == doctest::Approx(1001.0));
}

TEST_CASE("expected collision bias follows the geometric tail mean") {
  CHECK(strat::expected_collision_bias(1) == doctest::Approx(1.0));
  CHECK(strat::expected_collision_bias(8) == doctest::Approx(1.0 / 255.0));
  CHECK(strat::expected_collision_bias(64) < 1e-18);
}

TEST_CASE("collision bias matches Monte-Carlo overshoot for narrow widths") {
  // unrelated full-retention columns: every aligned match is spurious, so
  // the first-mismatch index estimates the expected overshoot
  const auto p = PolicySpec::fixed_resolution(1);
  for (unsigned width : {1u, 8u}) {
    double total = 0;
    const int trials = 4000;
    for (int t = 0; t < trials; ++t) {
      const Column a = grown(p, width, 100000 + 2 * t, 40);
      const Column b = grown(p, width, 100001 + 2 * t, 40);
      const auto aligned = strat::align_columns(a, b);
      std::size_t overshoot = 0;
      while (overshoot < aligned.size() &&
             aligned[overshoot].a_differentia == aligned[overshoot].b_differentia)
        ++overshoot;
      total += static_cast<double>(overshoot);
    }
    const double mean = total / trials;
    const double expect = strat::expected_collision_bias(width);
    CHECK(std::abs(mean - expect) < 0.1);
  }
}

TEST_CASE("pairwise distance basics") {
  const auto p = PolicySpec::recency_proportional(3);
  const Column a = grown(p, 64, 31, 100);
  CHECK(strat::pairwise_distance(a, a, 0.95) == doctest::Approx(0.0));
  for (int t = 0; t < 20; ++t) {
    Column parent = grown(p, 1, 600 + t, 50 + t);
    Column x = parent.clone_for_offspring(900 + t);
    Column y = parent.clone_for_offspring(950 + t);
    grow_to(&x, 80 + t);
    grow_to(&y, 90 + t);
    CHECK(strat::pairwise_distance(x, y, 0.95) ==
          doctest::Approx(strat::pairwise_distance(y, x, 0.95)));
  }
}

TEST_CASE("upper bound is hard across widths and policies") {
  for (unsigned width : {1u, 8u, 64u}) {
    for (const auto& p : {PolicySpec::fixed_resolution(1),
                          PolicySpec::recency_proportional(2),
                          PolicySpec::geom_seq_nth_root(4)}) {
      for (int t = 0; t < 50; ++t) {
        const std::uint64_t div = 20 + 7 * t % 100;
        Column parent = grown(p, width, 7000 + t, static_cast<int>(div));
        Column x = parent.clone_for_offspring(8000 + 2 * t);
        Column y = parent.clone_for_offspring(8001 + 2 * t);
        grow_to(&x, div + 60);
        grow_to(&y, div + 90);
        const auto bounds = strat::mrca_bounds(x, y, 0.95);
        if (bounds.upper_rank.has_value()) {
          CAPTURE(width);
          CAPTURE(t);
          REQUIRE(div <= *bounds.upper_rank);
        }
      }
    }
  }
}
