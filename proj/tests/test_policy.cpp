#include "strat/policy.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

using strat::PolicyFamily;
using strat::PolicySpec;
using strat::RankVec;

using u64 = std::uint64_t;

namespace {

std::vector<PolicySpec> small_grid() {
  std::vector<PolicySpec> grid;
  for (u64 r : {1, 2, 3, 7, 10}) {
    grid.push_back(PolicySpec::fixed_resolution(r));
    grid.push_back(PolicySpec::depth_proportional(r));
    grid.push_back(PolicySpec::tapered_depth_proportional(r));
    grid.push_back(PolicySpec::recency_proportional(r));
  }
  grid.push_back(PolicySpec::recency_proportional(0));
  for (u64 a : {1, 2, 4, 8}) grid.push_back(PolicySpec::geom_seq_nth_root(a));
  for (u64 c : {8, 10, 32}) grid.push_back(PolicySpec::curbed_recency_proportional(c));
  return grid;
}

oracle::Ranks oracle_ranks(const PolicySpec& p, u64 n) {
  switch (p.family) {
    case PolicyFamily::kFixedResolution: return oracle::fr(p.param, n);
    case PolicyFamily::kDepthProportional: return oracle::dpr(p.param, n);
    case PolicyFamily::kTaperedDepthProportional: return oracle::tdpr(p.param, n);
    case PolicyFamily::kRecencyProportional: return oracle::rpr(p.param, n);
    case PolicyFamily::kGeomSeqNthRoot: return oracle::gsnr(p.param, n);
    case PolicyFamily::kCurbedRecencyProportional: return oracle::crpr(p.param, n);
  }
  return {};
}

}  // namespace

TEST_CASE("worked examples: retained_ranks") {
  CHECK(strat::retained_ranks(PolicySpec::fixed_resolution(3), 10) ==
        RankVec{0, 3, 6, 9});
  CHECK(strat::retained_ranks(PolicySpec::geom_seq_nth_root(2), 16) ==
        RankVec{0, 8, 10, 12, 14, 15});
  for (const auto& p : small_grid())
    CHECK(strat::retained_ranks(p, 0).empty());
}

TEST_CASE("worked examples: dropped_ranks") {
  const auto fr3 = PolicySpec::fixed_resolution(3);
  CHECK(strat::dropped_ranks(fr3, 10).empty());  // rank 9 is a multiple of 3
  CHECK(strat::dropped_ranks(fr3, 11) == RankVec{10});
  for (const auto& p : small_grid()) CHECK(strat::dropped_ranks(p, 1).empty());
}

TEST_CASE("worked examples: retention_predicate") {
  CHECK(strat::retention_predicate(PolicySpec::fixed_resolution(3), 6, 10));
  for (const auto& p : small_grid()) {
    for (u64 n : {1, 5, 64, 101})
      CHECK(strat::retention_predicate(p, n - 1, n));  // most recent retained
  }
  // at depth 64 under depth-proportional r=2 the grid is 32, so odd ranks
  // drop (except the always-retained most recent one)
  const auto dpr2 = PolicySpec::depth_proportional(2);
  for (u64 t = 1; t < 63; t += 2) CHECK_FALSE(strat::retention_predicate(dpr2, t, 64));
}

TEST_CASE("worked examples: retained_count") {
  CHECK(strat::retained_count(PolicySpec::fixed_resolution(5), 1000) == 201);
  for (const auto& p : small_grid()) CHECK(strat::retained_count(p, 0) == 0);
  const auto dpr3 = PolicySpec::depth_proportional(3);
  const u64 c = strat::retained_count(dpr3, 10000);
  CHECK(c <= 2 * 3 + 1);
  CHECK(c == oracle::dpr(3, 10000).size());
}

TEST_CASE("worked examples: rank_at_index") {
  CHECK(strat::rank_at_index(PolicySpec::fixed_resolution(3), 2, 10) == 6);
  CHECK(strat::rank_at_index(PolicySpec::geom_seq_nth_root(2), 3, 16) == 12);
  for (const auto& p : small_grid()) {
    for (u64 n : {1, 9, 100}) CHECK(strat::rank_at_index(p, 0, n) == 0);
  }
}

TEST_CASE("worked examples: gap_bound") {
  const auto fr4 = PolicySpec::fixed_resolution(4);
  for (u64 t : {0, 17, 42, 98}) CHECK(strat::gap_bound(fr4, t, 100) == 4);
  CHECK(strat::gap_bound(PolicySpec::recency_proportional(2), 0, 12) == 6);
  for (const auto& p : small_grid())
    CHECK(strat::gap_bound(p, 99, 100) == 1);  // most recent rank
}

TEST_CASE("retained_ranks matches the independent oracles") {
  for (const auto& p : small_grid()) {
    const u64 n_max = p.family == PolicyFamily::kCurbedRecencyProportional &&
                              p.param <= 10
                          ? 600   // crosses the c=8 / c=10 handoff depth
                          : 320;
    for (u64 n = 0; n <= n_max; ++n) {
      const auto got = strat::retained_ranks(p, n);
      const auto want = oracle_ranks(p, n);
      CAPTURE(strat::family_name(p.family));
      CAPTURE(p.param);
      CAPTURE(n);
      REQUIRE(got == want);
    }
  }
}

TEST_CASE("operation coherence across the grid") {
  for (const auto& p : small_grid()) {
    for (u64 n = 0; n <= 200; ++n) {
      const auto ranks = strat::retained_ranks(p, n);
      CAPTURE(strat::family_name(p.family));
      CAPTURE(p.param);
      CAPTURE(n);
      REQUIRE(strat::retained_count(p, n) == ranks.size());
      REQUIRE(std::is_sorted(ranks.begin(), ranks.end()));
      if (n > 0) {
        REQUIRE(ranks.front() == 0);        // progenitor always retained
        REQUIRE(ranks.back() == n - 1);     // most recent always retained
      }
      // predicate == membership, over every rank
      for (u64 t = 0; t < n; ++t) {
        const bool member = std::binary_search(ranks.begin(), ranks.end(), t);
        REQUIRE(strat::retention_predicate(p, t, n) == member);
      }
      // index map is the identity on the retained set
      for (u64 i = 0; i < ranks.size(); ++i) {
        REQUIRE(strat::rank_at_index(p, i, n) == ranks[i]);
        REQUIRE(strat::retained_index_of(p, ranks[i], n) == i);
      }
      // generator form consistency
      if (n >= 1) {
        const auto next = strat::retained_ranks(p, n + 1);
        const auto dropped = strat::dropped_ranks(p, n);
        REQUIRE(dropped == oracle::set_diff(ranks, next));
        // dropped ranks are disjoint from the newly deposited rank
        for (u64 d : dropped) REQUIRE(d != n);
      }
    }
  }
}

TEST_CASE("self-consistency on the small grid") {
  for (const auto& p : small_grid()) {
    RankVec prev;
    for (u64 n = 0; n <= 400; ++n) {
      const auto cur = strat::retained_ranks(p, n);
      for (u64 t : cur) {
        const bool ok =
            (n >= 1 && t == n - 1) ||
            std::binary_search(prev.begin(), prev.end(), t);
        CAPTURE(strat::family_name(p.family));
        CAPTURE(p.param);
        CAPTURE(n);
        CAPTURE(t);
        REQUIRE(ok);
      }
      prev = cur;
    }
  }
}

TEST_CASE("parameter domain errors") {
  CHECK_THROWS_AS(strat::retained_ranks(PolicySpec::fixed_resolution(0), 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(strat::retained_ranks(PolicySpec::depth_proportional(0), 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(strat::retained_ranks(PolicySpec::geom_seq_nth_root(0), 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(strat::retained_ranks(PolicySpec::geom_seq_nth_root(65), 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      strat::retained_ranks(PolicySpec::curbed_recency_proportional(7), 5),
      std::invalid_argument);
  CHECK_NOTHROW(strat::retained_ranks(PolicySpec::recency_proportional(0), 5));
}

TEST_CASE("argument range errors") {
  const auto p = PolicySpec::fixed_resolution(2);
  CHECK_THROWS_AS(strat::retention_predicate(p, 10, 10), std::out_of_range);
  CHECK_THROWS_AS(strat::rank_at_index(p, 1000, 10), std::out_of_range);
  CHECK_THROWS_AS(strat::gap_bound(p, 10, 10), std::out_of_range);
  CHECK_THROWS_AS(strat::dropped_ranks(p, 0), std::out_of_range);
}

TEST_CASE("family names round-trip") {
  for (auto f : {PolicyFamily::kFixedResolution, PolicyFamily::kDepthProportional,
                 PolicyFamily::kTaperedDepthProportional,
                 PolicyFamily::kRecencyProportional, PolicyFamily::kGeomSeqNthRoot,
                 PolicyFamily::kCurbedRecencyProportional}) {
    CHECK(strat::family_from_name(strat::family_name(f)) == f);
  }
  CHECK_THROWS_AS(strat::family_from_name("nope"), std::invalid_argument);
}

TEST_CASE("recency-proportional nesting in the resolution parameter") {
  // needed by the curbed family's stage switching
  for (u64 n = 0; n <= 300; ++n) {
    oracle::Ranks prev;
    for (u64 r : {0, 1, 2, 3, 7, 15}) {
      const auto cur = strat::retained_ranks(PolicySpec::recency_proportional(r), n);
      for (u64 t : prev) {
        CAPTURE(n);
        CAPTURE(r);
        REQUIRE(std::binary_search(cur.begin(), cur.end(), t));
      }
      prev = cur;
    }
  }
}
