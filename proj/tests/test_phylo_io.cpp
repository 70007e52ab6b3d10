#include "strat/phylo_io.hpp"

#include <random>
#include <sstream>

#include "doctest.h"
#include "strat/tree.hpp"

using strat::PhyloTree;

namespace {

// random rooted tree with exactly `leaves` integer-labeled leaves and
// nondecreasing times
PhyloTree random_tree(std::uint64_t seed, int leaves) {
  std::mt19937_64 rng(seed);
  PhyloTree t;
  std::vector<std::int64_t> all;
  all.push_back(t.add_root(0));
  int leaf_count = 1;  // a bare root counts as a leaf
  while (leaf_count < leaves) {
    const auto v =
        all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
    const auto grow = [&](std::int64_t parent) {
      const double time = t.node(parent).origin_time +
                          std::uniform_int_distribution<int>(1, 5)(rng);
      all.push_back(t.add_child(parent, time));
    };
    if (t.node(v).children.empty()) {
      grow(v);  // v stops being a leaf,
      grow(v);  // its two children take over: net +1
    } else {
      grow(v);
    }
    ++leaf_count;
  }
  int label = 0;
  for (auto i : t.leaves()) t.node(i).label = std::to_string(label++);
  return t;
}

}  // namespace

TEST_CASE("alife csv round-trips topology, times and leaf labels") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PhyloTree t = random_tree(seed, 12);
    std::stringstream ss;
    strat::write_alife_csv(t, ss);
    const PhyloTree back = strat::read_alife_csv(ss);
    CHECK(back.canonical_signature() == t.canonical_signature());
    CHECK(back.leaf_labels() == t.leaf_labels());
  }
}

TEST_CASE("alife csv accepts [none] roots and rejects malformed input") {
  std::stringstream good(
      "id,ancestor_list,origin_time,destruction_time\n"
      "0,\"[none]\",0,inf\n"
      "1,\"[0]\",3,inf\n"
      "2,\"[0]\",4,inf\n");
  const PhyloTree t = strat::read_alife_csv(good);
  CHECK(t.size() == 3);
  CHECK(t.node(t.root()).children.size() == 2);

  std::stringstream cyclic(
      "id,ancestor_list,origin_time,destruction_time\n"
      "0,\"[none]\",0,inf\n"
      "1,\"[2]\",1,inf\n"
      "2,\"[1]\",1,inf\n");
  CHECK_THROWS_AS(strat::read_alife_csv(cyclic), strat::phylo_parse_error);

  std::stringstream rootless(
      "id,ancestor_list,origin_time,destruction_time\n"
      "1,\"[2]\",1,inf\n"
      "2,\"[1]\",1,inf\n");
  CHECK_THROWS_AS(strat::read_alife_csv(rootless), strat::phylo_parse_error);

  std::stringstream missing_parent(
      "id,ancestor_list,origin_time,destruction_time\n"
      "0,\"[none]\",0,inf\n"
      "1,\"[9]\",1,inf\n");
  CHECK_THROWS_AS(strat::read_alife_csv(missing_parent), strat::phylo_parse_error);

  std::stringstream dup(
      "id,ancestor_list,origin_time,destruction_time\n"
      "0,\"[none]\",0,inf\n"
      "0,\"[0]\",1,inf\n");
  CHECK_THROWS_AS(strat::read_alife_csv(dup), strat::phylo_parse_error);
}

TEST_CASE("multi-root csv files gain a synthetic root") {
  std::stringstream forest(
      "id,ancestor_list,origin_time,destruction_time\n"
      "0,\"[none]\",0,inf\n"
      "1,\"[none]\",0,inf\n");
  const PhyloTree t = strat::read_alife_csv(forest);
  CHECK(t.size() == 3);
  CHECK(t.node(t.root()).children.size() == 2);
}

TEST_CASE("newick writer emits the forced two-leaf form") {
  PhyloTree t;
  const auto root = t.add_root(5);
  t.add_child(root, 10, "A");
  t.add_child(root, 10, "B");
  CHECK(strat::write_newick(t) == "(A:5,B:5):5;");
}

TEST_CASE("newick polytomy keeps all children") {
  PhyloTree t;
  const auto root = t.add_root(0);
  t.add_child(root, 1, "A");
  t.add_child(root, 2, "B");
  t.add_child(root, 3, "C");
  CHECK(strat::write_newick(t) == "(A:1,B:2,C:3):0;");
}

TEST_CASE("newick round-trips random trees") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const PhyloTree t = random_tree(seed, 10);
    const PhyloTree back = strat::read_newick(strat::write_newick(t));
    CHECK(back.canonical_signature() == t.canonical_signature());
  }
}

TEST_CASE("newick quotes labels with metacharacters") {
  PhyloTree t;
  const auto root = t.add_root(0);
  t.add_child(root, 1, "has space");
  t.add_child(root, 2, "par(en's");
  const auto text = strat::write_newick(t);
  const PhyloTree back = strat::read_newick(text);
  CHECK(back.leaf_labels() == t.leaf_labels());
}

TEST_CASE("newick parser rejects garbage") {
  CHECK_THROWS_AS(strat::read_newick("(A:1,B:2"), strat::phylo_parse_error);
  CHECK_THROWS_AS(strat::read_newick("(A:x);"), strat::phylo_parse_error);
}

TEST_CASE("robinson-foulds on the worked examples") {
  const auto quartet = [](const char* nwk) { return strat::read_newick(nwk); };
  const PhyloTree same = quartet("((A:1,B:1):1,(C:1,D:1):1):0;");
  CHECK(strat::robinson_foulds(same, same) == std::pair<std::uint64_t, double>{0, 1.0});

  const PhyloTree other = quartet("((A:1,C:1):1,(B:1,D:1):1):0;");
  CHECK(strat::robinson_foulds(same, other) ==
        std::pair<std::uint64_t, double>{2, 0.0});

  const PhyloTree star = quartet("(A:1,B:1,C:1,D:1):0;");
  const auto [d, s] = strat::robinson_foulds(star, same);
  CHECK(d == 1);
  CHECK(s == 0.0);
}

TEST_CASE("robinson-foulds behaves like a metric on random trees") {
  std::vector<PhyloTree> trees;
  for (std::uint64_t seed = 30; seed < 36; ++seed)
    trees.push_back(random_tree(seed, 8));
  for (const auto& a : trees) {
    for (const auto& b : trees) {
      const auto [dab, sab] = strat::robinson_foulds(a, b);
      const auto [dba, sba] = strat::robinson_foulds(b, a);
      CHECK(dab == dba);  // symmetry
      CHECK(sab == doctest::Approx(sba));
      if (strat::same_topology(a, b)) CHECK(dab == 0);
      for (const auto& c : trees) {
        const auto dac = strat::robinson_foulds(a, c).first;
        const auto dbc = strat::robinson_foulds(b, c).first;
        CHECK(dac <= dab + dbc);  // triangle inequality
      }
    }
  }
}

TEST_CASE("robinson-foulds requires matching leaf sets") {
  PhyloTree a;
  auto ra = a.add_root(0);
  a.add_child(ra, 1, "x");
  a.add_child(ra, 1, "y");
  PhyloTree b;
  auto rb = b.add_root(0);
  b.add_child(rb, 1, "x");
  b.add_child(rb, 1, "z");
  CHECK_THROWS_AS(strat::robinson_foulds(a, b), std::invalid_argument);
}
