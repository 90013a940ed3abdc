#include <map>
#include <set>

#include "doctest.h"
#include "mapforge/plane_trees.hpp"

using namespace mapforge;

TEST_CASE("tree codes round-trip and order lexicographically") {
  for (int d : {2, 3, 4}) {
    for (int n = 0; n <= 5; ++n) {
      auto all = enumerate_complete_trees(d, n);
      std::string prev;
      for (size_t i = 0; i < all.size(); ++i) {
        std::string code = all[i].code();
        CHECK(plane_tree_code(plane_tree_from_code(code)) == code);
        if (i > 0) CHECK(prev < code);
        prev = code;
        all[i].check_valid();
      }
    }
  }
  CHECK_THROWS_AS(plane_tree_from_code("(()"), error);
  CHECK_THROWS_AS(plane_tree_from_code("())"), error);
  CHECK_THROWS_AS(plane_tree_from_code("(a)"), error);
}

TEST_CASE("exhaustive enumeration matches the closed-form count") {
  // brute-force oracle first: the enumeration itself, deduplicated by code
  for (int d : {2, 3, 4}) {
    for (int n = 0; n <= 8; ++n) {
      if (count_complete_trees(d, n) > 500000) continue;
      auto all = enumerate_complete_trees(d, n);
      std::set<std::string> codes;
      for (const auto& t : all) codes.insert(t.code());
      CHECK(codes.size() == all.size());
      CHECK(BigInt(static_cast<long>(all.size())) == count_complete_trees(d, n));
    }
  }
  // frozen values, cross-checked against the enumeration above
  CHECK(count_complete_trees(4, 0) == 1);
  CHECK(count_complete_trees(4, 2) == 4);
  CHECK(count_complete_trees(4, 5) == 969);
  CHECK(count_complete_trees(3, 2) == 3);
  CHECK(count_complete_trees(4, 3) == 22);
  CHECK(enumerate_complete_trees(2, 1).size() == 1);
  CHECK_THROWS_AS(count_complete_trees(1, 3), error);
  CHECK_THROWS_AS(enumerate_complete_trees(4, 50), error);  // guard
}

TEST_CASE("growing a tree at a leaf") {
  CompleteDAryTree deg = CompleteDAryTree::degenerate(4);
  CompleteDAryTree one = grow_tree(deg, 0);
  CHECK(one.size() == 1);
  CHECK(one.code() == enumerate_complete_trees(4, 1)[0].code());

  for (int d : {2, 3, 4}) {
    for (int n = 0; n <= 4; ++n) {
      for (const auto& t : enumerate_complete_trees(d, n)) {
        for (int leaf : t.leaves()) {
          CompleteDAryTree g = grow_tree(t, leaf);
          g.check_valid();
          CHECK(g.size() == n + 1);
          CHECK(static_cast<int>(g.leaves().size()) == (d - 1) * (n + 1) + 1);
        }
      }
    }
  }
  CompleteDAryTree t = enumerate_complete_trees(2, 2)[0];
  CHECK_THROWS_AS(grow_tree(t, 0), error);  // the origin is not a leaf
}

TEST_CASE("grow covers and separates the next size class") {
  // every tree of size n+1 arises by growing some tree of size n, and
  // distinct (tree, leaf) pairs give distinct grown trees
  for (int d : {2, 3, 4}) {
    for (int n = 0; n <= (d == 2 ? 5 : 4); ++n) {
      std::set<std::string> grown;
      long pairs = 0;
      for (const auto& t : enumerate_complete_trees(d, n)) {
        std::set<std::string> from_this;
        for (int leaf : t.leaves()) {
          from_this.insert(grow_tree(t, leaf).code());
          ++pairs;
        }
        CHECK(from_this.size() == t.leaves().size());
        grown.insert(from_this.begin(), from_this.end());
      }
      auto next = enumerate_complete_trees(d, n + 1);
      std::set<std::string> expect;
      for (const auto& t : next) expect.insert(t.code());
      CHECK(grown == expect);
      (void)pairs;
    }
  }
  // the spec's pinned instance: CT^2_2 grown at every leaf covers CT^2_3
  std::set<std::string> ct23;
  for (const auto& t : enumerate_complete_trees(2, 2))
    for (int leaf : t.leaves()) ct23.insert(grow_tree(t, leaf).code());
  CHECK(ct23.size() == 5);
}

TEST_CASE("uniform sampling oracle hits every tree at the right rate") {
  Rng rng(12345);
  CHECK(uniform_tree_oracle(2, 1, rng).code() == enumerate_complete_trees(2, 1)[0].code());
  CHECK(uniform_tree_oracle(4, 0, rng).size() == 0);

  // chi-square over CT^3_2 (3 trees) with 1e5 draws
  auto support = enumerate_complete_trees(3, 2);
  std::map<std::string, long> counts;
  for (const auto& t : support) counts[t.code()] = 0;
  const long N = 100000;
  for (long i = 0; i < N; ++i) {
    std::string code = uniform_tree_oracle(3, 2, rng).code();
    auto it = counts.find(code);
    REQUIRE(it != counts.end());
    ++it->second;
  }
  double expected = static_cast<double>(N) / support.size();
  double stat = 0;
  for (const auto& [code, c] : counts) {
    double d = c - expected;
    stat += d * d / expected;
  }
  // 2 degrees of freedom; chi-square quantile at 1e-3 is 13.8
  CHECK(stat < 13.8);

  // validity and distribution support across a few sizes
  for (int i = 0; i < 200; ++i) {
    CompleteDAryTree t = uniform_tree_oracle(4, 5, rng);
    t.check_valid();
    CHECK(t.size() == 5);
  }
}

TEST_CASE("sampling is deterministic for a fixed seed") {
  Rng a(99), b(99);
  for (int i = 0; i < 10; ++i)
    CHECK(uniform_tree_oracle(3, 4, a).code() == uniform_tree_oracle(3, 4, b).code());
}
