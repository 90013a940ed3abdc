#include "doctest.h"
#include "mapforge/bdfg.hpp"
#include "mapforge/coupling.hpp"
#include "mapforge/json_io.hpp"

using namespace mapforge;

TEST_CASE("rational strings") {
  CHECK(rat_to_string(BigRat(17, 42)) == "17/42");
  CHECK(rat_to_string(BigRat(5)) == "5");
  CHECK(rat_from_string("17/42") == BigRat(17, 42));
  CHECK(rat_from_string("-3/6") == BigRat(-1, 2));
  CHECK(rat_from_string("7") == BigRat(7));
  CHECK_THROWS_AS(rat_from_string("1/0"), error);
  CHECK_THROWS_AS(rat_from_string("x/2"), error);
}

TEST_CASE("tree json") {
  for (const auto& t : enumerate_complete_trees(3, 3)) {
    json j = tree_to_json(t);
    CHECK(j["d"] == 3);
    CHECK(j["n"] == 3);
    CHECK(tree_from_json(j).code() == t.code());
  }
}

TEST_CASE("mobile json round-trips structure and labels") {
  LabelledMobile lm{Mobile::degenerate(3), {{}}};
  auto labels = enumerate_labels(3);
  lm = grow_mobile(lm, Corner{0, 0}, labels[2]).first;
  lm = grow_mobile(lm, Corner{0, 0}, labels[9]).first;
  lm = grow_mobile(lm, Corner{lm.m.t.kids[0][0] + 1, 0}, labels[5]).first;
  json j = mobile_to_json(lm);
  LabelledMobile back = mobile_from_json(j);
  CHECK(back.key() == lm.key());
}

TEST_CASE("map json uses 1-based darts and keeps the code") {
  CouplingContext ctx;
  RootedMap m = chain_sample_triangulation(3, 5, ctx);
  json j = map_to_json(m);
  CHECK(j["darts"] == m.n_darts());
  for (int d = 0; d < m.n_darts(); ++d) {
    CHECK(j["sigma"][d].get<int>() >= 1);
    CHECK(j["sigma"][d].get<int>() <= m.n_darts());
  }
  RootedMap back = map_from_json(j);
  CHECK(canonical_code(back) == canonical_code(m));

  // pointed maps keep their pointing through serialization
  LabelledMobile lm{Mobile::degenerate(2), {{}}};
  lm = grow_mobile(lm, Corner{0, 0}, enumerate_labels(2)[1]).first;
  RootedMap pm = psi(lm, 1).map;
  RootedMap pback = map_from_json(map_to_json(pm));
  CHECK(canonical_code(pback) == canonical_code(pm));
  CHECK(pback.pointed >= 0);
}

TEST_CASE("dot export marks the root edge") {
  CouplingContext ctx;
  RootedMap m = chain_sample_triangulation(2, 3, ctx);
  std::string dot = map_to_dot(m);
  CHECK(dot.find("graph map {") == 0);
  CHECK(dot.find("color=red") != std::string::npos);
}

TEST_CASE("pair json") {
  FourAryPair p{enumerate_complete_trees(4, 2)[1], enumerate_complete_trees(4, 1)[0]};
  FourAryPair back = pair_from_json(pair_to_json(p));
  CHECK(back.key() == p.key());
}
