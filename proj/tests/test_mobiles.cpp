#include <set>

#include "doctest.h"
#include "mapforge/mobiles.hpp"

using namespace mapforge;

namespace {

// The size-7 4-mobile with a marked corner and its grown form, as used by the
// growing-a-mobile walkthrough. Returns (mobile, marked corner vertex id).
std::pair<Mobile, int> walkthrough_mobile() {
  Mobile m = Mobile::degenerate(4);
  auto black = [&](int parent, int pos) {
    int b = m.t.add_child(parent, pos);
    m.black.push_back(1);
    std::vector<int> ws;
    for (int i = 0; i < 3; ++i) {
      m.t.append_child(b);
      m.black.push_back(0);
      ws.push_back(m.t.n_vertices() - 1);
    }
    return std::make_pair(b, ws);
  };
  // left branch of the origin
  auto [b0, w0s] = black(0, 0);                 // children w2 w3 w4
  auto [b13, w13s] = black(w0s[0], 0);          // under w2
  black(w13s[2], 0);                            // two black siblings under w16
  black(w13s[2], 1);
  // right branch
  auto [b5, w5s] = black(0, 1);                 // children w6 w7 w8
  auto [b9, w9s] = black(w5s[2], 0);            // under w8
  black(w9s[2], 0);                             // under w12
  (void)b0;
  (void)b13;
  (void)b5;
  (void)b9;
  return {m, w9s[2]};  // the marked corner sits at this white vertex
}

int blacks_in_subtree(const Mobile& m, int v) {
  int n = m.black[v] ? 1 : 0;
  for (int c : m.t.kids[v]) n += blacks_in_subtree(m, c);
  return n;
}

}  // namespace

TEST_CASE("label strings of S_p") {
  auto s2 = enumerate_labels(2);
  REQUIRE(s2.size() == 3);
  CHECK(s2[0] == LabelString{1, 1, -1});
  CHECK(s2[1] == LabelString{1, -1, 1});
  CHECK(s2[2] == LabelString{-1, 1, 1});
  CHECK(enumerate_labels(3).size() == 10);
  for (int p : {2, 3, 4}) {
    auto all = enumerate_labels(p);
    CHECK(BigInt(static_cast<long>(all.size())) == binomial(2 * p - 1, p));
    for (size_t i = 0; i < all.size(); ++i) {
      int sum = 0;
      for (int x : all[i]) sum += x;
      CHECK(sum == 1);
      CHECK(label_rank(all[i]) == static_cast<long>(i));
      CHECK(label_unrank(p, static_cast<long>(i)) == all[i]);
    }
  }
  CHECK_THROWS_AS(check_label(2, LabelString{1, 1, 1}), error);
  CHECK_THROWS_AS(check_label(2, LabelString{1, -1}), error);
}

TEST_CASE("mobile enumeration agrees with the tree count") {
  for (int p : {2, 3, 4}) {
    for (int n = 0; n <= 5; ++n) {
      if (count_complete_trees(p, n) > 3000) continue;
      auto codes = enumerate_mobile_codes(p, n);
      std::set<std::string> uniq(codes.begin(), codes.end());
      CHECK(uniq.size() == codes.size());
      CHECK(BigInt(static_cast<long>(codes.size())) == count_complete_trees(p, n));
    }
  }
}

TEST_CASE("phi and its inverse") {
  CHECK(phi(Mobile::degenerate(3)).size() == 0);
  // the size-1 mobile maps onto the unique size-1 tree
  Mobile star = Mobile::degenerate(2);
  auto grown1 = grow_mobile_unlabelled(star, Corner{0, 0});
  CHECK(phi(grown1.first).code() == enumerate_complete_trees(2, 1)[0].code());

  for (int p : {2, 3}) {
    for (int n = 0; n <= 4; ++n) {
      for (const auto& t : enumerate_complete_trees(p, n)) {
        Mobile m = phi_inverse(t);
        m.check_valid();
        CHECK(m.size() == t.size());
        CHECK(phi(m).code() == t.code());
        CHECK(phi_inverse(phi(m)).code() == m.code());
        // structural counts: pn edges, (p-1)n+1 white vertices, pn white corners
        int whites = 0;
        for (char bl : m.black) whites += bl ? 0 : 1;
        CHECK(whites == (p - 1) * n + 1);
        CHECK(m.t.n_vertices() - 1 == p * n);  // edges
        if (n >= 1) CHECK(static_cast<int>(white_corners(m).size()) == p * n);
      }
    }
  }
}

TEST_CASE("growing a 4-mobile at the marked corner") {
  auto [m, marked_vertex] = walkthrough_mobile();
  m.check_valid();
  REQUIRE(m.size() == 7);
  auto [g, nb] = grow_mobile_unlabelled(m, Corner{marked_vertex, 0});
  g.check_valid();
  CHECK(g.size() == 8);
  // the new star lands as first child of the marked white vertex
  CHECK(g.t.kids[marked_vertex][0] == nb);

  // decomposition of the grown mobile at the rightmost black child of the
  // origin: submobile sizes (4, 0, 0, 3)
  int v = g.t.kids[0].back();
  CHECK(blacks_in_subtree(g, 0) - blacks_in_subtree(g, v) == 4);
  std::vector<int> sizes;
  for (int c : g.t.kids[v]) sizes.push_back(blacks_in_subtree(g, c));
  CHECK(sizes == std::vector<int>{0, 0, 3});
}

TEST_CASE("labelled growth keeps old labels in place") {
  LabelledMobile lm{Mobile::degenerate(3), {{}}};
  auto labels = enumerate_labels(3);
  auto [one, b1] = grow_mobile(lm, Corner{0, 0}, labels[4]);
  one.check_valid();
  CHECK(one.label[b1] == labels[4]);
  auto [two, b2] = grow_mobile(one, Corner{0, 0}, labels[7]);
  two.check_valid();
  CHECK(two.label[b2] == labels[7]);
  CHECK(two.label[b1] == labels[4]);
  // black count +1, white count +p-1
  CHECK(two.m.size() == one.m.size() + 1);
  CHECK(two.m.t.n_vertices() == one.m.t.n_vertices() + 3);
  CHECK_THROWS_AS(grow_mobile(two, Corner{b1, 0}, labels[0]), error);  // black corner
  CHECK_THROWS_AS(grow_mobile(two, Corner{0, 9}, labels[0]), error);   // no such corner
}

TEST_CASE("every leaf growth of phi(m) comes from a corner growth") {
  for (int p : {2, 3}) {
    for (int n = 0; n <= 3; ++n) {
      for (const auto& t : enumerate_complete_trees(p, n)) {
        Mobile m = phi_inverse(t);
        std::set<std::string> images;
        for (const Corner& c : white_corners(m))
          images.insert(phi_code(grow_mobile_unlabelled(m, c).first));
        for (int leaf : t.leaves()) CHECK(images.count(grow_tree(t, leaf).code()) == 1);
      }
    }
  }
}
