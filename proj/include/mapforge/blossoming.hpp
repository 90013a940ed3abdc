#ifndef MAPFORGE_BLOSSOMING_HPP
#define MAPFORGE_BLOSSOMING_HPP

#include <algorithm>
#include <deque>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mapforge/plane_trees.hpp"
#include "mapforge/planar_maps.hpp"
#include "mapforge/rng.hpp"

namespace mapforge {

// Blossoming tree: the origin (vertex 0) is a blossom, every blossom is a
// leaf, and every non-blossom is adjacent to exactly two blossoms. Size n is
// the number of non-blossoms; a blossoming tree carries 2n blossoms.
struct BlossomingTree {
  PlaneTree t;
  std::vector<char> blossom;

  int size() const {
    int n = 0;
    for (char b : blossom) n += b ? 0 : 1;
    return n;
  }

  void check_valid() const {
    require(blossom[0], errc::invalid_input, "origin must be a blossom");
    int nb = 0;
    for (int v = 0; v < t.n_vertices(); ++v) {
      if (blossom[v]) {
        ++nb;
        require(t.kids[v].empty() || v == 0, errc::invalid_input, "blossoms must be leaves");
        if (v == 0)
          require(t.kids[v].size() == 1, errc::invalid_input,
                  "origin blossom must have exactly one child");
      } else {
        int cnt = blossom[t.parent[v]] ? 1 : 0;
        for (int c : t.kids[v]) cnt += blossom[c] ? 1 : 0;
        require(cnt == 2, errc::invalid_input,
                "non-blossoms must be adjacent to exactly two blossoms");
      }
    }
    require(nb == 2 * size() + 0, errc::invalid_input, "blossom count must be 2n");
  }

  std::string code() const {
    std::string out;
    auto rec = [&](auto&& self, int v) -> void {
      out.push_back(blossom[v] ? 'b' : 'v');
      out.push_back('(');
      for (int c : t.kids[v]) self(self, c);
      out.push_back(')');
    };
    rec(rec, 0);
    return out;
  }
};

inline BlossomingTree blossoming_from_code(const std::string& code) {
  BlossomingTree bt;
  bt.t = PlaneTree{};
  bt.blossom.clear();
  int cur = -1;
  for (size_t i = 0; i < code.size(); ++i) {
    char ch = code[i];
    if (ch == 'b' || ch == 'v') {
      int v;
      if (cur < 0) {
        v = 0;
        bt.blossom.push_back(ch == 'b');
      } else {
        v = bt.t.append_child(cur);
        bt.blossom.push_back(ch == 'b');
      }
      require(i + 1 < code.size() && code[i + 1] == '(', errc::invalid_input,
              "malformed blossoming code");
      cur = v;
      ++i;
    } else if (ch == ')') {
      require(cur >= 0, errc::invalid_input, "malformed blossoming code");
      cur = bt.t.parent[cur];
    } else {
      throw error(errc::invalid_input, "malformed blossoming code");
    }
  }
  require(cur == -1, errc::invalid_input, "malformed blossoming code");
  bt.check_valid();
  return bt;
}

// Ordered pair of complete 4-ary trees; |l| + |r| = n - 1 for the matching
// blossoming tree of size n.
struct FourAryPair {
  CompleteDAryTree l, r;
  int total_size() const { return l.size() + r.size(); }
  std::string key() const { return l.code() + "|" + r.code(); }
};

// ---- Construction of the pair from a blossoming tree and back -------------

namespace detail {

// Multi-type piece -> complete 4-ary tree. The piece is handed over as the
// list of children (with their subtrees) of its origin inside the host tree.
inline std::string piece_to_dary_code(const BlossomingTree& bt, const std::vector<int>& kids) {
  if (kids.empty()) return "()";
  int z = kids.back();  // rightmost non-blossom child
  require(!bt.blossom[z], errc::invalid_input, "piece child must be a non-blossom");
  std::vector<int> rest(kids.begin(), kids.end() - 1);
  // split z's children at its two blossom kids
  std::vector<int> pre, mid, post;
  int seen = 0;
  for (int c : bt.t.kids[z]) {
    if (bt.blossom[c]) {
      ++seen;
      continue;
    }
    (seen == 0 ? pre : seen == 1 ? mid : post).push_back(c);
  }
  require(seen == 2, errc::invalid_input, "non-blossom must carry two blossoms");
  std::string w = "(";
  w += piece_to_dary_code(bt, rest);
  w += piece_to_dary_code(bt, pre);
  w += piece_to_dary_code(bt, mid);
  w += piece_to_dary_code(bt, post);
  w += ")";
  return w;
}

// Inverse: rebuilds the child list of a piece's origin inside an output tree.
inline void dary_to_piece(const CompleteDAryTree& c, int cv, BlossomingTree& bt, int origin) {
  if (c.t.is_leaf(cv)) return;
  const auto& ks = c.t.kids[cv];
  dary_to_piece(c, ks[0], bt, origin);  // everything left of the new branch
  int z = bt.t.append_child(origin);
  bt.blossom.push_back(0);
  dary_to_piece(c, ks[1], bt, z);
  int b1 = bt.t.append_child(z);
  bt.blossom.push_back(1);
  dary_to_piece(c, ks[2], bt, z);
  int b2 = bt.t.append_child(z);
  bt.blossom.push_back(1);
  dary_to_piece(c, ks[3], bt, z);
  (void)b1;
  (void)b2;
}

}  // namespace detail

// Splits a blossoming tree at its origin: with rho' the blossom child of the
// origin's unique neighbour v, the children of v before rho' form the right
// piece and those after it the left piece, each read as a 4-ary tree.
inline FourAryPair split_blossoming(const BlossomingTree& bt) {
  bt.check_valid();
  require(bt.size() >= 1, errc::invalid_input, "blossoming tree must have size >= 1");
  int v = bt.t.kids[0][0];
  int split = -1;
  const auto& ks = bt.t.kids[v];
  for (size_t i = 0; i < ks.size(); ++i)
    if (bt.blossom[ks[i]]) {
      require(split < 0, errc::invalid_input, "origin neighbour carries too many blossoms");
      split = static_cast<int>(i);
    }
  require(split >= 0, errc::invalid_input, "origin neighbour carries no second blossom");
  std::vector<int> before(ks.begin(), ks.begin() + split);
  std::vector<int> after(ks.begin() + split + 1, ks.end());
  FourAryPair p;
  p.l = CompleteDAryTree{4, plane_tree_from_code(detail::piece_to_dary_code(bt, after))};
  p.r = CompleteDAryTree{4, plane_tree_from_code(detail::piece_to_dary_code(bt, before))};
  return p;
}

inline BlossomingTree join_pair(const FourAryPair& p) {
  require(p.l.d == 4 && p.r.d == 4, errc::invalid_arity, "pair must hold 4-ary trees");
  BlossomingTree bt;
  bt.t = PlaneTree{};
  bt.blossom = {1};  // origin blossom
  int v = bt.t.append_child(0);
  bt.blossom.push_back(0);
  detail::dary_to_piece(p.r, 0, bt, v);
  bt.t.append_child(v);
  bt.blossom.push_back(1);  // rho'
  detail::dary_to_piece(p.l, 0, bt, v);
  bt.check_valid();
  return bt;
}

enum class PairSide { left, right };

inline FourAryPair grow_pair(const FourAryPair& p, PairSide side, int leaf) {
  FourAryPair out = p;
  if (side == PairSide::left)
    out.l = grow_tree(p.l, leaf);
  else
    out.r = grow_tree(p.r, leaf);
  return out;
}

// All blossoming trees of size n, via the pair bijection.
inline std::vector<BlossomingTree> enumerate_blossoming(int n,
                                                        long guard = kDefaultEnumerationGuard) {
  require(n >= 1, errc::invalid_input, "size must be at least 1");
  std::vector<BlossomingTree> out;
  for (int a = 0; a <= n - 1; ++a) {
    auto ls = enumerate_complete_trees(4, a, guard);
    auto rs = enumerate_complete_trees(4, n - 1 - a, guard);
    require(static_cast<long>(out.size()) + static_cast<long>(ls.size()) * rs.size() <= guard,
            errc::resource_limit, "blossoming enumeration exceeds guard");
    for (const auto& l : ls)
      for (const auto& r : rs) out.push_back(join_pair(FourAryPair{l, r}));
  }
  return out;
}

// ---- Partial closure and the closing construction -------------------------

// State of a blossoming tree after all possible closures were performed on
// the contour of the infinite face, with the surviving blossoms named.
struct PartialClosure {
  MapBuilder b;
  std::vector<int> blossom_dart;   // by vertex id: the blossom's dart, or -1
  std::vector<char> closed;        // by vertex id: blossom already closed
  int n_closures = 0;
  std::vector<int> unclosed;       // blossom vertex ids, contour order
  std::vector<int> attach;         // by vertex id: neighbour of the blossom
  std::vector<int> left_group, right_group;  // L_1..L_k and R_1..R_h

  // Comparable snapshot: dart ids are stable, so equal partial closures give
  // equal signatures regardless of the closure order taken.
  std::string signature() const {
    std::string s;
    for (size_t x = 0; x < b.d.size(); ++x) {
      if (!b.d[x].alive) continue;
      s += std::to_string(x) + ":" + std::to_string(b.d[x].tail) + "," +
           std::to_string(b.d[x].nxt) + "," + std::to_string(b.d[x].alpha) + ";";
    }
    return s;
  }
};

// Performs closures until none are possible. A blossom corner is closable
// when the next three corners of the infinite-face contour sit at
// non-blossoms; closing it turns the blossom edge into an edge to the third
// corner's vertex, creating one triangular face. The result is independent of
// the order in which closures are performed; pass an Rng to randomize the
// order (used by the order-invariance tests).
inline PartialClosure close_all(const BlossomingTree& bt, Rng* shuffle = nullptr) {
  bt.check_valid();
  const int nv = bt.t.n_vertices();
  PartialClosure pc;
  MapBuilder& b = pc.b;
  b.n_vertex_ids = nv;
  // darts: for each non-origin vertex v, down(v) = parent->v, up(v) = v->parent
  std::vector<int> down(nv, -1), up(nv, -1);
  for (int v = 1; v < nv; ++v) {
    down[v] = b.new_dart(bt.t.parent[v]);
    up[v] = b.new_dart(v);
    b.pair_darts(down[v], up[v]);
  }
  for (int v = 0; v < nv; ++v) {
    std::vector<int> order;  // contour (sigma^{-1}) order: parent, children l-to-r
    if (v != 0) order.push_back(up[v]);
    for (int c : bt.t.kids[v]) order.push_back(down[c]);
    if (!order.empty()) b.set_rotation_contour_order(order);
  }

  // Doubly linked cyclic contour; entry keyed by the dart about to be
  // traversed, the corner being corner(d) = sector between d and sigma(d).
  // The walk starts at the root corner (the corner of the origin blossom).
  const int nd = 2 * (nv - 1);
  std::vector<int> cnext(nd, -1), cprev(nd, -1);
  std::vector<char> in_contour(nd, 1);
  {
    int start = down[bt.t.kids[0][0]];
    int d = start;
    std::vector<int> seq;
    do {
      seq.push_back(d);
      d = b.sigma_inv(b.d[d].alpha);
    } while (d != start);
    require(static_cast<int>(seq.size()) == nd, errc::invalid_input,
            "contour does not cover the tree");
    for (size_t i = 0; i < seq.size(); ++i) {
      cnext[seq[i]] = seq[(i + 1) % seq.size()];
      cprev[seq[(i + 1) % seq.size()]] = seq[i];
    }
  }

  pc.blossom_dart.assign(nv, -1);
  pc.closed.assign(nv, 0);
  pc.attach.assign(nv, -1);
  for (int v = 1; v < nv; ++v)
    if (bt.blossom[v]) pc.blossom_dart[v] = up[v];
  pc.blossom_dart[0] = down[bt.t.kids[0][0]];  // the origin's corner entry
  for (int v = 0; v < nv; ++v)
    if (bt.blossom[v]) pc.attach[v] = v == 0 ? bt.t.kids[0][0] : bt.t.parent[v];

  int contour_len = nd;
  auto tail_of_entry = [&](int d) { return b.d[d].tail; };
  auto closable = [&](int d_b) -> bool {
    if (contour_len < 4) return false;
    int d1 = cnext[d_b], d2 = cnext[d1], d3 = cnext[d2];
    return !bt.blossom[tail_of_entry(d1)] && !bt.blossom[tail_of_entry(d2)] &&
           !bt.blossom[tail_of_entry(d3)] && pc.blossom_dart[tail_of_entry(d_b)] == d_b;
  };

  std::deque<int> queue;  // candidate blossom entries (darts)
  for (int v = 0; v < nv; ++v)
    if (bt.blossom[v]) queue.push_back(pc.blossom_dart[v]);

  auto do_close = [&](int d_b) {
    int bv = tail_of_entry(d_b);
    int d1 = cnext[d_b], d2 = cnext[d1], d3 = cnext[d2];
    int w = tail_of_entry(d3);
    // retarget the blossom edge onto w, inside the corner of d3
    b.remove_from_rotation(d_b);
    b.d[d_b].tail = w;
    b.insert_sigma_after(d3, d_b);
    pc.closed[bv] = 1;
    ++pc.n_closures;
    // contour: drop the blossom corner and the two corners swallowed by the
    // new triangle; the corner of d3 survives (shrunk).
    int before = cprev[d_b];
    for (int gone : {d_b, d1, d2}) in_contour[gone] = 0;
    cnext[before] = d3;
    cprev[d3] = before;
    contour_len -= 3;
    // closability may newly hold for blossom corners up to 3 entries back
    int p = before;
    for (int back = 0; back < 3; ++back) {
      if (bt.blossom[tail_of_entry(p)]) queue.push_back(p);
      p = cprev[p];
    }
  };

  if (shuffle == nullptr) {
    while (!queue.empty()) {
      int d_b = queue.front();
      queue.pop_front();
      if (!in_contour[d_b] || !closable(d_b)) continue;
      do_close(d_b);
    }
  } else {
    // Randomized policy: repeatedly pick a uniformly random closable corner.
    while (true) {
      std::vector<int> cands;
      for (int d = 0; d < nd; ++d)
        if (in_contour[d] && bt.blossom[tail_of_entry(d)] && closable(d)) cands.push_back(d);
      if (cands.empty()) break;
      do_close(cands[shuffle->below(cands.size())]);
    }
  }

  // surviving blossoms in contour order, starting from the root corner's
  // position if it survived, otherwise from anywhere (the order is cyclic)
  {
    int start = -1;
    for (int d = 0; d < nd && start < 0; ++d)
      if (in_contour[d]) start = d;
    int d = start;
    do {
      int v = tail_of_entry(d);
      if (bt.blossom[v] && pc.blossom_dart[v] == d) pc.unclosed.push_back(v);
      d = cnext[d];
    } while (d != start);
  }

  // transitions: cyclically consecutive surviving blossoms on the same
  // non-blossom; a valid partial closure has exactly two
  const int nb = static_cast<int>(pc.unclosed.size());
  require(nb >= 2, errc::invalid_input, "partial closure kept fewer than two blossoms");
  std::vector<int> transitions;
  for (int i = 0; i < nb; ++i) {
    if (pc.attach[pc.unclosed[i]] == pc.attach[pc.unclosed[(i + 1) % nb]])
      transitions.push_back(i);
  }
  require(transitions.size() == 2, errc::invalid_input,
          "partial closure does not have exactly two double-blossom transitions");

  // Which block is the R group: the rooting transfers along closures.
  // Starting from the origin blossom, while the current blossom is closed,
  // pass to the right blossom of the vertex it closed onto (for the origin's
  // neighbour that is the second root-adjacent blossom). The first unclosed
  // blossom reached this way belongs to the R group.
  int carrier = 0;
  {
    std::vector<char> seen(nv, 0);
    while (pc.closed[carrier]) {
      require(!seen[carrier], errc::invalid_input, "rooting transfer cycles");
      seen[carrier] = 1;
      int w = b.d[pc.blossom_dart[carrier]].tail;
      int right = -1;
      for (int c : bt.t.kids[w])
        if (bt.blossom[c]) right = c;  // last blossom child; rho' when w = v0
      require(right >= 0, errc::invalid_input, "landing vertex carries no blossom child");
      carrier = right;
    }
  }
  bool carrier_in_first = false;
  for (int i = (transitions[0] + 1) % nb; i != (transitions[1] + 1) % nb; i = (i + 1) % nb)
    carrier_in_first = carrier_in_first || pc.unclosed[i] == carrier;
  int rstart = carrier_in_first ? transitions[0] : transitions[1];
  int lstart = carrier_in_first ? transitions[1] : transitions[0];
  for (int i = (lstart + 1) % nb; i != (rstart + 1) % nb; i = (i + 1) % nb)
    pc.left_group.push_back(pc.unclosed[i]);
  for (int i = (rstart + 1) % nb; i != (lstart + 1) % nb; i = (i + 1) % nb)
    pc.right_group.push_back(pc.unclosed[i]);
  return pc;
}

// Result of the closing construction, with bookkeeping used by the tests.
struct XiResult {
  RootedMap map;
  std::vector<int> map_vertex;        // original vertex id -> map vertex (or -1)
  int L = -1, R = -1;                 // map vertex ids of the two new vertices
  std::vector<int> blossom_map_dart;  // original blossom id -> dart of its edge
  int closures = 0;
};

// The closing construction: performs all closures, identifies the two blossom
// groups into fresh vertices L and R, and roots the map at a new edge from L
// to R (epsilon = +1) or from R to L (epsilon = -1).
inline XiResult xi_full(const BlossomingTree& bt, int epsilon) {
  require(epsilon == 1 || epsilon == -1, errc::invalid_input, "epsilon must be +-1");
  PartialClosure pc = close_all(bt);
  MapBuilder& b = pc.b;
  int Lv = b.new_vertex(), Rv = b.new_vertex();
  int root_L = b.new_dart(Lv), root_R = b.new_dart(Rv);
  b.pair_darts(root_L, root_R);
  // sigma cycle at L: (d_{L_1}, ..., d_{L_k}, root edge); contour order is
  // the reverse.
  {
    std::vector<int> cyc{root_L};
    for (auto it = pc.left_group.rbegin(); it != pc.left_group.rend(); ++it) {
      int d = pc.blossom_dart[*it];
      b.remove_from_rotation(d);
      b.d[d].tail = Lv;
      cyc.push_back(d);
    }
    b.set_rotation_contour_order(cyc);
  }
  {
    std::vector<int> cyc{root_R};
    for (auto it = pc.right_group.rbegin(); it != pc.right_group.rend(); ++it) {
      int d = pc.blossom_dart[*it];
      b.remove_from_rotation(d);
      b.d[d].tail = Rv;
      cyc.push_back(d);
    }
    b.set_rotation_contour_order(cyc);
  }
  std::vector<int> vmap, dmap;
  XiResult out;
  out.map = b.finish(epsilon == 1 ? root_L : root_R, -1, &vmap, &dmap);
  out.closures = pc.n_closures;
  out.map_vertex.assign(bt.t.n_vertices(), -1);
  for (int v = 0; v < bt.t.n_vertices(); ++v)
    if (!bt.blossom[v]) out.map_vertex[v] = vmap[v];
  out.L = vmap[Lv];
  out.R = vmap[Rv];
  out.blossom_map_dart.assign(bt.t.n_vertices(), -1);
  for (int v = 0; v < bt.t.n_vertices(); ++v)
    if (bt.blossom[v]) out.blossom_map_dart[v] = dmap[pc.blossom_dart[v]];
  return out;
}

inline RootedMap xi(const BlossomingTree& bt, int epsilon) { return xi_full(bt, epsilon).map; }

inline std::string bt_subtree_code(const BlossomingTree& bt, int v) {
  std::string out;
  auto rec = [&](auto&& self, int u) -> void {
    out.push_back(bt.blossom[u] ? 'b' : 'v');
    out.push_back('(');
    for (int c : bt.t.kids[u]) self(self, c);
    out.push_back(')');
  };
  rec(rec, v);
  return out;
}

// Locates, in the grown tree, the non-blossom (with its two blossom children)
// whose removal gives back the smaller tree. Returns its vertex id in grown.
inline int find_grafted_nonblossom(const BlossomingTree& small, const BlossomingTree& grown) {
  const std::string graft_code = "v(b()b())";
  std::function<int(int, int)> rec = [&](int v, int v2) -> int {
    const auto& ks = small.t.kids[v];
    const auto& ks2 = grown.t.kids[v2];
    if (ks2.size() == ks.size() + 1) {
      size_t i = 0;
      while (i < ks.size() && bt_subtree_code(small, ks[i]) == bt_subtree_code(grown, ks2[i]))
        ++i;
      require(bt_subtree_code(grown, ks2[i]) == graft_code, errc::invalid_input,
              "trees do not differ by a single graft");
      for (size_t j = i; j < ks.size(); ++j)
        require(bt_subtree_code(small, ks[j]) == bt_subtree_code(grown, ks2[j + 1]),
                errc::invalid_input, "trees do not differ by a single graft");
      return ks2[i];
    }
    require(ks2.size() == ks.size(), errc::invalid_input,
            "trees do not differ by a single graft");
    for (size_t i = 0; i < ks.size(); ++i) {
      if (bt_subtree_code(small, ks[i]) != bt_subtree_code(grown, ks2[i])) return rec(ks[i], ks2[i]);
    }
    throw error(errc::invalid_input, "trees do not differ at all");
  };
  return rec(0, 0);
}

// Second (right) blossom child of a non-blossom vertex.
inline int bt_right_blossom_child(const BlossomingTree& bt, int v) {
  int seen = 0;
  for (int c : bt.t.kids[v]) {
    if (bt.blossom[c] && ++seen == 2) return c;
  }
  throw error(errc::invalid_vertex, "vertex does not carry two blossom children");
}

}  // namespace mapforge

#endif
