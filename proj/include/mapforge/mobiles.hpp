#ifndef MAPFORGE_MOBILES_HPP
#define MAPFORGE_MOBILES_HPP

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mapforge/plane_trees.hpp"

namespace mapforge {

// Entry in S_p: a +-1 string of length 2p-1 summing to 1.
using LabelString = std::vector<int>;

inline int label_p(const LabelString& s) { return static_cast<int>(s.size() + 1) / 2; }

inline void check_label(int p, const LabelString& s) {
  require(static_cast<int>(s.size()) == 2 * p - 1, errc::invalid_input, "label length must be 2p-1");
  int sum = 0;
  for (int x : s) {
    require(x == 1 || x == -1, errc::invalid_input, "label entries must be +-1");
    sum += x;
  }
  require(sum == 1, errc::invalid_input, "label entries must sum to 1");
}

// All of S_p in lexicographic order, with +1 ordered before -1.
inline std::vector<LabelString> enumerate_labels(int p) {
  require(p >= 2, errc::invalid_arity, "p must be at least 2");
  const int len = 2 * p - 1;
  std::vector<LabelString> out;
  LabelString cur(len, 1);
  auto rec = [&](auto&& self, int pos, int minus_left) -> void {
    if (pos == len) {
      if (minus_left == 0) out.push_back(cur);
      return;
    }
    if (len - pos < minus_left) return;
    cur[pos] = 1;
    self(self, pos + 1, minus_left);
    if (minus_left > 0) {
      cur[pos] = -1;
      self(self, pos + 1, minus_left - 1);
      cur[pos] = 1;
    }
  };
  rec(rec, 0, p - 1);
  return out;
}

// Combinadic rank of a label within the lexicographic order above (0-based).
inline BigInt label_rank(const LabelString& s) {
  const int len = static_cast<int>(s.size());
  int minus_left = 0;
  for (int x : s) minus_left += x == -1 ? 1 : 0;
  BigInt r = 0;
  for (int i = 0; i < len && minus_left > 0; ++i) {
    if (s[i] == -1) {
      r += binomial(len - i - 1, minus_left);
      --minus_left;
    }
  }
  return r;
}

inline LabelString label_unrank(int p, BigInt rank) {
  const int len = 2 * p - 1;
  int minus_left = p - 1;
  LabelString s(len, 1);
  for (int i = 0; i < len && minus_left > 0; ++i) {
    BigInt with_plus = binomial(len - i - 1, minus_left);
    if (rank < with_plus) continue;
    rank -= with_plus;
    s[i] = -1;
    --minus_left;
  }
  require(rank == 0, errc::invalid_input, "label rank out of range");
  return s;
}

// Two-coloured mobile: white origin, black vertices of degree p, edges always
// joining a black and a white vertex. Size = number of black vertices.
struct Mobile {
  int p = 2;
  PlaneTree t;
  std::vector<char> black;  // by vertex id

  static Mobile degenerate(int p) {
    require(p >= 2, errc::invalid_arity, "p must be at least 2");
    return Mobile{p, PlaneTree{}, {0}};
  }

  int size() const {
    int n = 0;
    for (char b : black) n += b ? 1 : 0;
    return n;
  }

  void check_valid() const {
    require(p >= 2, errc::invalid_arity, "p must be at least 2");
    require(!black[0], errc::invalid_input, "origin must be white");
    for (int v = 0; v < t.n_vertices(); ++v) {
      for (int c : t.kids[v])
        require(black[v] != black[c], errc::invalid_input, "edges must join black and white");
      if (black[v]) {
        int deg = static_cast<int>(t.kids[v].size()) + 1;
        require(deg == p, errc::invalid_input, "black vertices must have degree p");
      }
    }
  }

  std::string code() const {
    std::string out;
    auto rec = [&](auto&& self, int v) -> void {
      out.push_back(black[v] ? 'b' : 'w');
      out.push_back('(');
      for (int c : t.kids[v]) self(self, c);
      out.push_back(')');
    };
    rec(rec, 0);
    return out;
  }
};

struct LabelledMobile {
  Mobile m;
  std::vector<LabelString> label;  // by vertex id; empty unless black

  void check_valid() const {
    m.check_valid();
    for (int v = 0; v < m.t.n_vertices(); ++v) {
      if (m.black[v])
        check_label(m.p, label[v]);
      else
        require(label[v].empty(), errc::invalid_input, "white vertices carry no label");
    }
  }

  // Canonical key: structure code plus labels in preorder of black vertices.
  std::string key() const {
    std::string out = m.code();
    for (int v : m.t.preorder()) {
      if (!m.black[v]) continue;
      out.push_back('|');
      for (int x : label[v]) out.push_back(x == 1 ? '+' : '-');
    }
    return out;
  }
};

// A corner of vertex v: slot i lies before the i-th child in the contour.
// For the origin, slot 0 is the root corner; for other vertices slot 0 sits
// between the parent edge and the first child, and slot deg(v)-1... slot
// kids(v) sits between the last child and the parent edge.
struct Corner {
  int v = 0;
  int slot = 0;
  bool operator==(const Corner& o) const { return v == o.v && slot == o.slot; }
};

// Corner-visit sequence of the contour that starts at the root corner and
// explores subtrees left to right. Every corner of every vertex appears
// exactly once.
inline std::vector<Corner> contour_corners(const PlaneTree& t) {
  std::vector<Corner> out;
  auto rec = [&](auto&& self, int v) -> void {
    int m = static_cast<int>(t.kids[v].size());
    for (int i = 0; i < m; ++i) {
      out.push_back({v, i});
      self(self, t.kids[v][i]);
    }
    if (v != 0)
      out.push_back({v, m});
    else if (m == 0)
      out.push_back({v, 0});  // degenerate single-vertex tree
  };
  // The origin's corner before its first child is the root corner; a non-root
  // vertex additionally has the corner after its last child.
  rec(rec, 0);
  return out;
}

inline std::vector<Corner> white_corners(const Mobile& m) {
  std::vector<Corner> out;
  for (const Corner& c : contour_corners(m.t))
    if (!m.black[c.v]) out.push_back(c);
  return out;
}

// Grafts a black star (p-1 fresh white leaves) into the given white corner.
// Returns the grown mobile and the id of the new black vertex.
inline std::pair<Mobile, int> grow_mobile_unlabelled(const Mobile& m, Corner corner) {
  require(corner.v >= 0 && corner.v < m.t.n_vertices(), errc::invalid_corner, "no such vertex");
  require(!m.black[corner.v], errc::invalid_corner, "corner must belong to a white vertex");
  int max_slot = static_cast<int>(m.t.kids[corner.v].size());
  if (corner.v == 0) max_slot = std::max(0, max_slot - 1);
  require(corner.slot >= 0 && corner.slot <= max_slot, errc::invalid_corner, "no such corner");

  Mobile r = m;
  int b = r.t.add_child(corner.v, corner.slot);
  r.black.push_back(1);
  for (int i = 0; i < m.p - 1; ++i) {
    r.t.append_child(b);
    r.black.push_back(0);
  }
  return {std::move(r), b};
}

inline std::pair<LabelledMobile, int> grow_mobile(const LabelledMobile& lm, Corner corner,
                                                  const LabelString& label) {
  check_label(lm.m.p, label);
  auto [grown, b] = grow_mobile_unlabelled(lm.m, corner);
  LabelledMobile r;
  r.m = std::move(grown);
  r.label = lm.label;
  r.label.resize(r.m.t.n_vertices());
  // the new black vertex was inserted first, then its p-1 white children
  r.label[b] = label;
  return {std::move(r), b};
}

// Phi: the recursive bijection with complete p-ary trees. The decomposition
// peels the rightmost black child of the origin.
inline std::string phi_code(const Mobile& m) {
  std::string out;
  // sub(v, from, to): code of Phi applied to the white-rooted submobile given
  // by vertex v with its children in positions [from, to).
  auto sub = [&](auto&& self, int v, int from, int to) -> std::string {
    if (from == to) return "()";
    int b = m.t.kids[v][to - 1];  // rightmost black child
    std::string w = "(";
    w += self(self, v, from, to - 1);
    for (int c : m.t.kids[b]) w += self(self, c, 0, static_cast<int>(m.t.kids[c].size()));
    w += ")";
    return w;
  };
  return sub(sub, 0, 0, static_cast<int>(m.t.kids[0].size()));
}

inline CompleteDAryTree phi(const Mobile& m) {
  return CompleteDAryTree{m.p, plane_tree_from_code(phi_code(m))};
}

inline Mobile phi_inverse(const CompleteDAryTree& t) {
  t.check_valid();
  Mobile m = Mobile::degenerate(t.d);
  // Reattach, in order: for subtrees (c_1..c_p) of v, the mobile of c_1 keeps
  // the current root, then a new black vertex carries the mobiles of c_2..c_p.
  auto rec = [&](auto&& self, int tv, int mv) -> void {
    if (t.t.is_leaf(tv)) return;
    const auto& ks = t.t.kids[tv];
    self(self, ks[0], mv);
    int b = m.t.append_child(mv);
    m.black.push_back(1);
    for (size_t i = 1; i < ks.size(); ++i) {
      int w = m.t.append_child(b);
      m.black.push_back(0);
      self(self, ks[i], w);
    }
  };
  rec(rec, 0, 0);
  return m;
}

// Direct recursive enumeration of unlabelled p-mobiles, used as an
// independent oracle for the cardinality identity with p-ary trees.
inline std::vector<std::string> enumerate_mobile_codes(int p, int n,
                                                       long guard = kDefaultEnumerationGuard) {
  require(p >= 2, errc::invalid_arity, "p must be at least 2");
  BigInt total = count_complete_trees(p, n);
  require(total <= guard, errc::resource_limit, "mobile enumeration exceeds guard");
  // white[n]: codes of white-rooted mobiles with n black vertices;
  // black[n]: codes of a black-rooted piece heading n blacks in total.
  std::vector<std::vector<std::string>> white(n + 1), blackv(n + 1);
  std::function<const std::vector<std::string>&(int)> W, B;
  W = [&](int k) -> const std::vector<std::string>& {
    if (!white[k].empty()) return white[k];
    std::vector<std::string> out;
    if (k == 0) {
      out.push_back("w()");
    } else {
      // First black child heads j >= 1 blacks; the rest stays a white list.
      for (int j = 1; j <= k; ++j) {
        const auto& heads = B(j);
        const auto& rests = W(k - j);
        for (const auto& rest : rests) {
          std::string tail = rest.substr(2);  // strip "w("
          for (const auto& h : heads) out.push_back("w(" + h + tail);
        }
      }
    }
    white[k] = std::move(out);
    return white[k];
  };
  B = [&](int k) -> const std::vector<std::string>& {
    if (!blackv[k].empty()) return blackv[k];
    // A black vertex with p-1 white subtrees holding k-1 blacks in total.
    std::vector<std::string> out;
    std::vector<int> sizes(p - 1, 0);
    auto rec = [&](auto&& self, int slot, int left) -> void {
      if (slot == p - 2) {
        sizes[slot] = left;
        std::vector<size_t> idx(p - 1, 0);
        while (true) {
          std::string w = "b(";
          for (int i = 0; i < p - 1; ++i) w += W(sizes[i])[idx[i]];
          w += ")";
          out.push_back(std::move(w));
          int i = p - 2;
          while (i >= 0) {
            if (++idx[i] < W(sizes[i]).size()) break;
            idx[i] = 0;
            --i;
          }
          if (i < 0) break;
        }
        return;
      }
      for (int s = 0; s <= left; ++s) {
        sizes[slot] = s;
        self(self, slot + 1, left - s);
      }
    };
    rec(rec, 0, k - 1);
    blackv[k] = std::move(out);
    return blackv[k];
  };
  std::vector<std::string> codes = W(n);
  std::sort(codes.begin(), codes.end());
  return codes;
}

}  // namespace mapforge

#endif
