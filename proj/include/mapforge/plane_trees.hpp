#ifndef MAPFORGE_PLANE_TREES_HPP
#define MAPFORGE_PLANE_TREES_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "mapforge/errors.hpp"
#include "mapforge/rational.hpp"
#include "mapforge/rng.hpp"

namespace mapforge {

// Rooted plane tree as ordered child lists. Vertex 0 is the origin. Vertex ids
// are stable under grafting (new vertices are appended); canonical comparison
// goes through the parenthesis code, never through ids.
struct PlaneTree {
  std::vector<std::vector<int>> kids;
  std::vector<int> parent;

  PlaneTree() : kids(1), parent{-1} {}

  int n_vertices() const { return static_cast<int>(kids.size()); }

  // Inserts a fresh vertex as the pos-th child of par and returns its id.
  int add_child(int par, int pos) {
    int v = n_vertices();
    kids.emplace_back();
    parent.push_back(par);
    kids[par].insert(kids[par].begin() + pos, v);
    return v;
  }

  int append_child(int par) { return add_child(par, static_cast<int>(kids[par].size())); }

  bool is_leaf(int v) const { return kids[v].empty(); }

  std::vector<int> preorder() const {
    std::vector<int> out, stack{0};
    out.reserve(kids.size());
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      out.push_back(v);
      for (auto it = kids[v].rbegin(); it != kids[v].rend(); ++it) stack.push_back(*it);
    }
    return out;
  }
};

// Balanced-parentheses preorder word: enc(v) = "(" children ")".
inline void plane_tree_code_rec(const PlaneTree& t, int v, std::string& out) {
  out.push_back('(');
  for (int c : t.kids[v]) plane_tree_code_rec(t, c, out);
  out.push_back(')');
}

inline std::string plane_tree_code(const PlaneTree& t) {
  std::string out;
  out.reserve(2 * t.kids.size());
  plane_tree_code_rec(t, 0, out);
  return out;
}

inline PlaneTree plane_tree_from_code(const std::string& code) {
  require(!code.empty() && code.front() == '(', errc::invalid_input,
          "tree code must start with '('");
  PlaneTree t;
  int cur = 0;
  size_t depth = 1;
  for (size_t i = 1; i < code.size(); ++i) {
    if (code[i] == '(') {
      cur = t.append_child(cur);
      ++depth;
    } else if (code[i] == ')') {
      require(depth > 0, errc::invalid_input, "unbalanced tree code");
      --depth;
      if (depth == 0) {
        require(i + 1 == code.size(), errc::invalid_input, "trailing characters in tree code");
        break;
      }
      cur = t.parent[cur];
    } else {
      throw error(errc::invalid_input, "tree code may contain only parentheses");
    }
  }
  require(depth == 0, errc::invalid_input, "unbalanced tree code");
  return t;
}

// Complete d-ary tree: every non-leaf vertex (the origin included) has exactly
// d children; size n counts the non-leaf vertices. The size-0 tree is the
// single-vertex degenerate tree.
struct CompleteDAryTree {
  int d = 2;
  PlaneTree t;

  static CompleteDAryTree degenerate(int d) {
    require(d >= 2, errc::invalid_arity, "arity must be at least 2");
    return CompleteDAryTree{d, PlaneTree{}};
  }

  int size() const {
    int n = 0;
    for (const auto& ks : t.kids) n += ks.empty() ? 0 : 1;
    return n;
  }

  std::string code() const { return plane_tree_code(t); }

  std::vector<int> leaves() const {
    std::vector<int> out;
    for (int v : t.preorder())
      if (t.is_leaf(v)) out.push_back(v);
    return out;
  }

  void check_valid() const {
    require(d >= 2, errc::invalid_arity, "arity must be at least 2");
    for (int v = 0; v < t.n_vertices(); ++v) {
      size_t k = t.kids[v].size();
      require(k == 0 || k == static_cast<size_t>(d), errc::invalid_input,
              "vertex of a complete d-ary tree must have 0 or d children");
    }
  }
};

inline CompleteDAryTree dary_from_code(int d, const std::string& code) {
  CompleteDAryTree r{d, plane_tree_from_code(code)};
  r.check_valid();
  return r;
}

// Fuss-Catalan count C(dn, n) / ((d-1) n + 1).
inline BigInt count_complete_trees(int d, long n) {
  require(d >= 2, errc::invalid_arity, "arity must be at least 2");
  require(n >= 0, errc::invalid_input, "size must be nonnegative");
  if (n == 0) return 1;
  BigInt c = binomial(static_cast<long>(d) * n, n);
  return c / ((d - 1) * n + 1);
}

namespace detail {

// All subtree codes of complete d-ary subtrees with n branching vertices,
// in no particular order; size-0 subtree is the bare leaf "()".
inline const std::vector<std::string>& dary_subtree_codes(int d, int n,
                                                          std::vector<std::vector<std::string>>& memo) {
  if (static_cast<size_t>(n) < memo.size() && !memo[n].empty()) return memo[n];
  if (memo.size() <= static_cast<size_t>(n)) memo.resize(n + 1);
  std::vector<std::string> out;
  if (n == 0) {
    out.push_back("()");
  } else {
    // Root uses one branching vertex; distribute n-1 over d ordered subtrees.
    std::vector<int> sizes(d, 0);
    auto rec = [&](auto&& self, int slot, int left) -> void {
      if (slot == d - 1) {
        sizes[slot] = left;
        std::vector<size_t> idx(d, 0);
        while (true) {  // cartesian product over subtree choices
          std::string w = "(";
          for (int i = 0; i < d; ++i) w += dary_subtree_codes(d, sizes[i], memo)[idx[i]];
          w += ")";
          out.push_back(std::move(w));
          int i = d - 1;
          while (i >= 0) {
            if (++idx[i] < dary_subtree_codes(d, sizes[i], memo).size()) break;
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
    rec(rec, 0, n - 1);
  }
  memo[n] = std::move(out);
  return memo[n];
}

}  // namespace detail

constexpr long kDefaultEnumerationGuard = 1000000;

// All of CT^d_n, ordered lexicographically by code.
inline std::vector<CompleteDAryTree> enumerate_complete_trees(int d, int n,
                                                              long guard = kDefaultEnumerationGuard) {
  require(d >= 2, errc::invalid_arity, "arity must be at least 2");
  require(n >= 0, errc::invalid_input, "size must be nonnegative");
  BigInt total = count_complete_trees(d, n);
  require(total <= guard, errc::resource_limit,
          "enumeration of " + total.str() + " trees exceeds guard " + std::to_string(guard));
  std::vector<std::vector<std::string>> memo;
  std::vector<std::string> codes = detail::dary_subtree_codes(d, n, memo);
  std::sort(codes.begin(), codes.end());
  std::vector<CompleteDAryTree> out;
  out.reserve(codes.size());
  for (const auto& c : codes) out.push_back(CompleteDAryTree{d, plane_tree_from_code(c)});
  return out;
}

// Turns the given leaf into a branching vertex with d fresh leaves.
inline CompleteDAryTree grow_tree(const CompleteDAryTree& t, int leaf) {
  require(leaf >= 0 && leaf < t.t.n_vertices(), errc::invalid_vertex, "no such vertex");
  require(t.t.is_leaf(leaf), errc::invalid_vertex, "grow target must be a leaf");
  CompleteDAryTree r = t;
  for (int i = 0; i < t.d; ++i) r.t.append_child(leaf);
  return r;
}

// Exact uniform sampler over CT^d_n by the cycle lemma: a uniform arrangement
// of n branch symbols among dn+1 positions has exactly one cyclic shift that
// is a valid preorder word.
inline CompleteDAryTree uniform_tree_oracle(int d, int n, Rng& rng) {
  require(d >= 2, errc::invalid_arity, "arity must be at least 2");
  require(n >= 0, errc::invalid_input, "size must be nonnegative");
  if (n == 0) return CompleteDAryTree::degenerate(d);
  const long len = static_cast<long>(d) * n + 1;
  std::vector<char> word(len, 0);  // 1 = branching vertex, 0 = leaf
  // Floyd-style sampling of an n-subset of [0, len).
  std::vector<long> chosen;
  for (long j = len - n; j < len; ++j) {
    long x = static_cast<long>(rng.below(static_cast<std::uint64_t>(j + 1)));
    if (word[x])
      word[j] = 1;
    else
      word[x] = 1;
  }
  // Valid shift starts right after the last position attaining the minimum
  // prefix sum (weights: branch d-1, leaf -1; total -1).
  long sum = 0, best = 0, best_at = -1;
  for (long i = 0; i < len; ++i) {
    sum += word[i] ? d - 1 : -1;
    if (sum < best) {
      best = sum;
      best_at = i;
    }
  }
  const long start = (best_at + 1) % len;
  // Decode the preorder word: a branch symbol opens d child slots.
  PlaneTree t;
  std::vector<std::pair<int, int>> frames;  // (vertex, child slots still open)
  for (long i = 0; i < len; ++i) {
    char sym = word[(start + i) % len];
    int v;
    if (i == 0) {
      v = 0;
    } else {
      require(!frames.empty(), errc::invalid_input, "cycle lemma produced invalid word");
      v = t.append_child(frames.back().first);
      if (--frames.back().second == 0) frames.pop_back();
    }
    if (sym) frames.emplace_back(v, d);
  }
  require(frames.empty(), errc::invalid_input, "cycle lemma produced invalid word");
  return CompleteDAryTree{d, std::move(t)};
}

}  // namespace mapforge

#endif
