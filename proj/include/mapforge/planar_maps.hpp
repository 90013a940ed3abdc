#ifndef MAPFORGE_PLANAR_MAPS_HPP
#define MAPFORGE_PLANAR_MAPS_HPP

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mapforge/errors.hpp"

namespace mapforge {

// Combinatorial map on the sphere. Darts are 0..2E-1; sigma is the
// counterclockwise rotation at the dart's tail vertex and alpha the edge
// pairing. The contour convention used throughout the library: iterating
// d -> sigma^{-1}(alpha(d)) walks a face so that subtrees of a plane tree are
// visited left to right from the root corner, and corner(d) (the sector
// between d and sigma(d)) is the corner visited just before traversing d.
struct RootedMap {
  std::vector<int> sigma, alpha, vert;
  int n_vertices = 0;
  int root = -1;     // root dart
  int pointed = -1;  // pointed vertex, or -1

  int n_darts() const { return static_cast<int>(sigma.size()); }
  int n_edges() const { return n_darts() / 2; }

  std::vector<int> sigma_inv() const {
    std::vector<int> inv(sigma.size());
    for (int d = 0; d < n_darts(); ++d) inv[sigma[d]] = d;
    return inv;
  }
};

inline RootedMap forget_pointing(RootedMap m) {
  m.pointed = -1;
  return m;
}

// Faces as orbits of d -> sigma^{-1}(alpha(d)); orbit size = face degree.
inline std::vector<std::vector<int>> faces(const RootedMap& m) {
  std::vector<int> inv = m.sigma_inv();
  std::vector<char> seen(m.n_darts(), 0);
  std::vector<std::vector<int>> out;
  for (int d0 = 0; d0 < m.n_darts(); ++d0) {
    if (seen[d0]) continue;
    std::vector<int> orbit;
    int d = d0;
    do {
      seen[d] = 1;
      orbit.push_back(d);
      d = inv[m.alpha[d]];
    } while (d != d0);
    out.push_back(std::move(orbit));
  }
  return out;
}

inline int face_count(const RootedMap& m) {
  if (m.n_darts() == 0) return 1;
  return static_cast<int>(faces(m).size());
}

// Structural sanity of the (sigma, alpha, vert) triple itself.
inline void check_map(const RootedMap& m) {
  const int n = m.n_darts();
  require(n % 2 == 0, errc::invalid_input, "odd number of darts");
  require(static_cast<int>(m.alpha.size()) == n && static_cast<int>(m.vert.size()) == n,
          errc::invalid_input, "inconsistent dart arrays");
  std::vector<char> hit(n, 0);
  for (int d = 0; d < n; ++d) {
    require(m.sigma[d] >= 0 && m.sigma[d] < n, errc::invalid_input, "sigma out of range");
    require(m.alpha[d] >= 0 && m.alpha[d] < n, errc::invalid_input, "alpha out of range");
    require(m.alpha[d] != d && m.alpha[m.alpha[d]] == d, errc::invalid_input,
            "alpha must be a fixed-point-free involution");
    require(m.vert[m.sigma[d]] == m.vert[d], errc::invalid_input,
            "sigma must preserve the tail vertex");
    hit[m.sigma[d]] = 1;
  }
  for (int d = 0; d < n; ++d)
    require(hit[d], errc::invalid_input, "sigma must be a permutation");
  if (n > 0)
    require(m.root >= 0 && m.root < n, errc::invalid_input, "missing root dart");
  // vertex ids contiguous and matching sigma orbits
  std::vector<int> rep(m.n_vertices, -1);
  for (int d = 0; d < n; ++d) {
    require(m.vert[d] >= 0 && m.vert[d] < m.n_vertices, errc::invalid_input, "vert out of range");
    rep[m.vert[d]] = d;
  }
  for (int v = 0; v < m.n_vertices; ++v)
    require(rep[v] >= 0 || n == 0, errc::invalid_input, "isolated vertex id");
}

enum class MapClass { any, angulation, simple_triangulation };

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
  void fail(const std::string& s) {
    ok = false;
    violations.push_back(s);
  }
};

// Validates connectivity, genus 0, and the face/simplicity constraints of the
// requested class (angulation: every face degree = face_degree). Reports
// violations instead of throwing.
inline ValidationReport validate(const RootedMap& m, MapClass cls = MapClass::any,
                                 int face_degree = 0) {
  ValidationReport rep;
  try {
    check_map(m);
  } catch (const error& e) {
    rep.fail(e.what());
    return rep;
  }
  const int n = m.n_darts();
  if (n == 0) {
    if (m.n_vertices != 1) rep.fail("edgeless map must have a single vertex");
    return rep;
  }
  // connectivity of the group generated by sigma and alpha
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int d = stack.back();
    stack.pop_back();
    for (int e : {m.sigma[d], m.alpha[d]}) {
      if (!seen[e]) {
        seen[e] = 1;
        ++reached;
        stack.push_back(e);
      }
    }
  }
  if (reached != n) rep.fail("map is not connected");
  const int V = m.n_vertices, E = m.n_edges(), F = face_count(m);
  if (V - E + F != 2) rep.fail("Euler characteristic is not 2 (genus > 0)");
  if (cls == MapClass::any) return rep;
  auto fs = faces(m);
  for (size_t i = 0; i < fs.size(); ++i) {
    int want = cls == MapClass::simple_triangulation ? 3 : face_degree;
    if (static_cast<int>(fs[i].size()) != want)
      rep.fail("face " + std::to_string(i) + " has degree " + std::to_string(fs[i].size()) +
               ", expected " + std::to_string(want));
  }
  if (cls == MapClass::simple_triangulation) {
    std::set<std::pair<int, int>> edges;
    for (int d = 0; d < n; ++d) {
      int u = m.vert[d], v = m.vert[m.alpha[d]];
      if (u == v) {
        rep.fail("loop at vertex " + std::to_string(u));
        continue;
      }
      if (d < m.alpha[d] && !edges.insert({std::min(u, v), std::max(u, v)}).second)
        rep.fail("parallel edge between " + std::to_string(u) + " and " + std::to_string(v));
    }
  }
  return rep;
}

// Canonical form of a rooted (optionally pointed) map: darts are relabelled
// by breadth-first search from the root along sigma and alpha. Rooted maps
// are rigid, so equal codes mean isomorphic maps.
struct MapCode {
  std::vector<int> seq;
  bool operator==(const MapCode& o) const { return seq == o.seq; }
  bool operator<(const MapCode& o) const { return seq < o.seq; }
  std::string to_string() const {
    std::string s;
    for (size_t i = 0; i < seq.size(); ++i) {
      if (i) s.push_back(i == 1 ? ':' : ',');
      s += std::to_string(seq[i]);
    }
    return s;
  }
};

inline MapCode canonical_code(const RootedMap& m) {
  MapCode code;
  const int n = m.n_darts();
  code.seq.push_back(n);
  if (n == 0) {
    code.seq.push_back(m.pointed >= 0 ? 0 : -1);
    return code;
  }
  std::vector<int> relab(n, -1);
  std::vector<int> order;
  order.reserve(n);
  relab[m.root] = 0;
  order.push_back(m.root);
  std::queue<int> q;
  q.push(m.root);
  while (!q.empty()) {
    int d = q.front();
    q.pop();
    for (int e : {m.alpha[d], m.sigma[d]}) {
      if (relab[e] < 0) {
        relab[e] = static_cast<int>(order.size());
        order.push_back(e);
        q.push(e);
      }
    }
  }
  for (int d : order) code.seq.push_back(relab[m.sigma[d]]);
  for (int d : order) code.seq.push_back(relab[m.alpha[d]]);
  int pointed_mark = -1;
  if (m.pointed >= 0) {
    for (int i = 0; i < n; ++i) {
      if (m.vert[order[i]] == m.pointed) {
        pointed_mark = i;
        break;
      }
    }
  }
  code.seq.push_back(pointed_mark);
  return code;
}

// Applies a dart relabelling (perm[d] = new name of dart d). Property tests
// use this to confirm canonical codes ignore labels.
inline RootedMap relabel_darts(const RootedMap& m, const std::vector<int>& perm) {
  RootedMap r = m;
  for (int d = 0; d < m.n_darts(); ++d) {
    r.sigma[perm[d]] = perm[m.sigma[d]];
    r.alpha[perm[d]] = perm[m.alpha[d]];
    r.vert[perm[d]] = m.vert[d];
  }
  r.root = m.root >= 0 ? perm[m.root] : -1;
  return r;
}

// Mutable map with linked-list rotations, used by the surgery operations.
struct MapBuilder {
  struct Dart {
    int alpha = -1;
    int nxt = -1, prv = -1;  // sigma and its inverse
    int tail = -1;
    bool alive = false;
  };
  std::vector<Dart> d;
  int n_vertex_ids = 0;

  int new_vertex() { return n_vertex_ids++; }

  int new_dart(int tail) {
    d.push_back(Dart{-1, -1, -1, tail, true});
    return static_cast<int>(d.size()) - 1;
  }

  void pair_darts(int a, int b) {
    d[a].alpha = b;
    d[b].alpha = a;
  }

  // Makes the rotation at a vertex from darts listed in contour order, i.e.
  // the list is a sigma^{-1} cycle.
  void set_rotation_contour_order(const std::vector<int>& list) {
    for (size_t i = 0; i < list.size(); ++i) {
      int a = list[i], b = list[(i + 1) % list.size()];
      d[b].nxt = a;  // sigma^{-1}(a) = b
      d[a].prv = b;
    }
  }

  int sigma(int x) const { return d[x].nxt; }
  int sigma_inv(int x) const { return d[x].prv; }

  // Inserts y into the rotation right after x (sigma(x) = y).
  void insert_sigma_after(int x, int y) {
    int z = d[x].nxt;
    d[x].nxt = y;
    d[y].prv = x;
    d[y].nxt = z;
    d[z].prv = y;
    d[y].tail = d[x].tail;
  }

  // Unlinks x from its rotation (x keeps alpha and tail until reused/killed).
  void remove_from_rotation(int x) {
    int p = d[x].prv, n = d[x].nxt;
    if (p == x) return;  // single dart at its vertex
    d[p].nxt = n;
    d[n].prv = p;
    d[x].nxt = d[x].prv = x;
  }

  void kill(int x) { d[x].alive = false; }

  // Compacts into a RootedMap; vertex ids are renumbered by first appearance.
  // Optionally reports the builder-to-map vertex and dart renamings.
  RootedMap finish(int root_dart, int pointed_vertex_id = -1,
                   std::vector<int>* vertex_map_out = nullptr,
                   std::vector<int>* dart_map_out = nullptr) const {
    RootedMap m;
    std::vector<int> dart_new(d.size(), -1), vert_new(n_vertex_ids, -1);
    for (size_t x = 0; x < d.size(); ++x) {
      if (!d[x].alive) continue;
      dart_new[x] = m.n_darts();
      m.sigma.push_back(-1);
      m.alpha.push_back(-1);
      m.vert.push_back(-1);
    }
    int nv = 0;
    for (size_t x = 0; x < d.size(); ++x) {
      if (!d[x].alive) continue;
      if (vert_new[d[x].tail] < 0) vert_new[d[x].tail] = nv++;
      int nx = dart_new[x];
      m.sigma[nx] = dart_new[d[x].nxt];
      m.alpha[nx] = dart_new[d[x].alpha];
      m.vert[nx] = vert_new[d[x].tail];
      require(m.sigma[nx] >= 0 && m.alpha[nx] >= 0, errc::invalid_input,
              "dangling dart in map builder");
    }
    m.n_vertices = nv;
    m.root = root_dart >= 0 ? dart_new[root_dart] : -1;
    m.pointed = pointed_vertex_id >= 0 ? vert_new[pointed_vertex_id] : -1;
    if (vertex_map_out) *vertex_map_out = vert_new;
    if (dart_map_out) *dart_map_out = dart_new;
    return m;
  }
};

namespace detail {

inline MapBuilder builder_from_map(const RootedMap& m) {
  MapBuilder b;
  b.n_vertex_ids = m.n_vertices;
  b.d.resize(m.n_darts());
  std::vector<int> inv = m.sigma_inv();
  for (int x = 0; x < m.n_darts(); ++x) {
    b.d[x] = MapBuilder::Dart{m.alpha[x], m.sigma[x], inv[x], m.vert[x], true};
  }
  return b;
}

}  // namespace detail

// Collapses the single face enclosed by the given simple cycle, then zips the
// cycle into a path of half its length starting at base_vertex. The cycle is
// a dart sequence c_1..c_2k with head(c_i) = tail(c_{i+1}) and base_vertex at
// both ends. Interior vertices and edges (pendant trees inside the face) are
// erased; if the pointed vertex is among them, the result comes back
// unpointed. If both sides of the cycle enclose exactly one face, pass a
// vertex known to be strictly inside via interior_vertex_hint.
inline RootedMap collapse_face(const RootedMap& m, std::vector<int> cycle, int base_vertex,
                               int interior_vertex_hint = -1) {
  bool pointed_erased = false;
  check_map(m);
  const int len = static_cast<int>(cycle.size());
  require(len >= 2 && len % 2 == 0, errc::invalid_cycle, "cycle length must be even and >= 2");
  require(m.vert[cycle[0]] == base_vertex, errc::invalid_cycle, "cycle must start at base vertex");
  for (int i = 0; i < len; ++i) {
    int head = m.vert[m.alpha[cycle[i]]];
    int next_tail = m.vert[cycle[(i + 1) % len]];
    require(head == next_tail, errc::invalid_cycle, "cycle darts do not chain");
  }
  {
    std::set<int> vs;
    for (int c : cycle) {
      require(vs.insert(m.vert[c]).second, errc::invalid_cycle, "cycle is not simple");
    }
  }

  std::vector<int> inv = m.sigma_inv();
  // face on the left of dart d is the orbit of d; face ids per dart:
  std::vector<int> face_id(m.n_darts(), -1);
  {
    auto fs = faces(m);
    for (size_t i = 0; i < fs.size(); ++i)
      for (int d : fs[i]) face_id[d] = static_cast<int>(i);
  }

  auto side_arcs = [&](bool left) {
    // Darts strictly inside the rotational arc at each cycle vertex.
    // With the interior on the left of the traversal, the interior arc at the
    // head of c_i runs sigma-from c_{i+1} to alpha(c_i).
    std::vector<int> arcs;
    for (int i = 0; i < len; ++i) {
      int from = left ? cycle[(i + 1) % len] : m.alpha[cycle[i]];
      int to = left ? m.alpha[cycle[i]] : cycle[(i + 1) % len];
      for (int x = m.sigma[from]; x != to; x = m.sigma[x]) arcs.push_back(x);
    }
    return arcs;
  };
  auto side_single_face = [&](bool left, int& face_out) {
    int f = face_id[left ? cycle[0] : m.alpha[cycle[0]]];
    for (int i = 0; i < len; ++i)
      if (face_id[left ? cycle[i] : m.alpha[cycle[i]]] != f) return false;
    for (int x : side_arcs(left))
      if (face_id[x] != f) return false;
    face_out = f;
    return true;
  };

  int fl = -1, fr = -1;
  bool left_ok = side_single_face(true, fl);
  bool right_ok = side_single_face(false, fr);
  require(left_ok || right_ok, errc::invalid_cycle, "cycle does not enclose exactly one face");
  bool use_left;
  if (left_ok && right_ok) {
    if (interior_vertex_hint >= 0) {
      // Flood the left side and see whether the hint lives there.
      std::set<int> inside;
      std::vector<int> stk;
      for (int x : side_arcs(true)) stk.push_back(m.alpha[x]);
      std::set<int> cyc_vs;
      for (int c : cycle) cyc_vs.insert(m.vert[c]);
      while (!stk.empty()) {
        int d0 = stk.back();
        stk.pop_back();
        int v = m.vert[d0];
        if (cyc_vs.count(v) || inside.count(v)) continue;
        inside.insert(v);
        int x = d0;
        do {
          stk.push_back(m.alpha[x]);
          x = m.sigma[x];
        } while (x != d0);
      }
      use_left = inside.count(interior_vertex_hint) > 0;
    } else {
      // No erasure on either side (pendant-free): the zip is side-independent
      // when both sides are bare; otherwise the call is ambiguous.
      require(side_arcs(true).empty() && side_arcs(false).empty(), errc::invalid_cycle,
              "ambiguous interior; pass an interior vertex hint");
      use_left = true;
    }
  } else {
    use_left = left_ok;
  }
  if (!use_left) {
    // Reverse the traversal so the interior is on the left.
    std::vector<int> rev;
    for (int i = len - 1; i >= 0; --i) rev.push_back(m.alpha[cycle[i]]);
    cycle = std::move(rev);
  }

  MapBuilder b = detail::builder_from_map(m);
  // Erase pendant trees hanging into the face.
  {
    std::vector<int> stk = side_arcs(true);
    if (!use_left) {
      // recompute arcs for the reversed cycle orientation
      stk.clear();
      for (int i = 0; i < len; ++i) {
        int from = cycle[(i + 1) % len];
        int to = m.alpha[cycle[i]];
        for (int x = m.sigma[from]; x != to; x = m.sigma[x]) stk.push_back(x);
      }
    }
    std::set<int> cyc_vs;
    for (int c : cycle) cyc_vs.insert(m.vert[c]);
    std::set<int> dead_darts;
    std::vector<int> frontier;
    for (int x : stk) {
      dead_darts.insert(x);
      frontier.push_back(m.alpha[x]);
    }
    std::set<int> dead_vs;
    while (!frontier.empty()) {
      int d0 = frontier.back();
      frontier.pop_back();
      int v = m.vert[d0];
      require(!cyc_vs.count(v) || dead_darts.count(d0), errc::invalid_cycle,
              "interior edge reattaches to the cycle");
      if (cyc_vs.count(v) || dead_vs.count(v)) continue;
      dead_vs.insert(v);
      int x = d0;
      do {
        dead_darts.insert(x);
        frontier.push_back(m.alpha[x]);
        x = m.sigma[x];
      } while (x != d0);
    }
    if (m.pointed >= 0 && dead_vs.count(m.pointed)) pointed_erased = true;
    for (int x : dead_darts) {
      require(x != m.root && m.alpha[x] != m.root, errc::invalid_cycle,
              "root edge lies inside the collapsed face");
      b.remove_from_rotation(x);
      b.kill(x);
    }
  }

  const int k = len / 2;
  std::vector<int> cyc_v(len);
  for (int i = 0; i < len; ++i) cyc_v[i] = m.vert[cycle[i]];
  // After erasure, sigma(c_{i+1}) == alpha(c_i) at every cycle vertex.
  for (int i = 0; i < len; ++i) {
    require(b.sigma(cycle[(i + 1) % len]) == b.d[cycle[i]].alpha, errc::invalid_cycle,
            "interior not fully cleared");
  }

  // Zip: edge E_i (darts c_i / alpha(c_i)) survives for i in 1..k and absorbs
  // its mirror E_{2k+1-i}; vertices v_i and v_{2k-i} merge.
  std::vector<int> dart_subst(m.n_darts());
  for (int x = 0; x < m.n_darts(); ++x) dart_subst[x] = x;
  auto subst = [&](int x) { return dart_subst[x]; };
  for (int i = 1; i <= k; ++i) {
    int keep_f = cycle[i - 1], keep_b = m.alpha[cycle[i - 1]];
    int dead_f = cycle[len - i], dead_b = m.alpha[cycle[len - i]];
    dart_subst[dead_f] = keep_b;  // both point toward path position i-1
    dart_subst[dead_b] = keep_f;
  }

  // Merged rotations. Path vertex p_i for i in 1..k-1 merges v_i and v_{2k-i}:
  //   sigma cycle: alpha(c_i), EXT(v_i), c_{i+1}, EXT(v_{2k-i})
  // where EXT(v) is the exterior arc of v in sigma order. p_0 keeps v_0 minus
  // the dead mirror dart; p_k keeps v_k likewise.
  // Work on explicit rotation lists to avoid in-place aliasing headaches.
  auto rotation_list = [&](int dart) {
    std::vector<int> out;
    int x = dart;
    do {
      out.push_back(x);
      x = b.sigma(x);
    } while (x != dart);
    return out;
  };

  std::vector<std::vector<int>> merged;  // sigma cycles of the path vertices
  std::vector<int> merged_vertex;        // which original vertex id represents it
  {
    // p_0: rotation of v_0 with alpha(c_2k) removed (absorbed into c_1).
    std::vector<int> rot = rotation_list(cycle[0]);
    std::vector<int> out;
    for (int x : rot)
      if (x != m.alpha[cycle[len - 1]]) out.push_back(x);
    merged.push_back(out);
    merged_vertex.push_back(cyc_v[0]);
  }
  for (int i = 1; i <= k - 1; ++i) {
    std::vector<int> rot_a = rotation_list(m.alpha[cycle[i - 1]]);  // at v_i
    std::vector<int> rot_b = rotation_list(cycle[len - i]);         // at v_{2k-i}
    std::vector<int> out;
    // from alpha(c_i) around v_i, stopping before nothing (full list), but
    // dropping no darts; then v_{2k-i}'s list minus its two dead cycle darts,
    // rotated to start after alpha(c_{2k-i}).
    for (int x : rot_a) out.push_back(x);
    // rot_b starts at c_{2k-i} = cycle[len-i]; its dead darts are
    // cycle[len-i] itself (edge E_{2k-i+1... }) and alpha(cycle[len-i-1]).
    int dead1 = cycle[len - i], dead2 = m.alpha[cycle[len - i - 1]];
    // rotate rot_b to start at dead1, then append the survivors in order,
    // inserted right after c_{i+1}'s position in out.
    std::vector<int> survivors;
    for (int x : rot_b)
      if (x != dead1 && x != dead2) survivors.push_back(x);
    // survivors are in sigma order from sigma(dead1); they must be spliced
    // right after c_{i+1} within out. Position of c_{i+1} in rot_a:
    std::vector<int> spliced;
    for (int x : out) {
      spliced.push_back(x);
      if (x == cycle[i]) {
        // sigma order after c_{i+1}: survivors beginning at sigma(dead1)
        int start = b.sigma(dead1);
        std::vector<int> ordered;
        for (int y = start; ordered.size() < survivors.size(); y = b.sigma(y)) {
          if (y == dead1 || y == dead2) continue;
          ordered.push_back(y);
        }
        for (int y : ordered) spliced.push_back(y);
      }
    }
    merged.push_back(spliced);
    merged_vertex.push_back(cyc_v[i]);
  }
  if (k >= 1) {
    // p_k: rotation of v_k with dead dart c_{k+1} removed.
    std::vector<int> rot = rotation_list(m.alpha[cycle[k - 1]]);
    std::vector<int> out;
    for (int x : rot)
      if (x != cycle[k % len]) out.push_back(x);
    merged.push_back(out);
    merged_vertex.push_back(cyc_v[k]);
  }

  // Kill the dead mirror darts, then rebuild the path-vertex rotations.
  for (int i = 1; i <= k; ++i) {
    b.kill(cycle[len - i]);
    b.kill(m.alpha[cycle[len - i]]);
  }
  for (size_t pi = 0; pi < merged.size(); ++pi) {
    std::vector<int>& rot = merged[pi];
    // rot is in sigma order; set_rotation_contour_order expects sigma^{-1}.
    std::vector<int> contour(rot.rbegin(), rot.rend());
    b.set_rotation_contour_order(contour);
    for (int x : rot) b.d[x].tail = merged_vertex[pi];
  }

  int new_root = subst(m.root);
  require(b.d[new_root].alive, errc::invalid_cycle, "root was erased by the collapse");
  int new_pointed = pointed_erased ? -1 : m.pointed;
  if (new_pointed >= 0) {
    // merged vertices keep the id of the smaller path position
    for (int i = 1; i <= k - 1; ++i)
      if (new_pointed == cyc_v[len - i]) new_pointed = cyc_v[i];
  }
  RootedMap out = b.finish(new_root, new_pointed);
  check_map(out);
  require(face_count(out) == face_count(m) - 1, errc::invalid_cycle,
          "collapse did not remove exactly one face");
  return out;
}

// Collapses the two faces adjacent to edge e (given by one of its darts) of a
// triangulation: deletes e, merges its endpoints, and glues the two resulting
// 2-cycles. The root edge must not be collapsed; root status and orientation
// are maintained. Returns the map and whether it is still simple.
struct EdgePairCollapse {
  RootedMap map;
  bool simple = true;
};

inline EdgePairCollapse collapse_edge_pair(const RootedMap& m, int e_dart) {
  check_map(m);
  require(e_dart >= 0 && e_dart < m.n_darts(), errc::invalid_edge, "no such dart");
  int d = e_dart, ad = m.alpha[e_dart];
  require(m.root != d && m.root != ad, errc::invalid_edge, "cannot collapse the root edge");
  std::vector<int> inv = m.sigma_inv();
  auto face_of = [&](int x0) {
    std::vector<int> orbit;
    int y = x0;
    do {
      orbit.push_back(y);
      y = inv[m.alpha[y]];
    } while (y != x0);
    return orbit;
  };
  std::vector<int> f1 = face_of(d), f2 = face_of(ad);
  require(f1.size() == 3 && f2.size() == 3, errc::invalid_edge,
          "both faces at the edge must be triangles");
  require(std::find(f1.begin(), f1.end(), ad) == f1.end(), errc::invalid_edge,
          "edge bounds the same face on both sides");
  const int v = m.vert[d], w = m.vert[ad];
  require(v != w, errc::invalid_edge, "cannot collapse a loop");
  // f1 = (v->w, w->x, x->v); f2 = (w->v, v->y, y->w)
  int wx = f1[1], xv = f1[2];
  int vy = f2[1], yw = f2[2];
  int x = m.vert[m.alpha[wx]], y = m.vert[m.alpha[vy]];
  int xw = m.alpha[wx], wy = m.alpha[yw];
  require(x != v && x != w && y != v && y != w && x != y, errc::invalid_edge,
          "degenerate configuration (triangulation too small to collapse)");

  MapBuilder b = detail::builder_from_map(m);
  // Keep edges (v,x) and (v,y); the parallel copies through w are deleted and
  // their darts mapped onto the kept twins for root bookkeeping.
  int root_map = m.root;
  auto root_fix = [&](int dead, int live) {
    if (m.root == dead) root_map = live;
  };
  root_fix(wx, m.alpha[xv]);  // w->x becomes v->x
  root_fix(xw, xv);
  root_fix(wy, vy);
  root_fix(yw, m.alpha[vy]);
  for (int dead : {wx, xw, wy, yw}) {
    b.remove_from_rotation(dead);
    b.kill(dead);
  }
  // Merge w into v: splice w's remaining rotation, starting after alpha(e),
  // into the slot e occupied in v's rotation.
  std::vector<int> w_rest;
  for (int z = b.sigma(ad); z != ad; z = b.sigma(z)) w_rest.push_back(z);
  std::vector<int> out_rot;
  {
    int z = d;
    do {
      if (z == d)
        out_rot.insert(out_rot.end(), w_rest.begin(), w_rest.end());
      else
        out_rot.push_back(z);
      z = b.sigma(z);
    } while (z != d);
  }
  b.kill(d);
  b.kill(ad);
  require(!out_rot.empty(), errc::invalid_edge, "collapse removed every dart at the merged vertex");
  std::vector<int> contour(out_rot.rbegin(), out_rot.rend());
  b.set_rotation_contour_order(contour);
  for (int z : out_rot) b.d[z].tail = v;

  int new_pointed = m.pointed == w ? v : m.pointed;
  EdgePairCollapse result;
  result.map = b.finish(root_map, new_pointed);
  check_map(result.map);
  auto rep = validate(result.map, MapClass::simple_triangulation);
  result.simple = rep.ok;
  return result;
}

}  // namespace mapforge

#endif
