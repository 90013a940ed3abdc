#ifndef MAPFORGE_BDFG_HPP
#define MAPFORGE_BDFG_HPP

#include <limits>
#include <utility>
#include <vector>

#include "mapforge/mobiles.hpp"
#include "mapforge/planar_maps.hpp"

namespace mapforge {

// Integer labels on the white vertices, derived from the +-1 strings of the
// black vertices: the origin gets 0, and a black vertex whose parent carries
// label a gives its j-th child label a + i_j - 2j, where i_1 < ... < i_{p-1}
// are the positions of the -1 entries of its string.
struct WhiteLabelling {
  std::vector<int> label;  // by vertex id; meaningful at white vertices
};

inline WhiteLabelling propagate_white_labels(const LabelledMobile& lm) {
  lm.check_valid();
  const Mobile& m = lm.m;
  WhiteLabelling wl;
  wl.label.assign(m.t.n_vertices(), 0);
  for (int v : m.t.preorder()) {
    if (!m.black[v]) continue;
    int a = wl.label[m.t.parent[v]];
    const LabelString& s = lm.label[v];
    int j = 0;
    for (size_t pos = 0; pos < s.size(); ++pos) {
      if (s[pos] == -1) {
        ++j;
        wl.label[m.t.kids[v][j - 1]] = a + static_cast<int>(pos + 1) - 2 * j;
      }
    }
  }
  return wl;
}

// Output of the mobile-to-map construction, with enough bookkeeping to state
// the grow/collapse compatibility results on the map side.
struct PsiResult {
  RootedMap map;
  std::vector<int> map_vertex;   // mobile white vertex id -> map vertex id
  int delta = -1;                // map vertex id of the distinguished vertex
  std::vector<Corner> corners;   // white corners in contour order
  std::vector<int> corner_label; // labels of those corners
  std::vector<int> succ;         // successor corner index, or -1 for delta
  std::vector<int> out_dart;     // chord dart leaving each corner (map ids)

  int corner_index(Corner c) const {
    for (size_t i = 0; i < corners.size(); ++i)
      if (corners[i] == c) return static_cast<int>(i);
    throw error(errc::invalid_corner, "corner is not a white corner of the mobile");
  }
};

// Builds the pointed rooted 2p-angulation of a labelled p-mobile: every white
// corner with label a sends an edge to the first corner labelled a-1 after it
// in the cyclic contour, or to the fresh vertex delta when a is minimal. The
// root edge leaves the root corner, oriented away from it iff epsilon = +1.
inline PsiResult psi(const LabelledMobile& lm, int epsilon) {
  require(epsilon == 1 || epsilon == -1, errc::invalid_input, "epsilon must be +-1");
  require(lm.m.size() >= 1, errc::invalid_input, "mobile must have at least one black vertex");
  WhiteLabelling wl = propagate_white_labels(lm);
  const Mobile& m = lm.m;

  PsiResult r;
  for (const Corner& c : contour_corners(m.t))
    if (!m.black[c.v]) {
      r.corners.push_back(c);
      r.corner_label.push_back(wl.label[c.v]);
    }
  const int nc = static_cast<int>(r.corners.size());
  int min_label = std::numeric_limits<int>::max();
  for (int l : r.corner_label) min_label = std::min(min_label, l);

  // Cut the cyclic contour right after a minimum-label corner: no chord spans
  // over such a corner, so one linear pass matches every chord.
  int cut = 0;
  while (r.corner_label[cut] != min_label) ++cut;
  std::vector<int> order(nc);
  for (int i = 0; i < nc; ++i) order[i] = (cut + 1 + i) % nc;

  r.succ.assign(nc, -2);
  std::vector<std::vector<int>> incoming(nc);  // popped chord sources, pop order
  std::vector<int> delta_sources;              // min-label corners, contour order
  std::vector<int> stack;
  for (int j : order) {
    int a = r.corner_label[j];
    while (!stack.empty() && r.corner_label[stack.back()] == a + 1) {
      int src = stack.back();
      stack.pop_back();
      r.succ[src] = j;
      incoming[j].push_back(src);
    }
    if (a == min_label) {
      r.succ[j] = -1;
      delta_sources.push_back(j);
    } else {
      stack.push_back(j);
    }
  }
  require(stack.empty(), errc::invalid_input, "unmatched chord in contour scan");

  // Assemble the rotation system. One chord per white corner; erase the
  // mobile edges and black vertices entirely.
  MapBuilder b;
  std::vector<int> white_map_vertex(m.t.n_vertices(), -1);
  for (int v = 0; v < m.t.n_vertices(); ++v)
    if (!m.black[v]) white_map_vertex[v] = b.new_vertex();
  int delta_vertex = b.new_vertex();

  std::vector<int> out_dart(nc), in_dart(nc);
  for (int j = 0; j < nc; ++j) {
    int tail = white_map_vertex[r.corners[j].v];
    int head = r.succ[j] >= 0 ? white_map_vertex[r.corners[r.succ[j]].v] : delta_vertex;
    out_dart[j] = b.new_dart(tail);
    in_dart[j] = b.new_dart(head);
    b.pair_darts(out_dart[j], in_dart[j]);
  }

  // Per white vertex, corners in contour order; within a corner the arriving
  // chords come first (most recently opened first), then the outgoing chord.
  // Read along the contour this is the sigma^{-1} cycle at the vertex.
  std::vector<std::vector<int>> rot(b.n_vertex_ids);
  for (int j = 0; j < nc; ++j) {
    int mv = white_map_vertex[r.corners[j].v];
    for (int src : incoming[j]) rot[mv].push_back(in_dart[src]);
    rot[mv].push_back(out_dart[j]);
  }
  // delta sits in the outer region of the chord diagram, which is traversed
  // opposite to the mobile contour: its spokes are attached in reverse order.
  for (auto it = delta_sources.rbegin(); it != delta_sources.rend(); ++it)
    rot[delta_vertex].push_back(in_dart[*it]);
  for (int v = 0; v < b.n_vertex_ids; ++v)
    if (!rot[v].empty()) b.set_rotation_contour_order(rot[v]);

  // The root corner is the first white corner of the contour (the origin is
  // white, so it opens the contour).
  int root_corner = 0;
  require(r.corners[root_corner].v == 0 && r.corners[root_corner].slot == 0,
          errc::invalid_input, "contour does not start at the root corner");
  int root_dart = epsilon == 1 ? out_dart[root_corner] : in_dart[root_corner];

  RootedMap map = b.finish(root_dart, delta_vertex);
  r.map = std::move(map);
  // builder vertex ids survive compaction in first-appearance order; recover
  // the white-vertex mapping from the darts.
  r.map_vertex.assign(m.t.n_vertices(), -1);
  for (int j = 0; j < nc; ++j) {
    r.map_vertex[r.corners[j].v] = r.map.vert[2 * j];  // out_dart[j] == dart 2j
  }
  r.delta = r.map.pointed;
  r.out_dart = std::move(out_dart);
  return r;
}

// Face boundary cycle and collapse base-point of the face created by growing
// a mobile at a corner. The successor chains started just left and just right
// of the new edge run through the new black vertex's children and meet; they
// may share a common tail (both continuing through the same child corner),
// which then hangs inside the face as a pendant. The outer boundary is the
// cycle that remains after trimming the shared tail.
struct GrownFaceBoundary {
  std::vector<int> cycle;   // dart sequence in the grown map, starting at base
  int base_vertex = -1;     // map vertex of the grown corner's white vertex
  int interior_hint = -1;   // a vertex strictly inside the face, or -1
};

inline GrownFaceBoundary grown_face_boundary(const PsiResult& pr, const LabelledMobile& grown,
                                             int new_black) {
  const Mobile& m = grown.m;
  int u = m.t.parent[new_black];
  int pos = -1;
  for (size_t i = 0; i < m.t.kids[u].size(); ++i)
    if (m.t.kids[u][i] == new_black) pos = static_cast<int>(i);
  require(pos >= 0, errc::invalid_vertex, "new black vertex is not a child of its parent");

  // Corner just left of the new edge, and just right of it; at the origin the
  // corner after the last child wraps around to the root corner.
  Corner right{u, pos + 1};
  if (u == 0 && pos + 1 == static_cast<int>(m.t.kids[u].size())) right = Corner{0, 0};
  int cl = pr.corner_index(Corner{u, pos});
  int cr = pr.corner_index(right);
  std::vector<char> is_child(m.t.n_vertices(), 0);
  for (int c : m.t.kids[new_black]) is_child[c] = 1;

  // Chains as corner sequences; -1 terminates at delta. The left chain runs
  // while it stays on the new vertex's children; the right chain follows
  // successors until it hits the left chain's final corner.
  std::vector<int> left{cl};
  {
    int cur = pr.succ[cl];
    while (cur >= 0 && is_child[pr.corners[cur].v]) {
      left.push_back(cur);
      cur = pr.succ[cur];
    }
    left.push_back(cur);
  }
  std::vector<int> right_ch{cr};
  {
    int target = left.back();
    int cur = pr.succ[cr];
    size_t fuel = pr.corners.size() + 1;
    while (cur != target && cur >= 0) {
      require(fuel-- > 0, errc::invalid_input, "boundary chains of the grown face do not meet");
      right_ch.push_back(cur);
      cur = pr.succ[cur];
    }
    require(cur == target, errc::invalid_input, "boundary chains of the grown face do not meet");
    right_ch.push_back(cur);
  }
  auto vert_of = [&](int corner) {
    return corner >= 0 ? pr.map_vertex[pr.corners[corner].v] : pr.delta;
  };

  GrownFaceBoundary out;
  out.base_vertex = pr.map_vertex[u];
  // Trim the common tail; whatever is trimmed hangs inside the face, so its
  // far end makes a valid interior hint.
  while (left.size() >= 2 && right_ch.size() >= 2 &&
         left[left.size() - 2] == right_ch[right_ch.size() - 2]) {
    out.interior_hint = vert_of(left.back());
    left.pop_back();
    right_ch.pop_back();
  }
  require(left.size() == right_ch.size(), errc::invalid_input,
          "boundary chains of the grown face have unequal lengths");
  for (size_t i = 0; i + 1 < left.size(); ++i) out.cycle.push_back(pr.out_dart[left[i]]);
  for (size_t i = right_ch.size() - 1; i-- > 0;)
    out.cycle.push_back(pr.map.alpha[pr.out_dart[right_ch[i]]]);

  if (out.interior_hint < 0) {
    // children off the cycle hang inside the face
    std::set<int> cyc_vs;
    for (int d : out.cycle) cyc_vs.insert(pr.map.vert[d]);
    for (int c : m.t.kids[new_black]) {
      if (!cyc_vs.count(pr.map_vertex[c])) {
        out.interior_hint = pr.map_vertex[c];
        break;
      }
    }
  }
  return out;
}

}  // namespace mapforge

#endif
