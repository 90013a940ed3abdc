#ifndef MAPFORGE_JSON_IO_HPP
#define MAPFORGE_JSON_IO_HPP

#include <string>

#include "json.hpp"
#include "mapforge/blossoming.hpp"
#include "mapforge/mobiles.hpp"
#include "mapforge/planar_maps.hpp"
#include "mapforge/plane_trees.hpp"

namespace mapforge {

using json = nlohmann::json;

inline json tree_to_json(const CompleteDAryTree& t) {
  return json{{"d", t.d}, {"n", t.size()}, {"code", t.code()}};
}

inline CompleteDAryTree tree_from_json(const json& j) {
  CompleteDAryTree t = dary_from_code(j.at("d").get<int>(), j.at("code").get<std::string>());
  require(t.size() == j.at("n").get<int>(), errc::invalid_input, "tree size mismatch in JSON");
  return t;
}

// Labels are listed in preorder of the black vertices as arrays of +-1.
inline json mobile_to_json(const LabelledMobile& lm) {
  json labels = json::array();
  for (int v : lm.m.t.preorder())
    if (lm.m.black[v]) labels.push_back(lm.label[v]);
  return json{{"p", lm.m.p}, {"tree", lm.m.code()}, {"labels", labels}};
}

inline LabelledMobile mobile_from_json(const json& j) {
  int p = j.at("p").get<int>();
  std::string code = j.at("tree").get<std::string>();
  LabelledMobile lm;
  lm.m.p = p;
  // parse the tagged parenthesis word
  lm.m.t = PlaneTree{};
  lm.m.black.clear();
  int cur = -1;
  for (size_t i = 0; i < code.size(); ++i) {
    char ch = code[i];
    if (ch == 'w' || ch == 'b') {
      int v = cur < 0 ? 0 : lm.m.t.append_child(cur);
      lm.m.black.push_back(ch == 'b');
      require(i + 1 < code.size() && code[i + 1] == '(', errc::invalid_input,
              "malformed mobile code");
      cur = v;
      ++i;
    } else if (ch == ')') {
      require(cur >= 0, errc::invalid_input, "malformed mobile code");
      cur = lm.m.t.parent[cur];
    } else {
      throw error(errc::invalid_input, "malformed mobile code");
    }
  }
  require(cur == -1, errc::invalid_input, "malformed mobile code");
  lm.label.assign(lm.m.t.n_vertices(), {});
  size_t next = 0;
  const json& labels = j.at("labels");
  for (int v : lm.m.t.preorder()) {
    if (!lm.m.black[v]) continue;
    require(next < labels.size(), errc::invalid_input, "missing label in mobile JSON");
    lm.label[v] = labels[next++].get<LabelString>();
  }
  require(next == labels.size(), errc::invalid_input, "extra labels in mobile JSON");
  lm.check_valid();
  return lm;
}

// Darts are serialized 1-based; "pointed" holds the smallest dart whose tail
// is the distinguished vertex, or null.
inline json map_to_json(const RootedMap& m) {
  json sigma = json::array(), alpha = json::array();
  for (int d = 0; d < m.n_darts(); ++d) {
    sigma.push_back(m.sigma[d] + 1);
    alpha.push_back(m.alpha[d] + 1);
  }
  json j{{"darts", m.n_darts()}, {"sigma", sigma}, {"alpha", alpha}, {"root", m.root + 1}};
  if (m.pointed >= 0) {
    int mark = -1;
    for (int d = 0; d < m.n_darts() && mark < 0; ++d)
      if (m.vert[d] == m.pointed) mark = d + 1;
    j["pointed"] = mark;
  } else {
    j["pointed"] = nullptr;
  }
  return j;
}

inline RootedMap map_from_json(const json& j) {
  RootedMap m;
  int nd = j.at("darts").get<int>();
  m.sigma.resize(nd);
  m.alpha.resize(nd);
  for (int d = 0; d < nd; ++d) {
    m.sigma[d] = j.at("sigma").at(d).get<int>() - 1;
    m.alpha[d] = j.at("alpha").at(d).get<int>() - 1;
  }
  m.root = j.at("root").get<int>() - 1;
  // vertices = orbits of sigma, numbered by smallest dart
  m.vert.assign(nd, -1);
  int nv = 0;
  for (int d = 0; d < nd; ++d) {
    if (m.vert[d] >= 0) continue;
    int x = d;
    do {
      m.vert[x] = nv;
      x = m.sigma[x];
    } while (x != d);
    ++nv;
  }
  m.n_vertices = nd == 0 ? 1 : nv;
  if (!j.at("pointed").is_null()) m.pointed = m.vert[j.at("pointed").get<int>() - 1];
  check_map(m);
  return m;
}

inline json blossoming_to_json(const BlossomingTree& bt) {
  return json{{"n", bt.size()}, {"code", bt.code()}};
}

inline json pair_to_json(const FourAryPair& p) {
  return json{{"l", p.l.code()}, {"r", p.r.code()}};
}

inline FourAryPair pair_from_json(const json& j) {
  return FourAryPair{dary_from_code(4, j.at("l").get<std::string>()),
                     dary_from_code(4, j.at("r").get<std::string>())};
}

// Undirected multigraph in DOT form; the root edge is emphasized and carries
// an arrowhead, the pointed vertex is doubly circled.
inline std::string map_to_dot(const RootedMap& m) {
  std::string out = "graph map {\n";
  if (m.pointed >= 0)
    out += "  v" + std::to_string(m.pointed) + " [shape=doublecircle];\n";
  for (int d = 0; d < m.n_darts(); ++d) {
    if (d > m.alpha[d]) continue;
    int u = m.vert[d], v = m.vert[m.alpha[d]];
    bool is_root = d == m.root || m.alpha[d] == m.root;
    out += "  v" + std::to_string(u) + " -- v" + std::to_string(v);
    if (is_root) {
      bool away = d == m.root;  // dart order gives the orientation
      out += away ? " [color=red, penwidth=2, dir=forward]"
                  : " [color=red, penwidth=2, dir=back]";
    }
    out += ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace mapforge

#endif
