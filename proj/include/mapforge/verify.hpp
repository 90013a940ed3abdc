#ifndef MAPFORGE_VERIFY_HPP
#define MAPFORGE_VERIFY_HPP

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mapforge/coupling.hpp"
#include "mapforge/json_io.hpp"

namespace mapforge {

struct CheckLine {
  std::string label;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckLine> checks;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  void add(const std::string& label, bool ok, const std::string& detail = "") {
    checks.push_back({label, ok, detail});
  }
  json to_json() const {
    json arr = json::array();
    for (const auto& c : checks)
      arr.push_back({{"check", c.label}, {"pass", c.pass}, {"detail", c.detail}});
    return json{{"suite", suite}, {"pass", pass()}, {"checks", arr}};
  }
};

// counts: enumerative identities against the closed-form formulas.
inline SuiteReport verify_counts(int max_n, long guard = kDefaultEnumerationGuard) {
  SuiteReport rep;
  rep.suite = "counts";
  for (int d : {2, 3, 4}) {
    bool ok = true;
    std::string detail;
    for (int n = 0; n <= std::min(max_n, 8); ++n) {
      BigInt formula = count_complete_trees(d, n);
      if (formula > guard) break;
      auto all = enumerate_complete_trees(d, n, guard);
      std::set<std::string> codes;
      for (const auto& t : all) codes.insert(t.code());
      if (BigInt(static_cast<long>(all.size())) != formula || codes.size() != all.size()) {
        ok = false;
        detail = "d=" + std::to_string(d) + " n=" + std::to_string(n);
        break;
      }
    }
    rep.add("tree enumeration matches the Fuss-Catalan count (d=" + std::to_string(d) + ")", ok,
            detail);
  }
  {
    bool ok = true;
    std::string detail;
    for (int p : {2, 3, 4}) {
      for (int n = 0; n <= std::min(max_n, 5); ++n) {
        if (count_complete_trees(p, n) > 20000) break;
        auto codes = enumerate_mobile_codes(p, n, guard);
        std::set<std::string> uniq(codes.begin(), codes.end());
        if (BigInt(static_cast<long>(uniq.size())) != count_complete_trees(p, n)) {
          ok = false;
          detail = "p=" + std::to_string(p) + " n=" + std::to_string(n);
        }
      }
    }
    rep.add("mobile enumeration matches the p-ary tree count", ok, detail);
  }
  {
    bool ok = true;
    std::string detail;
    for (int n = 1; n <= std::min(max_n, 4); ++n) {
      std::map<std::string, int> hits;
      for (const auto& bt : enumerate_blossoming(n, guard))
        for (int eps : {1, -1}) hits[canonical_code(xi(bt, eps)).to_string()] += 1;
      bool level_ok = BigInt(static_cast<long>(hits.size())) == count_simple_triangulations(n);
      for (const auto& [code, k] : hits) level_ok = level_ok && k == 2 * n;
      if (!level_ok) {
        ok = false;
        detail = "n=" + std::to_string(n);
      }
    }
    rep.add("distinct closing images match the triangulation count, each hit 2n times", ok,
            detail);
  }
  {
    bool ok = true;
    for (long N = 0; N <= 10; ++N) {
      BigInt conv = 0;
      for (long k = 0; k <= N; ++k)
        conv += count_complete_trees(4, k) * count_complete_trees(4, N - k);
      if (conv != (N + 1) * count_simple_triangulations(N + 1)) ok = false;
    }
    rep.add("convolution of 4-ary counts equals (N+1)|STr_{N+1}| for N <= 10", ok);
  }
  return rep;
}

// bijections: the mobile <-> tree correspondence and its growth equivariance.
inline SuiteReport verify_bijections(int max_n, long guard = kDefaultEnumerationGuard) {
  SuiteReport rep;
  rep.suite = "bijections";
  for (int p : {2, 3, 4}) {
    bool round = true, sizes = true;
    for (int n = 0; n <= std::min(max_n, 5); ++n) {
      if (count_complete_trees(p, n) > 2000) break;
      for (const auto& t : enumerate_complete_trees(p, n, guard)) {
        Mobile m = phi_inverse(t);
        if (phi(m).code() != t.code()) round = false;
        if (m.size() != t.size()) sizes = false;
        Mobile again = phi_inverse(phi(m));
        if (again.code() != m.code()) round = false;
      }
    }
    rep.add("phi round-trips on all trees and mobiles (p=" + std::to_string(p) + ")",
            round && sizes);
  }
  {
    // The growth-scheme transfer needs: every leaf growth of phi(m) is the
    // image of a corner growth of m. (The converse can fail: grafting between
    // two equal sibling subtrees coincides with an append-last growth whose
    // image is no leaf growth.)
    bool ok = true;
    std::string detail;
    for (int p : {2, 3}) {
      for (int n = 0; n <= std::min(max_n, 3); ++n) {
        for (const auto& t : enumerate_complete_trees(p, n, guard)) {
          Mobile m = phi_inverse(t);
          std::set<std::string> grown_via_mobile;
          for (const Corner& c : white_corners(m))
            grown_via_mobile.insert(phi_code(grow_mobile_unlabelled(m, c).first));
          for (int leaf : t.leaves()) {
            if (!grown_via_mobile.count(grow_tree(t, leaf).code())) {
              ok = false;
              detail = "p=" + std::to_string(p) + " n=" + std::to_string(n);
            }
          }
        }
      }
    }
    rep.add("every leaf growth of the tree is realized by a corner growth of the mobile", ok,
            detail);
  }
  return rep;
}

// growth-lemmas: the two collapse-of-grow identities on the map side.
inline SuiteReport verify_growth_lemmas(int max_n, long guard = kDefaultEnumerationGuard) {
  SuiteReport rep;
  rep.suite = "growth-lemmas";
  {
    bool ok = true;
    std::string detail;
    long cases = 0;
    for (int p : {2, 3}) {
      int cap = p == 2 ? std::min(max_n, 3) : std::min(max_n, 2);
      for (int n = 1; n <= cap && ok; ++n) {
        auto labels = enumerate_labels(p);
        for (const auto& t : enumerate_complete_trees(p, n, guard)) {
          Mobile base = phi_inverse(t);
          // all labellings of the base mobile
          std::vector<int> blacks;
          for (int v = 0; v < base.t.n_vertices(); ++v)
            if (base.black[v]) blacks.push_back(v);
          std::vector<size_t> idx(blacks.size(), 0);
          while (true) {
            LabelledMobile lm;
            lm.m = base;
            lm.label.assign(base.t.n_vertices(), {});
            for (size_t i = 0; i < blacks.size(); ++i) lm.label[blacks[i]] = labels[idx[i]];
            for (const Corner& c : white_corners(base)) {
              for (const auto& s : labels) {
                auto [grown, nb] = grow_mobile(lm, c, s);
                for (int eps : {1, -1}) {
                  PsiResult pr = psi(grown, eps);
                  GrownFaceBoundary gfb = grown_face_boundary(pr, grown, nb);
                  RootedMap collapsed =
                      collapse_face(pr.map, gfb.cycle, gfb.base_vertex, gfb.interior_hint);
                  RootedMap expect = psi(lm, eps).map;
                  // the collapse identity lives on unpointed maps; when the
                  // distinguished vertex survives it matches pointedly too
                  if (collapsed.pointed < 0) expect = forget_pointing(expect);
                  if (!(canonical_code(collapsed) == canonical_code(expect))) {
                    ok = false;
                    detail = "p=" + std::to_string(p) + " n=" + std::to_string(n);
                  }
                  ++cases;
                }
              }
            }
            // next labelling
            size_t i = 0;
            while (i < idx.size() && ++idx[i] == labels.size()) idx[i++] = 0;
            if (i == idx.size()) break;
          }
          if (!ok) break;
        }
      }
    }
    rep.add("collapsing the grown face recovers the smaller angulation (" +
                std::to_string(cases) + " cases)",
            ok, detail);
  }
  {
    bool ok = true;
    std::string detail;
    long cases = 0;
    for (int total = 0; total <= std::min(max_n, 3); ++total) {
      for (int a = 0; a <= total; ++a) {
        for (const auto& l : enumerate_complete_trees(4, a, guard)) {
          for (const auto& r : enumerate_complete_trees(4, total - a, guard)) {
            FourAryPair pair{l, r};
            BlossomingTree tau = join_pair(pair);
            for (PairSide side : {PairSide::left, PairSide::right}) {
              const CompleteDAryTree& tree = side == PairSide::left ? pair.l : pair.r;
              for (int leaf : tree.leaves()) {
                FourAryPair grown = grow_pair(pair, side, leaf);
                BlossomingTree tau2 = join_pair(grown);
                int graft = find_grafted_nonblossom(tau, tau2);
                int beta = bt_right_blossom_child(tau2, graft);
                for (int eps : {1, -1}) {
                  XiResult big = xi_full(tau2, eps);
                  int e_dart = big.blossom_map_dart[beta];
                  EdgePairCollapse res = collapse_edge_pair(big.map, e_dart);
                  if (!res.simple ||
                      !(canonical_code(res.map) == canonical_code(xi(tau, eps)))) {
                    ok = false;
                    detail = "total=" + std::to_string(total);
                  }
                  ++cases;
                }
              }
            }
          }
        }
      }
    }
    rep.add("collapsing the grown face pair recovers the smaller triangulation (" +
                std::to_string(cases) + " cases)",
            ok, detail);
  }
  return rep;
}

// flow: the coupling network, its cuts, and the function h.
inline SuiteReport verify_flow(int max_n) {
  SuiteReport rep;
  rep.suite = "flow";
  {
    bool ok = true;
    for (long n = 1; n <= std::min(max_n, 12); ++n) {
      FlowNetwork net = build_flow_network(n);
      BigRat s(0), t(0);
      for (const auto& c : net.source_cap) s += c;
      for (const auto& c : net.sink_cap) t += c;
      if (s != 1 || t != 1) ok = false;
      if (max_flow(net).value != 1) ok = false;
    }
    rep.add("every coupling network carries exactly a unit flow (n <= " +
                std::to_string(std::min(max_n, 12)) + ")",
            ok);
  }
  {
    FlowNetwork net = build_flow_network(5);
    bool ok = net.src(5, 0) == BigRat(17, 42) && net.src(4, 1) == BigRat(10, 171) &&
              net.src(3, 2) == BigRat(44, 1197) && net.src(0, 5) == BigRat(17, 42) &&
              net.snk(3, 3) == BigRat(22, 805);
    rep.add("pinned capacities of the n=5 network", ok);
  }
  {
    bool ok = true;
    for (long n = 1; n <= std::min(max_n, 8); ++n) {
      FlowNetwork net = build_flow_network(n);
      if (cut_capacity(net, -1) != 1) ok = false;
      BigRat all_src(0);
      for (const auto& c : net.source_cap) all_src += c;
      if (all_src != 1) ok = false;
      for (long i = -1; i < n; ++i)
        if (!(cut_capacity(net, i + 1) > cut_capacity(net, i))) ok = false;
    }
    rep.add("cut capacities increase along the staircase and bottom out at one", ok);
  }
  {
    bool ok = true;
    std::string detail;
    for (long n = 0; n <= std::min(max_n, 12); ++n) {
      HTable a = compute_h(n);
      if (!h_table_violation(a).empty()) {
        ok = false;
        detail = "flow route, n=" + std::to_string(n);
      }
      HTable b = solve_h_linear(n);
      if (!h_table_violation(b).empty()) {
        ok = false;
        detail = "linear route, n=" + std::to_string(n);
      }
      if (a.value != b.value) {
        ok = false;
        detail = "routes disagree, n=" + std::to_string(n);
      }
    }
    rep.add("h satisfies both bullets on both computation routes (n <= " +
                std::to_string(std::min(max_n, 12)) + ")",
            ok, detail);
  }
  {
    HTable t1 = solve_h_linear(1), t3 = solve_h_linear(3);
    bool ok = t1.at(1, 1) == BigRat(1, 2) && t3.at(1, 3) == BigRat(25, 143) &&
              t3.at(3, 1) == BigRat(118, 143);
    rep.add("pinned h values: h(1,1)=1/2, h(1,3)=25/143, h(3,1)=118/143", ok);
  }
  return rep;
}

// uniformity: exact distribution propagation through both chains.
inline SuiteReport verify_uniformity(int max_n, CouplingContext& ctx) {
  SuiteReport rep;
  rep.suite = "uniformity";
  {
    UniformityReport r = verify_uniformity_angulation(2, std::min(max_n, 4), ctx);
    rep.add("angulation chain exactly uniform (p=2, n <= " +
                std::to_string(std::min(max_n, 4)) + ")",
            r.pass, r.failure);
  }
  {
    UniformityReport r = verify_uniformity_angulation(3, std::min(max_n, 2), ctx);
    rep.add("angulation chain exactly uniform (p=3, n <= " +
                std::to_string(std::min(max_n, 2)) + ")",
            r.pass, r.failure);
  }
  {
    UniformityReport r = verify_uniformity_triangulation(std::min(max_n, 5), ctx);
    rep.add("triangulation chain exactly uniform (n <= " + std::to_string(std::min(max_n, 5)) +
                ")",
            r.pass, r.failure);
  }
  return rep;
}

inline SuiteReport run_suite(const std::string& name, int max_n, CouplingContext& ctx) {
  if (name == "counts") return verify_counts(max_n, ctx.guard);
  if (name == "bijections") return verify_bijections(max_n, ctx.guard);
  if (name == "growth-lemmas") return verify_growth_lemmas(max_n, ctx.guard);
  if (name == "flow") return verify_flow(max_n);
  if (name == "uniformity") return verify_uniformity(max_n, ctx);
  throw error(errc::invalid_input, "unknown suite: " + name);
}

}  // namespace mapforge

#endif
