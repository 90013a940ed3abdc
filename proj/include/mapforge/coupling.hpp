#ifndef MAPFORGE_COUPLING_HPP
#define MAPFORGE_COUPLING_HPP

#include <boost/math/special_functions/gamma.hpp>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mapforge/bdfg.hpp"
#include "mapforge/blossoming.hpp"
#include "mapforge/mobiles.hpp"
#include "mapforge/plane_trees.hpp"
#include "mapforge/rational.hpp"
#include "mapforge/rng.hpp"

namespace mapforge {

// |STr_n| = 2 (4n-3)! / (n! (3n-1)!), the number of rooted simple
// triangulations of the sphere with 2n faces.
inline BigInt count_simple_triangulations(long n) {
  require(n >= 1, errc::invalid_input, "triangulation size must be at least 1");
  if (n == 1) return 1;  // (4n-3)! / (3n-1)! is a falling product only from n = 2 on
  BigInt num = 2;
  for (long i = 3 * n; i <= 4 * n - 3; ++i) num *= i;  // (4n-3)!/(3n-1)!
  BigInt den = 1;
  for (long i = 2; i <= n; ++i) den *= i;
  return num / den;
}

inline BigRat ct4_ratio(long i) {
  return BigRat(count_complete_trees(4, i + 1), count_complete_trees(4, i));
}

// ---- generic exact-arithmetic max flow (Dinic) -----------------------------

template <class Num>
struct FlowGraph {
  struct Edge {
    int to;
    Num cap;
  };
  std::vector<Edge> edges;  // edge 2k and its residual 2k+1
  std::vector<std::vector<int>> adj;
  std::vector<Num> orig_cap;

  int add_node() {
    adj.emplace_back();
    return static_cast<int>(adj.size()) - 1;
  }

  int add_edge(int u, int v, Num cap) {
    int id = static_cast<int>(edges.size());
    edges.push_back({v, cap});
    edges.push_back({u, Num(0)});
    adj[u].push_back(id);
    adj[v].push_back(id + 1);
    orig_cap.push_back(cap);
    return id / 2;
  }

  Num flow_on(int edge_id) const { return orig_cap[edge_id] - edges[2 * edge_id].cap; }

  Num max_flow(int s, int t) {
    Num total(0);
    std::vector<int> level(adj.size()), it(adj.size());
    auto bfs = [&]() {
      std::fill(level.begin(), level.end(), -1);
      std::queue<int> q;
      q.push(s);
      level[s] = 0;
      while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int id : adj[u]) {
          const Edge& e = edges[id];
          if (e.cap > 0 && level[e.to] < 0) {
            level[e.to] = level[u] + 1;
            q.push(e.to);
          }
        }
      }
      return level[t] >= 0;
    };
    std::function<Num(int, Num)> dfs = [&](int u, Num pushed) -> Num {
      if (u == t) return pushed;
      for (int& i = it[u]; i < static_cast<int>(adj[u].size()); ++i) {
        int id = adj[u][i];
        Edge& e = edges[id];
        if (e.cap > 0 && level[e.to] == level[u] + 1) {
          Num amt = dfs(e.to, std::min(pushed, e.cap));
          if (amt > 0) {
            e.cap -= amt;
            edges[id ^ 1].cap += amt;
            return amt;
          }
        }
      }
      return Num(0);
    };
    while (bfs()) {
      std::fill(it.begin(), it.end(), 0);
      while (true) {
        Num inf = Num(0);
        for (int id : adj[s]) inf += edges[id].cap;
        if (inf == 0) break;
        Num amt = dfs(s, inf);
        if (amt == 0) break;
        total += amt;
      }
    }
    return total;
  }
};

// ---- the coupling flow network G_n -----------------------------------------

// Nodes are the pairs (a, b) with a + b = n or n + 1, plus source and sink.
// C_{s->(a,b)} = |CT4_a||CT4_b| / ((n+1)|STr_{n+1}|) and
// C_{(a,b)->t} = |CT4_a||CT4_b| / ((n+2)|STr_{n+2}|); middle edges (a,b) to
// (a+1,b) and (a,b+1) are unbounded. Source and sink capacities each total 1.
struct FlowNetwork {
  long n = 1;
  std::vector<BigRat> source_cap;  // index j <-> pair (n-j, j)
  std::vector<BigRat> sink_cap;    // index j <-> pair (n+1-j, j)

  BigRat src(long a, long b) const { return source_cap.at(b); }
  BigRat snk(long a, long b) const { return sink_cap.at(b); }
};

inline FlowNetwork build_flow_network(long n) {
  require(n >= 1, errc::invalid_input, "flow network needs n >= 1");
  FlowNetwork net;
  net.n = n;
  BigInt dn1 = (n + 1) * count_simple_triangulations(n + 1);
  BigInt dn2 = (n + 2) * count_simple_triangulations(n + 2);
  for (long j = 0; j <= n; ++j)
    net.source_cap.push_back(
        BigRat(count_complete_trees(4, n - j) * count_complete_trees(4, j), dn1));
  for (long j = 0; j <= n + 1; ++j)
    net.sink_cap.push_back(
        BigRat(count_complete_trees(4, n + 1 - j) * count_complete_trees(4, j), dn2));
  return net;
}

// A maximum flow on G_n; middle-edge flows are keyed by the lower pair.
struct NetworkFlow {
  BigRat value;
  std::vector<BigRat> up_left;   // (n-j, j) -> (n+1-j, j), index j
  std::vector<BigRat> up_right;  // (n-j, j) -> (n-j, j+1), index j
};

inline NetworkFlow max_flow(const FlowNetwork& net) {
  const long n = net.n;
  FlowGraph<BigRat> g;
  int S = g.add_node(), T = g.add_node();
  std::vector<int> lower(n + 1), upper(n + 2);
  for (long j = 0; j <= n; ++j) lower[j] = g.add_node();
  for (long j = 0; j <= n + 1; ++j) upper[j] = g.add_node();
  BigRat inf(2);  // any bound above the unit total works for the middle edges
  std::vector<int> e_src(n + 1), e_left(n + 1), e_right(n + 1);
  for (long j = 0; j <= n; ++j) {
    e_src[j] = g.add_edge(S, lower[j], net.source_cap[j]);
    e_left[j] = g.add_edge(lower[j], upper[j], inf);       // (n-j,j) -> (n+1-j,j)
    e_right[j] = g.add_edge(lower[j], upper[j + 1], inf);  // (n-j,j) -> (n-j,j+1)
  }
  for (long j = 0; j <= n + 1; ++j) g.add_edge(upper[j], T, net.sink_cap[j]);
  NetworkFlow out;
  out.value = g.max_flow(S, T);
  for (long j = 0; j <= n; ++j) {
    out.up_left.push_back(g.flow_on(e_left[j]));
    out.up_right.push_back(g.flow_on(e_right[j]));
  }
  return out;
}

// Capacity of the cut K_i = {(n-j,j) : j <= i} u {(n+1-j,j) : j >= i+1}; the
// case i = -1 is the sink side S_{n+1}. The all-source cut S_n also has
// capacity one.
inline BigRat cut_capacity(const FlowNetwork& net, long i) {
  BigRat c(0);
  for (long j = 0; j <= i; ++j) c += net.source_cap[j];
  for (long j = i + 1; j <= net.n + 1; ++j) c += net.sink_cap[j];
  return c;
}

// ---- the function h ---------------------------------------------------------

// Level-n table: values h(x, y) for all x + y = n + 1, with the conventions
// h(0, y) = 0 and h(x, 0) = 1 baked in.
struct HTable {
  long level = 0;
  std::vector<BigRat> value;  // index x, for pair (x, n+1-x)

  BigRat at(long x, long y) const {
    require(x >= 0 && y >= 0 && x + y == level + 1, errc::invalid_input,
            "h argument off this table's level");
    return value.at(x);
  }
};

inline BigRat h_bullet_rhs(long n) {
  return BigRat(count_simple_triangulations(n + 2) * (n + 2),
                count_simple_triangulations(n + 1) * (n + 1));
}

// Checks both defining properties of h exactly; returns the first violation.
inline std::string h_table_violation(const HTable& t) {
  const long n = t.level;
  for (long x = 0; x <= n + 1; ++x) {
    const BigRat v = t.value[x];
    if (v < 0 || v > 1) return "h out of [0,1]";
    if (v + t.value[n + 1 - x] != 1) return "h(a,b)+h(b,a) != 1";
  }
  if (t.value[0] != 0 || t.value[n + 1] != 1) return "boundary convention violated";
  const BigRat rhs = h_bullet_rhs(n);
  for (long a = 0; a <= n; ++a) {
    long b = n - a;
    if (t.at(a + 1, b) * ct4_ratio(a) + t.at(b + 1, a) * ct4_ratio(b) != rhs)
      return "second bullet fails at (" + std::to_string(a) + "," + std::to_string(b) + ")";
  }
  return "";
}

// h from a symmetrized unit flow on G_n: h(a+1, b) = f_{(a,b)->(a+1,b)} /
// C_{(a+1,b)->t}.
inline HTable compute_h(long n) {
  if (n == 0) {
    HTable t;
    t.level = 0;
    t.value = {BigRat(0), BigRat(1)};
    return t;
  }
  FlowNetwork net = build_flow_network(n);
  NetworkFlow f = max_flow(net);
  require(f.value == 1, errc::invalid_input, "flow network does not carry a unit flow");
  HTable t;
  t.level = n;
  t.value.assign(n + 2, BigRat(0));
  t.value[0] = 0;
  for (long j = 0; j <= n; ++j) {
    // pair (a, b) = (n-j, j); symmetrize with the mirrored edge
    long a = n - j, b = j;
    BigRat f_sym = (f.up_left[j] + f.up_right[a]) / 2;  // mirror: (b,a)->(b,a+1)
    t.value[a + 1] = f_sym / net.snk(a + 1, b);
  }
  std::string bad = h_table_violation(t);
  require(bad.empty(), errc::invalid_input, "flow-derived h violates its contract: " + bad);
  return t;
}

// Independent route to h: the two bullets plus the boundary conventions force
// every value by a linear chain, which this solver follows directly.
inline HTable solve_h_linear(long n) {
  HTable t;
  t.level = n;
  t.value.assign(n + 2, BigRat(0));
  t.value[0] = 0;
  t.value[n + 1] = 1;
  const BigRat rhs = h_bullet_rhs(n);
  for (long k = 0; 2 * k < n + 1; ++k) {
    // equation at (a, b) = (n-k, k) determines h(k+1, n-k) from h(n-k+1, k)
    long a = n - k, b = k;
    BigRat known = t.value[a + 1];
    t.value[b + 1] = (rhs - known * ct4_ratio(a)) / ct4_ratio(b);
    if (n - k > k + 1) t.value[n - k] = 1 - t.value[b + 1];
  }
  std::string bad = h_table_violation(t);
  require(bad.empty(), errc::invalid_input, "linear solve for h violates its contract: " + bad);
  return t;
}

// ---- transport plans for complete d-ary trees ------------------------------

// Exact growth coupling between CT^d_n and CT^d_{n+1}: integer masses M(t, T)
// supported on growth pairs with row sums |CT_{n+1}| and column sums |CT_n|;
// the scheme masses are g(T, t) = M(t, T) / |CT_n|.
struct TransportPlan {
  int d = 2;
  int n = 0;
  std::vector<std::string> sources, targets;  // tree codes, sorted
  std::vector<std::vector<std::pair<int, BigInt>>> mass;  // per source
  BigInt count_n = 1, count_n1 = 1;

  int source_index(const std::string& code) const {
    auto it = std::lower_bound(sources.begin(), sources.end(), code);
    require(it != sources.end() && *it == code, errc::invalid_input,
            "tree is not in the plan's source class");
    return static_cast<int>(it - sources.begin());
  }
};

inline TransportPlan tree_transport_plan(int d, int n, long guard = kDefaultEnumerationGuard) {
  TransportPlan plan;
  plan.d = d;
  plan.n = n;
  plan.count_n = count_complete_trees(d, n);
  plan.count_n1 = count_complete_trees(d, n + 1);
  auto src_trees = enumerate_complete_trees(d, n, guard);
  auto tgt_trees = enumerate_complete_trees(d, n + 1, guard);
  for (const auto& t : src_trees) plan.sources.push_back(t.code());
  for (const auto& t : tgt_trees) plan.targets.push_back(t.code());

  FlowGraph<BigInt> g;
  int S = g.add_node(), T = g.add_node();
  std::vector<int> src_node(plan.sources.size()), tgt_node(plan.targets.size());
  for (size_t i = 0; i < plan.sources.size(); ++i) src_node[i] = g.add_node();
  for (size_t j = 0; j < plan.targets.size(); ++j) tgt_node[j] = g.add_node();
  for (size_t i = 0; i < plan.sources.size(); ++i) g.add_edge(S, src_node[i], plan.count_n1);
  std::vector<std::vector<std::pair<int, int>>> mid(plan.sources.size());  // (tgt, edge id)
  for (size_t i = 0; i < plan.sources.size(); ++i) {
    for (int leaf : src_trees[i].leaves()) {
      std::string grown = grow_tree(src_trees[i], leaf).code();
      auto it = std::lower_bound(plan.targets.begin(), plan.targets.end(), grown);
      int j = static_cast<int>(it - plan.targets.begin());
      int id = g.add_edge(src_node[i], tgt_node[j], plan.count_n1);
      mid[i].push_back({j, id});
    }
  }
  for (size_t j = 0; j < plan.targets.size(); ++j) g.add_edge(tgt_node[j], T, plan.count_n);
  BigInt value = g.max_flow(S, T);
  require(value == plan.count_n * plan.count_n1, errc::invalid_input,
          "transport plan flow is not saturating");
  plan.mass.resize(plan.sources.size());
  for (size_t i = 0; i < plan.sources.size(); ++i) {
    std::map<int, BigInt> row;
    for (auto [j, id] : mid[i]) {
      BigInt f = g.flow_on(id);
      if (f > 0) row[j] += f;
    }
    for (auto& [j, f] : row) plan.mass[i].push_back({j, f});
  }
  return plan;
}

// One coupled growth step: given t uniform on CT^d_n, returns T uniform on
// CT^d_{n+1} with T always a growth of t.
inline CompleteDAryTree grow_step_tree(const CompleteDAryTree& t, const TransportPlan& plan,
                                       Rng& rng) {
  require(t.d == plan.d && t.size() == plan.n, errc::invalid_input,
          "tree does not match the plan's size class");
  int i = plan.source_index(t.code());
  BigInt r = rng.below_big(plan.count_n1);
  for (const auto& [j, f] : plan.mass[i]) {
    if (r < f) return dary_from_code(plan.d, plan.targets[j]);
    r -= f;
  }
  throw error(errc::invalid_input, "plan row does not sum to |CT_{n+1}|");
}

// ---- plan and h-table store -------------------------------------------------

// Computes plans and h tables on demand and optionally persists them as JSON
// under cache_dir (see also the MAPFORGE_CACHE environment variable in the
// CLI).
class CouplingContext {
 public:
  std::string cache_dir;
  long guard = kDefaultEnumerationGuard;

  const TransportPlan& plan(int d, int n) {
    auto key = std::make_pair(d, n);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    TransportPlan p;
    if (!load_plan(d, n, p)) {
      p = tree_transport_plan(d, n, guard);
      save_plan(p);
    }
    return plans_.emplace(key, std::move(p)).first->second;
  }

  const HTable& htable(long n) {
    auto it = htables_.find(n);
    if (it != htables_.end()) return it->second;
    HTable t;
    if (!load_htable(n, t)) {
      t = compute_h(n);
      save_htable(t);
    }
    return htables_.emplace(n, std::move(t)).first->second;
  }

 private:
  std::map<std::pair<int, int>, TransportPlan> plans_;
  std::map<long, HTable> htables_;

  std::string plan_path(int d, int n) const {
    return cache_dir + "/plan-d" + std::to_string(d) + "-n" + std::to_string(n) + ".json";
  }
  std::string htable_path(long n) const {
    return cache_dir + "/h-n" + std::to_string(n) + ".json";
  }

  bool load_plan(int d, int n, TransportPlan& p) const {
    if (cache_dir.empty()) return false;
    std::ifstream in(plan_path(d, n));
    if (!in) return false;
    nlohmann::json j;
    in >> j;
    if (j.value("format", 0) != 1 || j.value("kind", "") != "plan") return false;
    if (j["d"].get<int>() != d || j["n"].get<int>() != n) return false;
    p.d = d;
    p.n = n;
    p.count_n = count_complete_trees(d, n);
    p.count_n1 = count_complete_trees(d, n + 1);
    p.sources = j["sources"].get<std::vector<std::string>>();
    p.targets = j["targets"].get<std::vector<std::string>>();
    if (BigInt(static_cast<long>(p.sources.size())) != p.count_n ||
        BigInt(static_cast<long>(p.targets.size())) != p.count_n1)
      return false;
    p.mass.assign(p.sources.size(), {});
    std::vector<BigInt> col(p.targets.size(), 0);
    for (const auto& e : j["masses"]) {
      size_t i = e["s"].get<size_t>(), t = e["t"].get<size_t>();
      if (i >= p.sources.size() || t >= p.targets.size()) return false;
      BigRat gmass = rat_from_string(e["g"].get<std::string>());
      BigRat scaled = gmass * BigRat(p.count_n);
      if (boost::multiprecision::denominator(scaled) != 1) return false;
      p.mass[i].push_back({static_cast<int>(t), boost::multiprecision::numerator(scaled)});
      col[t] += boost::multiprecision::numerator(scaled);
    }
    // a stale or corrupted cache entry is recomputed rather than trusted
    for (const auto& row : p.mass) {
      BigInt sum = 0;
      for (const auto& [t, f] : row) {
        if (f <= 0) return false;
        sum += f;
      }
      if (sum != p.count_n1) return false;
    }
    for (const auto& c : col)
      if (c != p.count_n) return false;
    return true;
  }

  void save_plan(const TransportPlan& p) const {
    if (cache_dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(cache_dir, ec);
    nlohmann::json masses = nlohmann::json::array();
    for (size_t i = 0; i < p.mass.size(); ++i)
      for (const auto& [j2, f] : p.mass[i])
        masses.push_back({{"s", i}, {"t", j2}, {"g", rat_to_string(BigRat(f, p.count_n))}});
    nlohmann::json j{{"format", 1},      {"kind", "plan"},      {"d", p.d},
                     {"n", p.n},         {"sources", p.sources}, {"targets", p.targets},
                     {"masses", masses}};
    std::ofstream out(plan_path(p.d, p.n));
    if (out) out << j.dump() << "\n";
  }

  bool load_htable(long n, HTable& t) const {
    if (cache_dir.empty()) return false;
    std::ifstream in(htable_path(n));
    if (!in) return false;
    nlohmann::json j;
    in >> j;
    if (j.value("format", 0) != 1 || j.value("kind", "") != "h") return false;
    if (j["n"].get<long>() != n) return false;
    t.level = n;
    t.value.clear();
    for (const auto& s : j["values"]) t.value.push_back(rat_from_string(s.get<std::string>()));
    return h_table_violation(t).empty();
  }

  void save_htable(const HTable& t) const {
    if (cache_dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(cache_dir, ec);
    nlohmann::json values = nlohmann::json::array();
    for (const auto& v : t.value) values.push_back(rat_to_string(v));
    nlohmann::json j{{"format", 1}, {"kind", "h"}, {"n", t.level}, {"values", values}};
    std::ofstream out(htable_path(t.level));
    if (out) out << j.dump() << "\n";
  }
};

// ---- the two chain samplers -------------------------------------------------

struct TraceStep {
  int size = 0;            // object size after the step
  std::string side;        // "L"/"R" (triangulation chain)
  int leaf = -1;           // leaf grown in the underlying d-ary tree
  Corner corner{};         // mobile corner grown (angulation chain)
  std::string label;       // new black label as a +- string
  std::string map_code;    // canonical code of the intermediate map
};
using TraceFn = std::function<void(const TraceStep&)>;

inline Corner find_grow_corner(const Mobile& m, const std::string& target_tree_code) {
  for (const Corner& c : white_corners(m)) {
    if (phi_code(grow_mobile_unlabelled(m, c).first) == target_tree_code) return c;
  }
  throw error(errc::invalid_corner, "no corner grows onto the requested tree");
}

// Uniform rooted 2p-angulation with n_target faces via the mobile chain.
inline RootedMap chain_sample_angulation(int p, int n_target, std::uint64_t seed,
                                         CouplingContext& ctx, const TraceFn& trace = nullptr) {
  require(p >= 2, errc::invalid_arity, "p must be at least 2");
  require(n_target >= 1, errc::invalid_input, "target size must be at least 1");
  Rng rng(seed);
  int eps = rng.pm1();
  const BigInt n_labels = binomial(2 * p - 1, p);
  LabelledMobile lm{Mobile::degenerate(p), {{}}};
  for (int m = 0; m < n_target; ++m) {
    const TransportPlan& plan = ctx.plan(p, m);
    CompleteDAryTree cur = phi(lm.m);
    CompleteDAryTree grown = grow_step_tree(cur, plan, rng);
    Corner c = find_grow_corner(lm.m, grown.code());
    LabelString s = label_unrank(p, rng.below_big(n_labels));
    lm = grow_mobile(lm, c, s).first;
    if (trace) {
      TraceStep ev;
      ev.size = m + 1;
      ev.corner = c;
      for (int x : s) ev.label.push_back(x == 1 ? '+' : '-');
      ev.map_code = canonical_code(forget_pointing(psi(lm, eps).map)).to_string();
      trace(ev);
    }
  }
  return forget_pointing(psi(lm, eps).map);
}

// Uniform rooted simple triangulation with 2 n_target faces via the pair
// chain: grow the left tree with probability h(|l|+1, |r|) |CT_{|l|+1}| /
// |CT_{|l|}| normalized by (m+1)|STr_{m+1}| / (m |STr_m|), else the right.
inline RootedMap chain_sample_triangulation(int n_target, std::uint64_t seed,
                                            CouplingContext& ctx, const TraceFn& trace = nullptr) {
  require(n_target >= 1, errc::invalid_input, "target size must be at least 1");
  Rng rng(seed);
  int eps = rng.pm1();
  FourAryPair pair{CompleteDAryTree::degenerate(4), CompleteDAryTree::degenerate(4)};
  for (int m = 1; m < n_target; ++m) {
    const HTable& h = ctx.htable(m - 1);
    long a = pair.l.size(), b = pair.r.size();
    BigRat d_m = BigRat(count_simple_triangulations(m + 1) * (m + 1),
                        count_simple_triangulations(m) * m);
    BigRat q_left = h.at(a + 1, b) * ct4_ratio(a) / d_m;
    bool left = rng.bernoulli(q_left);
    const TransportPlan& plan = ctx.plan(4, left ? a : b);
    if (left)
      pair.l = grow_step_tree(pair.l, plan, rng);
    else
      pair.r = grow_step_tree(pair.r, plan, rng);
    if (trace) {
      TraceStep ev;
      ev.size = m + 1;
      ev.side = left ? "L" : "R";
      ev.map_code = canonical_code(xi(join_pair(pair), eps)).to_string();
      trace(ev);
    }
  }
  return xi(join_pair(pair), eps);
}

// ---- exact distribution propagation ------------------------------------------

enum class ChainKind { angulation, triangulation };

struct LevelReport {
  int n = 0;
  long states = 0;
  long distinct_maps = 0;
  bool uniform_states = false;
  bool uniform_pointed = false;
  bool uniform_rooted = false;
};

struct UniformityReport {
  bool pass = true;
  std::vector<LevelReport> levels;
  std::string failure;

  void fail(const std::string& why) {
    if (pass) failure = why;
    pass = false;
  }
};

// Pushes the exact distribution of the angulation chain level by level and
// checks that pointed and rooted maps stay exactly uniform.
inline UniformityReport verify_uniformity_angulation(int p, int n_max, CouplingContext& ctx) {
  UniformityReport rep;
  const BigInt n_labels = binomial(2 * p - 1, p);
  std::map<std::string, std::pair<LabelledMobile, BigRat>> dist;
  LabelledMobile start{Mobile::degenerate(p), {{}}};
  dist[start.key()] = {start, BigRat(1)};
  std::vector<LabelString> labels = enumerate_labels(p);
  std::map<std::pair<std::string, std::string>, Corner> corner_cache;

  for (int level = 1; level <= n_max; ++level) {
    const TransportPlan& plan = ctx.plan(p, level - 1);
    std::map<std::string, std::pair<LabelledMobile, BigRat>> next;
    for (const auto& [key, entry] : dist) {
      const auto& [lm, q] = entry;
      int i = plan.source_index(phi_code(lm.m));
      for (const auto& [j, f] : plan.mass[i]) {
        const std::string& target = plan.targets[j];
        auto ckey = std::make_pair(lm.m.code(), target);
        auto cit = corner_cache.find(ckey);
        if (cit == corner_cache.end())
          cit = corner_cache.emplace(ckey, find_grow_corner(lm.m, target)).first;
        BigRat p_tree = q * BigRat(f, plan.count_n1);
        BigRat p_step = p_tree / BigRat(n_labels);
        for (const auto& s : labels) {
          LabelledMobile grown = grow_mobile(lm, cit->second, s).first;
          auto& slot = next[grown.key()];
          slot.first = grown;
          slot.second += p_step;
        }
      }
    }
    dist = std::move(next);

    LevelReport lr;
    lr.n = level;
    lr.states = static_cast<long>(dist.size());
    BigInt expect_states_big = n_labels;
    for (int i = 1; i < level; ++i) expect_states_big *= n_labels;
    expect_states_big *= count_complete_trees(p, level);
    BigRat expect_mass = BigRat(1, expect_states_big);
    lr.uniform_states = BigInt(lr.states) == expect_states_big;
    std::map<std::string, BigRat> pointed, rooted;
    for (const auto& [key, entry] : dist) {
      if (entry.second != expect_mass) lr.uniform_states = false;
      for (int eps : {1, -1}) {
        PsiResult pr = psi(entry.first, eps);
        pointed[canonical_code(pr.map).to_string()] += entry.second / 2;
        rooted[canonical_code(forget_pointing(pr.map)).to_string()] += entry.second / 2;
      }
    }
    lr.uniform_pointed = pointed.size() == 2 * dist.size();  // injectivity of psi
    BigRat expect_pointed = expect_mass / 2;
    for (const auto& [code, mass] : pointed)
      if (mass != expect_pointed) lr.uniform_pointed = false;
    lr.distinct_maps = static_cast<long>(rooted.size());
    lr.uniform_rooted = !rooted.empty();
    BigRat rooted_mass = rooted.begin()->second;
    for (const auto& [code, mass] : rooted)
      if (mass != rooted_mass) lr.uniform_rooted = false;
    rep.levels.push_back(lr);
    if (!lr.uniform_states) rep.fail("level " + std::to_string(level) + ": mobiles not uniform");
    if (!lr.uniform_pointed) rep.fail("level " + std::to_string(level) + ": pointed maps not uniform");
    if (!lr.uniform_rooted) rep.fail("level " + std::to_string(level) + ": rooted maps not uniform");
  }
  return rep;
}

// Same for the triangulation chain: the pair distribution must stay uniform
// and the closing construction must hit every triangulation 2n times.
inline UniformityReport verify_uniformity_triangulation(int n_max, CouplingContext& ctx) {
  UniformityReport rep;
  std::map<std::string, std::pair<FourAryPair, BigRat>> dist;
  FourAryPair start{CompleteDAryTree::degenerate(4), CompleteDAryTree::degenerate(4)};
  dist[start.key()] = {start, BigRat(1)};

  for (int m = 1; m <= n_max; ++m) {
    if (m > 1) {
      const HTable& h = ctx.htable(m - 2);
      BigRat d_m = BigRat(count_simple_triangulations(m) * m,
                          count_simple_triangulations(m - 1) * (m - 1));
      std::map<std::string, std::pair<FourAryPair, BigRat>> next;
      for (const auto& [key, entry] : dist) {
        const auto& [pair, q] = entry;
        long a = pair.l.size(), b = pair.r.size();
        BigRat q_left = h.at(a + 1, b) * ct4_ratio(a) / d_m;
        const TransportPlan& pl = ctx.plan(4, static_cast<int>(a));
        int i = pl.source_index(pair.l.code());
        for (const auto& [j, f] : pl.mass[i]) {
          FourAryPair g{dary_from_code(4, pl.targets[j]), pair.r};
          auto& slot = next[g.key()];
          slot.first = g;
          slot.second += q * q_left * BigRat(f, pl.count_n1);
        }
        const TransportPlan& pr = ctx.plan(4, static_cast<int>(b));
        int ir = pr.source_index(pair.r.code());
        for (const auto& [j, f] : pr.mass[ir]) {
          FourAryPair g{pair.l, dary_from_code(4, pr.targets[j])};
          auto& slot = next[g.key()];
          slot.first = g;
          slot.second += q * (1 - q_left) * BigRat(f, pr.count_n1);
        }
      }
      dist = std::move(next);
    }

    LevelReport lr;
    lr.n = m;
    lr.states = static_cast<long>(dist.size());
    BigInt expect_states = BigInt(m) * count_simple_triangulations(m);
    BigRat expect_mass = BigRat(1, expect_states);
    lr.uniform_states = BigInt(lr.states) == expect_states;
    std::map<std::string, BigRat> maps;
    std::map<std::string, long> mult;
    for (const auto& [key, entry] : dist) {
      if (entry.second != expect_mass) lr.uniform_states = false;
      BlossomingTree bt = join_pair(entry.first);
      for (int eps : {1, -1}) {
        std::string code = canonical_code(xi(bt, eps)).to_string();
        maps[code] += entry.second / 2;
        mult[code] += 1;
      }
    }
    lr.distinct_maps = static_cast<long>(maps.size());
    bool mult_ok = BigInt(lr.distinct_maps) == count_simple_triangulations(m);
    for (const auto& [code, k] : mult)
      if (k != 2 * m) mult_ok = false;
    BigRat expect_map_mass = BigRat(1, count_simple_triangulations(m));
    lr.uniform_rooted = true;
    for (const auto& [code, mass] : maps)
      if (mass != expect_map_mass) lr.uniform_rooted = false;
    lr.uniform_pointed = mult_ok;  // here: the 2n-to-1 multiplicity property
    rep.levels.push_back(lr);
    if (!lr.uniform_states) rep.fail("level " + std::to_string(m) + ": pairs not uniform");
    if (!mult_ok) rep.fail("level " + std::to_string(m) + ": closing map is not 2n-to-one");
    if (!lr.uniform_rooted) rep.fail("level " + std::to_string(m) + ": triangulations not uniform");
  }
  return rep;
}

inline UniformityReport verify_uniformity_exact(ChainKind kind, int p_or_zero, int n_max,
                                                CouplingContext& ctx) {
  return kind == ChainKind::angulation ? verify_uniformity_angulation(p_or_zero, n_max, ctx)
                                       : verify_uniformity_triangulation(n_max, ctx);
}

// ---- sampling sanity ---------------------------------------------------------

struct ChiSquareResult {
  double statistic = 0.0;
  double p_value = 1.0;
  long dof = 0;
};

// Pearson statistic of observed codes against the uniform law on the support.
// A sample outside the support is a correctness failure, not statistics.
inline ChiSquareResult chi_square_check(const std::vector<std::string>& samples,
                                        const std::vector<std::string>& support) {
  require(!support.empty() && !samples.empty(), errc::invalid_input, "empty chi-square input");
  std::map<std::string, long> counts;
  for (const auto& s : support) counts[s] = 0;
  for (const auto& s : samples) {
    auto it = counts.find(s);
    require(it != counts.end(), errc::invalid_input,
            "sample outside the enumerated support: " + s);
    ++it->second;
  }
  const double expected = static_cast<double>(samples.size()) / support.size();
  ChiSquareResult r;
  for (const auto& [code, obs] : counts) {
    double dlt = obs - expected;
    r.statistic += dlt * dlt / expected;
  }
  r.dof = static_cast<long>(support.size()) - 1;
  r.p_value = r.dof == 0 ? 1.0 : boost::math::gamma_q(r.dof / 2.0, r.statistic / 2.0);
  return r;
}

}  // namespace mapforge

#endif
