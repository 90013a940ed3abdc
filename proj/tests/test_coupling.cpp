#include <cstdio>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "mapforge/coupling.hpp"

using namespace mapforge;

TEST_CASE("simple triangulation counts") {
  // n = 6 is forced by the worked capacity 17/42 = 969/(6 |STr_6|)
  std::vector<long> expect{1, 1, 3, 13, 68, 399, 2530, 16965};
  for (size_t n = 1; n <= expect.size(); ++n)
    CHECK(count_simple_triangulations(static_cast<long>(n)) == expect[n - 1]);
  CHECK_THROWS_AS(count_simple_triangulations(0), error);
  for (long N = 0; N <= 10; ++N) {
    BigInt conv = 0;
    for (long k = 0; k <= N; ++k)
      conv += count_complete_trees(4, k) * count_complete_trees(4, N - k);
    CHECK(conv == (N + 1) * count_simple_triangulations(N + 1));
  }
}

TEST_CASE("the ratio of consecutive 4-ary counts is the stated product") {
  BigRat prev(0);
  for (long i = 0; i <= 20; ++i) {
    BigRat expect = 4;
    for (long j = 1; j <= 3; ++j) expect *= BigRat(4 * i + j, 3 * i + j + 1);
    CHECK(ct4_ratio(i) == expect);
    CHECK(ct4_ratio(i) > prev);
    prev = ct4_ratio(i);
  }
}

TEST_CASE("coupling network capacities and unit flows") {
  FlowNetwork net5 = build_flow_network(5);
  CHECK(net5.src(5, 0) == BigRat(17, 42));
  CHECK(net5.src(4, 1) == BigRat(10, 171));
  CHECK(net5.src(3, 2) == BigRat(44, 1197));
  CHECK(net5.src(2, 3) == BigRat(44, 1197));
  CHECK(net5.src(0, 5) == BigRat(17, 42));
  // the sink edge follows the proof's denominator (n+2)|STr_{n+2}|
  CHECK(net5.snk(3, 3) == BigRat(484, 17710));
  CHECK(net5.snk(3, 3) == BigRat(22, 805));

  for (long n = 1; n <= 12; ++n) {
    FlowNetwork net = build_flow_network(n);
    BigRat s(0), t(0);
    for (const auto& c : net.source_cap) s += c;
    for (const auto& c : net.sink_cap) t += c;
    CHECK(s == 1);
    CHECK(t == 1);
    NetworkFlow f = max_flow(net);
    CHECK(f.value == 1);
    // feasibility and conservation of the returned flow
    for (long j = 0; j <= n; ++j) {
      CHECK(f.up_left[j] >= 0);
      CHECK(f.up_right[j] >= 0);
      CHECK(f.up_left[j] + f.up_right[j] <= net.source_cap[j]);
    }
  }
}

TEST_CASE("cut capacities increase along the staircase") {
  for (long n = 1; n <= 8; ++n) {
    FlowNetwork net = build_flow_network(n);
    CHECK(cut_capacity(net, -1) == 1);  // the sink side S_{n+1}
    BigRat all_src(0);
    for (const auto& c : net.source_cap) all_src += c;
    CHECK(all_src == 1);  // the cut S_n
    for (long i = -1; i < n; ++i) CHECK(cut_capacity(net, i + 1) > cut_capacity(net, i));
  }
}

TEST_CASE("h tables: bullets, pinned values, both routes agree") {
  for (long n = 0; n <= 12; ++n) {
    HTable a = compute_h(n);
    HTable b = solve_h_linear(n);
    CHECK(h_table_violation(a).empty());
    CHECK(h_table_violation(b).empty());
    CHECK(a.value == b.value);
  }
  CHECK(solve_h_linear(0).at(1, 0) == 1);
  CHECK(solve_h_linear(1).at(1, 1) == BigRat(1, 2));
  CHECK(solve_h_linear(2).at(1, 2) == BigRat(5, 18));
  CHECK(solve_h_linear(2).at(2, 1) == BigRat(13, 18));
  CHECK(solve_h_linear(3).at(1, 3) == BigRat(25, 143));
  CHECK(solve_h_linear(3).at(3, 1) == BigRat(118, 143));
}

TEST_CASE("transport plans meet the growth scheme contract exactly") {
  // d=2, n=1: one source, two targets, unit masses
  TransportPlan p21 = tree_transport_plan(2, 1);
  REQUIRE(p21.sources.size() == 1);
  REQUIRE(p21.mass[0].size() == 2);
  CHECK(p21.mass[0][0].second == 1);
  CHECK(p21.mass[0][1].second == 1);

  for (auto [d, n] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}, {4, 3}, {4, 4}}) {
    TransportPlan p = tree_transport_plan(d, n);
    std::map<int, BigInt> col;
    for (size_t i = 0; i < p.mass.size(); ++i) {
      BigInt row = 0;
      CompleteDAryTree src = dary_from_code(d, p.sources[i]);
      std::set<std::string> growths;
      for (int leaf : src.leaves()) growths.insert(grow_tree(src, leaf).code());
      for (const auto& [j, f] : p.mass[i]) {
        CHECK(f > 0);
        CHECK(growths.count(p.targets[j]) == 1);  // support property
        row += f;
        col[j] += f;
      }
      CHECK(row == p.count_n1);  // row sums |CT_{n+1}|, so g-rows sum to the ratio
    }
    for (size_t j = 0; j < p.targets.size(); ++j) CHECK(col[j] == p.count_n);
  }
  // d=2 n=2 in scheme units: rows 5/2, columns 1
  TransportPlan p22 = tree_transport_plan(2, 2);
  CHECK(BigRat(p22.count_n1, p22.count_n) == BigRat(5, 2));

  // d=4 feasibility up to n=5: the scaled flow saturates
  TransportPlan p45 = tree_transport_plan(4, 5);
  BigInt total = 0;
  for (const auto& row : p45.mass)
    for (const auto& [j, f] : row) total += f;
  CHECK(total == p45.count_n * p45.count_n1);
}

TEST_CASE("coupled growth steps are exact and deterministic") {
  CouplingContext ctx;
  const TransportPlan& p = ctx.plan(2, 1);
  CompleteDAryTree t = enumerate_complete_trees(2, 1)[0];
  std::map<std::string, int> seen;
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) seen[grow_step_tree(t, p, rng).code()] += 1;
  REQUIRE(seen.size() == 2);  // both targets occur (each has probability 1/2)
  for (const auto& [code, k] : seen) CHECK(k > 800);

  Rng a(11), b(11);
  for (int i = 0; i < 20; ++i)
    CHECK(grow_step_tree(t, p, a).code() == grow_step_tree(t, p, b).code());
  CompleteDAryTree wrong = enumerate_complete_trees(2, 2)[0];
  CHECK_THROWS_AS(grow_step_tree(wrong, p, a), error);
}

TEST_CASE("chain samplers produce valid uniform objects") {
  CouplingContext ctx;
  // the two smallest triangulations are deterministic
  std::set<std::string> s1, s2;
  for (int i = 0; i < 8; ++i) {
    s1.insert(canonical_code(chain_sample_triangulation(1, 100 + i, ctx)).to_string());
    s2.insert(canonical_code(chain_sample_triangulation(2, 100 + i, ctx)).to_string());
  }
  CHECK(s1.size() == 1);
  CHECK(s2.size() == 1);

  for (int i = 0; i < 25; ++i) {
    RootedMap m = chain_sample_triangulation(4, 31 * i, ctx);
    CHECK(validate(m, MapClass::simple_triangulation).ok);
    CHECK(face_count(m) == 8);
    RootedMap a = chain_sample_angulation(2, 3, 77 * i, ctx);
    CHECK(validate(a, MapClass::angulation, 4).ok);
    CHECK(face_count(a) == 3);
    CHECK(a.pointed == -1);  // pointing is forgotten
  }
}

TEST_CASE("exact uniformity propagation at small sizes") {
  CouplingContext ctx;
  UniformityReport tri = verify_uniformity_triangulation(3, ctx);
  CHECK(tri.pass);
  CHECK(tri.levels.back().distinct_maps == 3);
  UniformityReport ang = verify_uniformity_angulation(2, 2, ctx);
  CHECK(ang.pass);
  CHECK(ang.levels.back().distinct_maps == 9);
}

TEST_CASE("chi-square sanity") {
  std::vector<std::string> support{"a", "b", "c"};
  std::vector<std::string> uniform;
  for (int i = 0; i < 30; ++i) uniform.push_back(support[i % 3]);
  ChiSquareResult r = chi_square_check(uniform, support);
  CHECK(r.statistic == doctest::Approx(0.0));
  CHECK(r.p_value == doctest::Approx(1.0));
  CHECK(r.dof == 2);
  std::vector<std::string> bad{"a", "z"};
  CHECK_THROWS_AS(chi_square_check(bad, support), error);
  std::vector<std::string> skewed(40, "a");
  CHECK(chi_square_check(skewed, support).p_value < 1e-6);
}

TEST_CASE("plan and h-table caches round-trip through disk") {
  std::string dir = (std::filesystem::temp_directory_path() / "mapforge-test-cache").string();
  std::filesystem::remove_all(dir);
  {
    CouplingContext ctx;
    ctx.cache_dir = dir;
    ctx.plan(2, 2);
    ctx.htable(3);
  }
  CHECK(std::filesystem::exists(dir + "/plan-d2-n2.json"));
  CHECK(std::filesystem::exists(dir + "/h-n3.json"));
  {
    CouplingContext ctx;
    ctx.cache_dir = dir;
    const TransportPlan& p = ctx.plan(2, 2);
    TransportPlan fresh = tree_transport_plan(2, 2);
    REQUIRE(p.sources == fresh.sources);
    for (size_t i = 0; i < p.mass.size(); ++i) CHECK(p.mass[i] == fresh.mass[i]);
    CHECK(ctx.htable(3).value == solve_h_linear(3).value);
  }
  std::filesystem::remove_all(dir);
}
