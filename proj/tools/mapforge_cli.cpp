#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "mapforge/coupling.hpp"
#include "mapforge/json_io.hpp"
#include "mapforge/verify.hpp"

namespace mf = mapforge;

namespace {

struct CommonOpts {
  std::string cls;
  int d = 2;
  int p = 2;
  int n = 1;
  std::uint64_t seed = 0;
  long count = 1;
  std::string format = "json";
  long guard = mf::kDefaultEnumerationGuard;
};

mf::CouplingContext make_context(long guard) {
  mf::CouplingContext ctx;
  if (const char* dir = std::getenv("MAPFORGE_CACHE")) ctx.cache_dir = dir;
  ctx.guard = guard;
  return ctx;
}

std::string render_map(const mf::RootedMap& m, const std::string& format) {
  if (format == "json") return mf::map_to_json(m).dump();
  if (format == "dot") return mf::map_to_dot(m);
  if (format == "code") return mf::canonical_code(m).to_string();
  throw mf::error(mf::errc::invalid_input, "unknown format: " + format);
}

int cmd_count(const CommonOpts& o) {
  mf::BigInt result;
  if (o.cls == "dary") {
    result = mf::count_complete_trees(o.d, o.n);
  } else if (o.cls == "mobile") {
    result = mf::count_complete_trees(o.p, o.n);
  } else if (o.cls == "blossoming") {
    result = o.n * mf::count_simple_triangulations(o.n);
  } else if (o.cls == "triangulation") {
    result = mf::count_simple_triangulations(o.n);
  } else if (o.cls == "angulation") {
    mf::require(o.n >= 1, mf::errc::invalid_input, "angulation count needs n >= 1");
    mf::BigInt labelled = mf::count_complete_trees(o.p, o.n);
    for (int i = 0; i < o.n; ++i) labelled *= mf::binomial(2 * o.p - 1, o.p);
    result = 2 * labelled / ((o.p - 1) * static_cast<long>(o.n) + 2);
  } else {
    throw mf::error(mf::errc::invalid_input, "unknown class: " + o.cls);
  }
  std::cout << result.str() << "\n";
  return 0;
}

int cmd_enumerate(const CommonOpts& o) {
  if (o.cls == "dary") {
    for (const auto& t : mf::enumerate_complete_trees(o.d, o.n, o.guard)) {
      if (o.format == "json")
        std::cout << mf::tree_to_json(t).dump() << "\n";
      else
        std::cout << t.code() << "\n";
    }
  } else if (o.cls == "mobile") {
    for (const auto& code : mf::enumerate_mobile_codes(o.p, o.n, o.guard))
      std::cout << code << "\n";
  } else if (o.cls == "blossoming") {
    for (const auto& bt : mf::enumerate_blossoming(o.n, o.guard)) {
      if (o.format == "json")
        std::cout << mf::blossoming_to_json(bt).dump() << "\n";
      else
        std::cout << bt.code() << "\n";
    }
  } else if (o.cls == "labels") {
    for (const auto& s : mf::enumerate_labels(o.p)) {
      std::string w;
      for (int x : s) w.push_back(x == 1 ? '+' : '-');
      std::cout << w << "\n";
    }
  } else {
    throw mf::error(mf::errc::invalid_input, "unknown class: " + o.cls);
  }
  return 0;
}

int cmd_sample(const CommonOpts& o) {
  mf::CouplingContext ctx = make_context(o.guard);
  // Precompute every plan and table the workers will read.
  if (o.cls == "angulation")
    for (int m = 0; m < o.n; ++m) ctx.plan(o.p, m);
  if (o.cls == "triangulation") {
    for (int m = 0; m + 2 <= o.n; ++m) ctx.htable(m);
    for (int m = 0; m + 1 < o.n; ++m) ctx.plan(4, m);
  }
  std::vector<std::string> out(o.count);
  auto work = [&](long lo, long hi) {
    for (long i = lo; i < hi; ++i) {
      std::uint64_t s = mf::Rng::derive(o.seed, static_cast<std::uint64_t>(i));
      mf::RootedMap m;
      if (o.cls == "triangulation") {
        m = mf::chain_sample_triangulation(o.n, s, ctx);
      } else if (o.cls == "angulation") {
        m = mf::chain_sample_angulation(o.p, o.n, s, ctx);
      } else if (o.cls == "dary") {
        mf::Rng rng(s);
        out[i] = mf::uniform_tree_oracle(o.d, o.n, rng).code();
        continue;
      } else {
        throw mf::error(mf::errc::invalid_input, "unknown class: " + o.cls);
      }
      out[i] = render_map(m, o.format);
    }
  };
  unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(), 8);
  if (o.count >= 64 && workers > 1 && o.cls != "dary") {
    std::vector<std::thread> pool;
    long chunk = (o.count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      long lo = w * chunk, hi = std::min<long>(o.count, lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& t : pool) t.join();
  } else {
    work(0, o.count);
  }
  for (const auto& s : out) std::cout << s << "\n";
  return 0;
}

int cmd_grow_chain(const CommonOpts& o) {
  mf::CouplingContext ctx = make_context(o.guard);
  auto trace = [&](const mf::TraceStep& ev) {
    mf::json j{{"size", ev.size}, {"code", ev.map_code}};
    if (!ev.side.empty()) j["side"] = ev.side;
    if (!ev.label.empty()) {
      j["label"] = ev.label;
      j["corner"] = {ev.corner.v, ev.corner.slot};
    }
    std::cout << j.dump() << "\n";
  };
  mf::RootedMap m;
  if (o.cls == "triangulation")
    m = mf::chain_sample_triangulation(o.n, o.seed, ctx, trace);
  else if (o.cls == "angulation")
    m = mf::chain_sample_angulation(o.p, o.n, o.seed, ctx, trace);
  else
    throw mf::error(mf::errc::invalid_input, "unknown class: " + o.cls);
  std::cout << render_map(m, o.format) << "\n";
  return 0;
}

int cmd_verify(const std::vector<std::string>& suites, int max_n, bool as_json, long guard) {
  mf::CouplingContext ctx = make_context(guard);
  bool all_pass = true;
  mf::json out = mf::json::array();
  for (const auto& name : suites) {
    mf::SuiteReport rep = mf::run_suite(name, max_n, ctx);
    all_pass = all_pass && rep.pass();
    if (as_json) {
      out.push_back(rep.to_json());
    } else {
      std::cout << "suite " << rep.suite << ": " << (rep.pass() ? "PASS" : "FAIL") << "\n";
      for (const auto& c : rep.checks) {
        std::cout << "  [" << (c.pass ? "ok" : "FAIL") << "] " << c.label;
        if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
        std::cout << "\n";
      }
    }
  }
  if (as_json) std::cout << out.dump(2) << "\n";
  return all_pass ? 0 : 1;
}

int cmd_h_table(int n) {
  mf::HTable t = mf::solve_h_linear(n);
  for (long x = 0; x <= t.level + 1; ++x)
    std::cout << "(" << x << "," << t.level + 1 - x << ") " << mf::rat_to_string(t.value[x])
              << "\n";
  return 0;
}

int cmd_export(const std::string& input, const std::string& format) {
  mf::json j;
  if (input.empty() || input == "-") {
    std::cin >> j;
  } else {
    std::ifstream in(input);
    mf::require(static_cast<bool>(in), mf::errc::invalid_input, "cannot open " + input);
    in >> j;
  }
  mf::RootedMap m = mf::map_from_json(j);
  std::cout << render_map(m, format);
  if (format != "dot") std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mapforge: uniform random 2p-angulations and simple triangulations"};
  app.require_subcommand(1);

  CommonOpts o;

  auto* count = app.add_subcommand("count", "count objects of a class");
  count->add_option("--class", o.cls, "dary|mobile|blossoming|triangulation|angulation")
      ->required();
  count->add_option("--d", o.d, "tree arity");
  count->add_option("--p", o.p, "half face degree");
  count->add_option("--n", o.n, "size")->required();

  auto* enumerate = app.add_subcommand("enumerate", "list all objects of a class");
  enumerate->add_option("--class", o.cls, "dary|mobile|blossoming|labels")->required();
  enumerate->add_option("--d", o.d, "tree arity");
  enumerate->add_option("--p", o.p, "half face degree");
  enumerate->add_option("--n", o.n, "size");
  enumerate->add_option("--format", o.format, "code|json");
  enumerate->add_option("--guard", o.guard, "enumeration guard");

  auto* sample = app.add_subcommand("sample", "draw uniform samples");
  sample->add_option("--class", o.cls, "dary|triangulation|angulation")->required();
  sample->add_option("--d", o.d, "tree arity");
  sample->add_option("--p", o.p, "half face degree");
  sample->add_option("--n", o.n, "size")->required();
  sample->add_option("--seed", o.seed, "random seed")->required();
  sample->add_option("--count", o.count, "number of samples");
  sample->add_option("--format", o.format, "json|dot|code");
  sample->add_option("--guard", o.guard, "enumeration guard");

  auto* chain = app.add_subcommand("grow-chain", "sample while tracing every growth step");
  chain->add_option("--class", o.cls, "triangulation|angulation")->required();
  chain->add_option("--p", o.p, "half face degree");
  chain->add_option("--n", o.n, "size")->required();
  chain->add_option("--seed", o.seed, "random seed")->required();
  chain->add_option("--format", o.format, "json|dot|code");
  chain->add_option("--guard", o.guard, "enumeration guard");

  std::vector<std::string> suites;
  int max_n = 4;
  bool as_json = false;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suites,
                     "counts|bijections|growth-lemmas|flow|uniformity (repeatable)")
      ->required();
  verify->add_option("--max-n", max_n, "size ceiling");
  verify->add_flag("--json", as_json, "machine-readable report");
  verify->add_option("--guard", o.guard, "enumeration guard");

  int h_n = 1;
  auto* htab = app.add_subcommand("h-table", "print the level-n table of h");
  htab->add_option("--n", h_n, "table level")->required();

  std::string export_in, export_fmt = "dot";
  auto* exp = app.add_subcommand("export", "re-serialize a map (JSON in)");
  exp->add_option("--input", export_in, "input file, - for stdin");
  exp->add_option("--format", export_fmt, "dot|json|code");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*count) return cmd_count(o);
    if (*enumerate) return cmd_enumerate(o);
    if (*sample) return cmd_sample(o);
    if (*chain) return cmd_grow_chain(o);
    if (*verify) return cmd_verify(suites, max_n, as_json, o.guard);
    if (*htab) return cmd_h_table(h_n);
    if (*exp) return cmd_export(export_in, export_fmt);
  } catch (const mf::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code == mf::errc::resource_limit ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
