// Harness around the prefix-sum structures: seeded verification suites,
// model-cost / wall-clock benchmarks, and script-driven trace dumps.
//
// Exit codes: 0 all pass, 1 verification mismatch, 2 usage/config error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "psum/baseline.hpp"
#include "psum/binset.hpp"
#include "psum/nmtree.hpp"

using namespace psum;
using nlohmann::json;

namespace {

struct RunConfig {
  std::string structure = "nmtree";  // nmtree | fenwick | binset | oracle
  uint64_t N = 64;
  uint64_t M = 8;
  int iota = -1;  // -1: table-free default
  unsigned table_cap = 24;
  uint64_t ops = 10000;
  uint64_t seed = 1;
  double mix = 0.5;  // fraction of updates in the workload
  std::string format = "csv";
  std::string script;
};

unsigned effective_iota(const RunConfig& cfg) {
  return cfg.iota < 0 ? NmTree::max_iota(cfg.N) : static_cast<unsigned>(cfg.iota);
}

struct SuiteResult {
  std::string name;
  bool pass = true;
  std::string detail;  // first counterexample, "seed=<s> op=<i>"
};

class Workload {
 public:
  Workload(const RunConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}
  bool next_is_update() { return double(rng_() % 1000) < cfg_.mix * 1000; }
  uint64_t index() { return rng_() % cfg_.N; }
  uint64_t delta() { return rng_() % cfg_.M; }
  uint64_t raw() { return rng_(); }

 private:
  const RunConfig& cfg_;
  std::mt19937_64 rng_;
};

std::string counterexample(uint64_t seed, uint64_t op) {
  return "seed=" + std::to_string(seed) + " op=" + std::to_string(op);
}

std::vector<SuiteResult> verify_nmtree(const RunConfig& cfg) {
  std::vector<SuiteResult> out;
  NmTree tree(cfg.N, cfg.M, effective_iota(cfg), cfg.table_cap);
  NmTree mirror(cfg.N, cfg.M, NmTree::max_iota(cfg.N));
  Oracle oracle(cfg.N, cfg.M);

  SuiteResult equiv{"oracle_equivalence"};
  SuiteResult variants{"variant_agreement"};
  SuiteResult cost{"model_cost"};
  SuiteResult semantic{"semantic_invariant"};
  const bool audit_nodes = cfg.N <= 64;

  Workload w(cfg);
  for (uint64_t op = 0; op < cfg.ops; ++op) {
    const uint64_t j = w.index();
    const AccessCounters& c = tree.memory().counters();
    if (w.next_is_update()) {
      const uint64_t d = w.delta();
      const uint64_t r0 = c.reg_reads, w0 = c.reg_writes;
      tree.update(j, d);
      mirror.update_logn(j, d);
      oracle.update(j, d);
      const bool last = j == tree.padded_size() - 1;
      const uint64_t want_r = last ? 0 : 1, want_w = last ? 0 : 1;
      if (cost.pass &&
          (c.reg_reads != r0 + want_r || c.reg_writes != w0 + want_w)) {
        cost.pass = false;
        cost.detail = counterexample(cfg.seed, op);
      }
    } else {
      const uint64_t r0 = c.reg_reads, w0 = c.reg_writes;
      const uint64_t got = tree.retrieve(j);
      if (cost.pass && (c.reg_reads != r0 + 1 || c.reg_writes != w0)) {
        cost.pass = false;
        cost.detail = counterexample(cfg.seed, op);
      }
      if (equiv.pass && got != oracle.retrieve(j)) {
        equiv.pass = false;
        equiv.detail = counterexample(cfg.seed, op);
      }
      if (variants.pass &&
          (got != tree.retrieve_logn(j) || got != mirror.retrieve(j))) {
        variants.pass = false;
        variants.detail = counterexample(cfg.seed, op);
      }
    }
    if (audit_nodes && semantic.pass) {
      bool ok = true;
      const uint64_t padded = tree.padded_size();
      for (uint64_t i = 1; i < padded && ok; ++i) {
        const unsigned depth = std::bit_width(i) - 1;
        const uint64_t span = padded >> depth;
        const uint64_t first = i * span - padded;
        uint64_t want = 0;
        for (uint64_t leaf = first; leaf < first + span / 2; ++leaf)
          if (leaf < cfg.N) want = (want + oracle.value(leaf)) % cfg.M;
        ok = tree.memory().peek_node(i) == want;
      }
      if (!ok) {
        semantic.pass = false;
        semantic.detail = counterexample(cfg.seed, op);
      }
    }
  }
  out.push_back(equiv);
  out.push_back(variants);
  out.push_back(cost);
  if (audit_nodes) out.push_back(semantic);
  return out;
}

std::vector<SuiteResult> verify_fenwick(const RunConfig& cfg) {
  FenwickTree tree(cfg.N, cfg.M);
  Oracle oracle(cfg.N, cfg.M);
  SuiteResult equiv{"oracle_equivalence"};
  Workload w(cfg);
  for (uint64_t op = 0; op < cfg.ops; ++op) {
    const uint64_t j = w.index();
    if (w.next_is_update()) {
      const uint64_t d = w.delta();
      tree.update(j, d);
      oracle.update(j, d);
    } else if (equiv.pass && tree.retrieve(j) != oracle.retrieve(j)) {
      equiv.pass = false;
      equiv.detail = counterexample(cfg.seed, op);
    }
  }
  return {equiv};
}

std::vector<SuiteResult> verify_binset(const RunConfig& cfg) {
  const uint64_t M = cfg.M;
  Semigroup<uint64_t> add{
      [M](const uint64_t& a, const uint64_t& b) { return (a + b) % M; },
      uint64_t{0},
      [M](const uint64_t& a) { return (M - a) % M; }};
  BinSeT<uint64_t> tree(add);
  std::map<uint64_t, uint64_t> ref;

  SuiteResult equiv{"oracle_equivalence"};
  SuiteResult audit{"balance_and_aggregates"};
  Workload w(cfg);
  for (uint64_t op = 0; op < cfg.ops; ++op) {
    const uint64_t idx = w.index();
    switch (w.raw() % 5) {
      case 0:
        if (!ref.count(idx)) {
          const uint64_t v = w.delta();
          tree.insert(idx, v);
          ref[idx] = v;
        }
        break;
      case 1:
        if (ref.count(idx)) {
          tree.erase(idx);
          ref.erase(idx);
        }
        break;
      case 2:
        if (ref.count(idx)) {
          const uint64_t d = w.delta();
          tree.update(idx, d);
          ref[idx] = (ref[idx] + d) % M;
        }
        break;
      default: {
        uint64_t sum = 0;
        for (const auto& [k, v] : ref)
          if (k <= idx) sum = (sum + v) % M;
        if (equiv.pass && tree.retrieve(idx) != std::optional<uint64_t>(sum)) {
          equiv.pass = false;
          equiv.detail = counterexample(cfg.seed, op);
        }
        break;
      }
    }
    if (audit.pass && !tree.audit()) {
      audit.pass = false;
      audit.detail = counterexample(cfg.seed, op);
    }
  }
  return {equiv, audit};
}

std::vector<SuiteResult> verify_oracle(const RunConfig& cfg) {
  Oracle oracle(cfg.N, cfg.M);
  SuiteResult basic{"prefix_definition"};
  Workload w(cfg);
  uint64_t total = 0;
  for (uint64_t op = 0; op < cfg.ops; ++op) {
    const uint64_t j = w.index();
    const uint64_t d = w.delta();
    oracle.update(j, d);
    total = (total + d) % cfg.M;
    if (basic.pass && oracle.retrieve(cfg.N - 1) != total) {
      basic.pass = false;
      basic.detail = counterexample(cfg.seed, op);
    }
  }
  return {basic};
}

int emit_verify_report(const RunConfig& cfg, const std::vector<SuiteResult>& suites) {
  bool all_pass = true;
  for (const SuiteResult& s : suites) all_pass = all_pass && s.pass;
  if (cfg.format == "json") {
    json doc;
    doc["structure"] = cfg.structure;
    doc["seed"] = cfg.seed;
    doc["suites"] = json::array();
    for (const SuiteResult& s : suites) {
      json e{{"suite", s.name}, {"result", s.pass ? "pass" : "fail"}};
      if (!s.detail.empty()) e["counterexample"] = s.detail;
      doc["suites"].push_back(e);
    }
    doc["result"] = all_pass ? "pass" : "fail";
    std::cout << doc.dump(2) << '\n';
  } else {
    for (const SuiteResult& s : suites) {
      std::cout << "suite," << s.name << ',' << (s.pass ? "pass" : "fail");
      if (!s.detail.empty()) std::cout << ',' << s.detail;
      std::cout << '\n';
    }
    std::cout << "overall," << (all_pass ? "pass" : "fail") << '\n';
  }
  return all_pass ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg) {
  std::vector<SuiteResult> suites;
  try {
    if (cfg.structure == "nmtree")
      suites = verify_nmtree(cfg);
    else if (cfg.structure == "fenwick")
      suites = verify_fenwick(cfg);
    else if (cfg.structure == "binset")
      suites = verify_binset(cfg);
    else if (cfg.structure == "oracle")
      suites = verify_oracle(cfg);
    else {
      std::cerr << "verify: unknown structure '" << cfg.structure << "'\n";
      return 2;
    }
  } catch (const std::invalid_argument& e) {
    if (cfg.format == "json")
      std::cout << json{{"structure", cfg.structure},
                        {"result", "construction-error"},
                        {"error", e.what()}}
                       .dump(2)
                << '\n';
    else
      std::cout << "construction-error," << e.what() << '\n';
    return 2;
  }
  return emit_verify_report(cfg, suites);
}

struct BenchRow {
  std::string op;
  double model_reads = 0;
  double model_writes = 0;
  double ns_per_op = 0;
};

template <typename Body>
double time_ns_per_op(uint64_t n, Body body) {
  const auto start = std::chrono::steady_clock::now();
  for (uint64_t i = 0; i < n; ++i) body();
  const auto stop = std::chrono::steady_clock::now();
  return n == 0 ? 0.0
               : double(std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start)
                            .count()) /
                     double(n);
}

int cmd_bench(const RunConfig& cfg) {
  std::vector<BenchRow> rows;
  Workload w(cfg);
  const uint64_t half = cfg.ops / 2;

  if (cfg.structure == "nmtree") {
    NmTree t(cfg.N, cfg.M, effective_iota(cfg), cfg.table_cap);
    const AccessCounters& c = t.memory().counters();
    uint64_t r0 = c.reg_reads, w0 = c.reg_writes;
    // keep updates off the vn1 leaf so the row reflects the register path
    double up_ns = time_ns_per_op(
        half, [&] { t.update(w.raw() % (cfg.N - 1), w.delta()); });
    rows.push_back({"update", double(c.reg_reads - r0) / double(half),
                    double(c.reg_writes - w0) / double(half), up_ns});
    r0 = c.reg_reads;
    w0 = c.reg_writes;
    double rt_ns = time_ns_per_op(half, [&] { (void)t.retrieve(w.index()); });
    rows.push_back({"retrieve", double(c.reg_reads - r0) / double(half),
                    double(c.reg_writes - w0) / double(half), rt_ns});
  } else if (cfg.structure == "fenwick") {
    FenwickTree t(cfg.N, cfg.M);
    uint64_t r0 = t.cell_reads(), w0 = t.cell_writes();
    double up_ns = time_ns_per_op(half, [&] { t.update(w.index(), w.delta()); });
    rows.push_back({"update", double(t.cell_reads() - r0) / double(half),
                    double(t.cell_writes() - w0) / double(half), up_ns});
    r0 = t.cell_reads();
    w0 = t.cell_writes();
    double rt_ns = time_ns_per_op(half, [&] { (void)t.retrieve(w.index()); });
    rows.push_back({"retrieve", double(t.cell_reads() - r0) / double(half),
                    double(t.cell_writes() - w0) / double(half), rt_ns});
  } else if (cfg.structure == "oracle") {
    Oracle t(cfg.N, cfg.M);
    uint64_t r0 = t.element_reads(), w0 = t.element_writes();
    double up_ns = time_ns_per_op(half, [&] { t.update(w.index(), w.delta()); });
    rows.push_back({"update", double(t.element_reads() - r0) / double(half),
                    double(t.element_writes() - w0) / double(half), up_ns});
    r0 = t.element_reads();
    w0 = t.element_writes();
    double rt_ns = time_ns_per_op(half, [&] { (void)t.retrieve(w.index()); });
    rows.push_back({"retrieve", double(t.element_reads() - r0) / double(half),
                    double(t.element_writes() - w0) / double(half), rt_ns});
  } else if (cfg.structure == "binset") {
    const uint64_t M = cfg.M;
    Semigroup<uint64_t> add{
        [M](const uint64_t& a, const uint64_t& b) { return (a + b) % M; }, uint64_t{0},
        {}};
    BinSeT<uint64_t> t(add);
    for (uint64_t i = 0; i < cfg.N; ++i) t.insert(i, w.delta());
    uint64_t visits = 0;
    double up_ns = time_ns_per_op(half, [&] {
      t.update(w.index(), w.delta());
      visits += t.last_visits();
    });
    rows.push_back({"update", double(visits) / double(half), 0, up_ns});
    visits = 0;
    double rt_ns = time_ns_per_op(half, [&] {
      (void)t.retrieve(w.index());
      visits += t.last_visits();
    });
    rows.push_back({"retrieve", double(visits) / double(half), 0, rt_ns});
  } else {
    std::cerr << "bench: unknown structure '" << cfg.structure << "'\n";
    return 2;
  }

  if (cfg.format == "json") {
    json doc = json::array();
    for (const BenchRow& r : rows)
      doc.push_back({{"structure", cfg.structure},
                     {"N", cfg.N},
                     {"M", cfg.M},
                     {"iota", effective_iota(cfg)},
                     {"op", r.op},
                     {"model_reads", r.model_reads},
                     {"model_writes", r.model_writes},
                     {"ns_per_op", r.ns_per_op}});
    std::cout << doc.dump(2) << '\n';
  } else {
    std::cout << "structure,N,M,iota,op,model_reads,model_writes,ns_per_op\n";
    for (const BenchRow& r : rows)
      std::cout << cfg.structure << ',' << cfg.N << ',' << cfg.M << ','
                << effective_iota(cfg) << ',' << r.op << ',' << r.model_reads << ','
                << r.model_writes << ',' << r.ns_per_op << '\n';
  }
  return 0;
}

int trace_nmtree(const RunConfig& cfg, std::istream& script) {
  NmTree t(cfg.N, cfg.M, effective_iota(cfg), cfg.table_cap);
  t.dump(std::cout);
  std::string line;
  int lineno = 0;
  while (std::getline(script, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string op;
    is >> op;
    uint64_t a = 0, b = 0;
    bool ok = true;
    if (op == "update" && (is >> a >> b)) {
      t.update(a, b);
    } else if (op == "retrieve" && (is >> a)) {
      std::cout << "retrieve " << a << " = " << t.retrieve(a) << '\n';
    } else if (op == "range" && (is >> a >> b)) {
      std::cout << "range " << a << ' ' << b << " = " << t.partial_sum(a, b) << '\n';
    } else {
      ok = false;
    }
    if (!ok) {
      std::cerr << "trace: parse error at line " << lineno << ": " << line << '\n';
      return 2;
    }
    t.dump(std::cout);
  }
  return 0;
}

int trace_binset(const RunConfig& cfg, std::istream& script) {
  const uint64_t M = cfg.M;
  Semigroup<uint64_t> add{
      [M](const uint64_t& a, const uint64_t& b) { return (a + b) % M; }, uint64_t{0},
      {}};
  BinSeT<uint64_t> t(add);
  std::map<uint64_t, uint64_t> shadow;  // for the dump only
  auto dump = [&] {
    std::cout << "size " << t.size() << '\n';
    for (const auto& [k, v] : shadow) std::cout << "a[" << k << "] = " << v << '\n';
  };
  dump();
  std::string line;
  int lineno = 0;
  while (std::getline(script, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string op;
    is >> op;
    uint64_t a = 0, b = 0;
    bool ok = true;
    try {
      if (op == "insert" && (is >> a >> b)) {
        t.insert(a, b);
        shadow[a] = b;
      } else if (op == "delete" && (is >> a)) {
        t.erase(a);
        shadow.erase(a);
      } else if (op == "update" && (is >> a >> b)) {
        t.update(a, b);
        shadow[a] = (shadow[a] + b) % M;
      } else if (op == "retrieve" && (is >> a)) {
        std::cout << "retrieve " << a << " = " << t.retrieve(a).value_or(0) << '\n';
      } else if (op == "range" && (is >> a >> b)) {
        std::cout << "range " << a << ' ' << b << " = "
                  << t.retrieve_range(a, b).value_or(0) << '\n';
      } else {
        ok = false;
      }
    } catch (const std::invalid_argument& e) {
      std::cerr << "trace: line " << lineno << ": " << e.what() << '\n';
      return 2;
    }
    if (!ok) {
      std::cerr << "trace: parse error at line " << lineno << ": " << line << '\n';
      return 2;
    }
    dump();
  }
  return 0;
}

int cmd_trace(const RunConfig& cfg) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (!cfg.script.empty()) {
    file.open(cfg.script);
    if (!file) {
      std::cerr << "trace: cannot open script '" << cfg.script << "'\n";
      return 2;
    }
    in = &file;
  }
  try {
    if (cfg.structure == "nmtree") return trace_nmtree(cfg, *in);
    if (cfg.structure == "binset") return trace_binset(cfg, *in);
  } catch (const std::exception& e) {
    std::cerr << "trace: " << e.what() << '\n';
    return 2;
  }
  std::cerr << "trace: unknown structure '" << cfg.structure << "'\n";
  return 2;
}

void add_common_options(CLI::App* app, RunConfig& cfg) {
  app->add_option("--structure", cfg.structure,
                  "nmtree | fenwick | binset | oracle");
  app->add_option("--N", cfg.N, "array size");
  app->add_option("--M", cfg.M, "universe size (modulus)");
  app->add_option("--iota", cfg.iota, "fold rounds before table lookup");
  app->add_option("--table-cap", cfg.table_cap, "max SUM table index bits");
  app->add_option("--ops", cfg.ops, "operation count");
  app->add_option("--seed", cfg.seed, "workload RNG seed");
  app->add_option("--mix", cfg.mix, "update fraction of the workload");
  app->add_option("--format", cfg.format, "csv | json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prefix-sum structures: verification, benchmarks, traces"};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* verify = app.add_subcommand("verify", "run oracle/invariant suites");
  add_common_options(verify, cfg);
  CLI::App* bench = app.add_subcommand("bench", "model cost and wall-clock per op");
  add_common_options(bench, cfg);
  CLI::App* trace = app.add_subcommand("trace", "replay an op script with dumps");
  add_common_options(trace, cfg);
  trace->add_option("--script", cfg.script, "script file (default: stdin)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) return cmd_verify(cfg);
    if (bench->parsed()) return cmd_bench(cfg);
    if (trace->parsed()) return cmd_trace(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
