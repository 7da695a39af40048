#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ccmc/errors.hpp"
#include "ccmc/generators.hpp"
#include "ccmc/io.hpp"
#include "ccmc/oracle.hpp"
#include "ccmc/trace_io.hpp"
#include "cli/commands.hpp"

namespace {

using namespace ccmc;
using namespace ccmc::cli;

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kInvalidParameters, "cannot read " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kInvalidParameters, "cannot write " + path);
  file << content;
}

struct TopologyArgs {
  std::string topology;
  std::string generator;
  std::uint64_t seed = 1;

  void attach(CLI::App* app) {
    app->add_option("-t,--topology", topology, "Topology file (JSON or edge list)");
    app->add_option("-g,--gen", generator, "Generator spec kind:n[:param]");
    app->add_option("--seed", seed, "Generator seed");
  }
  TreeNetwork load() const { return load_topology(topology, generator, seed); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CCMC tree multi-coloring simulator and verifier"};
  app.require_subcommand(1);
  app.fallthrough();
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "Repeat for more detail (-vv prints the transcript)");

  // run
  auto* run_cmd = app.add_subcommand("run", "Simulate the protocol and verify the result");
  RunConfig config;
  std::string config_in, config_save, partition = "spread", clash = "abort", end_rule = "slot-span";
  run_cmd->add_option("--config", config_in, "Replay a saved run configuration");
  run_cmd->add_option("--save-config", config_save, "Write the effective configuration");
  run_cmd->add_option("-t,--topology", config.topology, "Topology file (JSON or edge list)");
  run_cmd->add_option("-g,--gen", config.generator, "Generator spec kind:n[:param]");
  run_cmd->add_option("--seed", config.seed, "Generator seed");
  run_cmd->add_option("-m,--m", config.m, "Maximum neighbors sharing a color")->check(CLI::PositiveNumber);
  run_cmd->add_option("--root", config.root, "Root label or 'auto'");
  run_cmd->add_flag("--extension", config.extension, "Disseminate K with END messages");
  run_cmd->add_option("--partition", partition, "spread | minimal");
  run_cmd->add_option("--clash-policy", clash, "abort | drop");
  run_cmd->add_option("--end-rule", end_rule, "slot-span | ak");
  run_cmd->add_option("--max-rounds", config.max_rounds, "Round limit (0: four times the budget)");
  run_cmd->add_option("--trace-out", config.trace_out, "Trace JSON-lines output");
  run_cmd->add_option("--coloring-out", config.coloring_out, "Coloring JSON output");
  run_cmd->add_option("--report-out", config.report_out, "Verification report output");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Run and verify a corpus of trees");
  SweepConfig sweep;
  std::string sweep_partition = "spread";
  sweep_cmd->add_option("--count", sweep.count, "Random trees");
  sweep_cmd->add_option("--n-min", sweep.n_min, "Smallest tree size");
  sweep_cmd->add_option("--n-max", sweep.n_max, "Largest tree size");
  sweep_cmd->add_option("--m-min", sweep.m_min, "Smallest m");
  sweep_cmd->add_option("--m-max", sweep.m_max, "Largest m");
  sweep_cmd->add_option("--seed", sweep.seed, "Corpus seed");
  sweep_cmd->add_flag("--extension", sweep.extension, "Disseminate K with END messages");
  sweep_cmd->add_option("--partition", sweep_partition, "spread | minimal");
  sweep_cmd->add_option("--exhaustive", sweep.exhaustive_n,
                        "Check every free tree up to this size against brute force");
  sweep_cmd->add_option("--exhaustive-m", sweep.exhaustive_m, "m values for the exhaustive check");
  sweep_cmd->add_option("-j,--jobs", sweep.jobs, "Worker threads");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Centralized reference algorithms");
  oracle_cmd->require_subcommand(1);
  TopologyArgs oracle_topo;
  std::uint32_t oracle_m = 1;
  std::string oracle_root = "auto", oracle_out;
  bool multi = false, augment = false;
  std::uint32_t reduce_k = 0;
  std::string d2_in;
  auto* df_cmd = oracle_cmd->add_subcommand("df-color", "Sequential depth-first coloring");
  auto* feasible_cmd = oracle_cmd->add_subcommand("feasible", "Evaluate the multi-coloring predicate");
  auto* mink_cmd = oracle_cmd->add_subcommand("min-k", "Brute-force minimal number of colors");
  auto* d2_cmd = oracle_cmd->add_subcommand("reduce-d2", "Map a distance-2 coloring with K*m colors mod K");
  for (auto* sub : {df_cmd, feasible_cmd, mink_cmd, d2_cmd}) {
    oracle_topo.attach(sub);
    sub->add_option("-m,--m", oracle_m)->check(CLI::PositiveNumber);
    sub->add_option("-o,--out", oracle_out, "Output file (default stdout)");
  }
  df_cmd->add_option("--root", oracle_root, "Root label or 'auto'");
  df_cmd->add_flag("--augment", augment, "Root at the predicate witness and add color K-1 to it");
  mink_cmd->add_flag("--multi", multi, "Require one node with two colors");
  d2_cmd->add_option("-k,--k", reduce_k, "K (default: ceil(delta/m)+1)");
  d2_cmd->add_option("--coloring", d2_in, "Distance-2 coloring (default: greedy)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Check a coloring and optionally a trace");
  TopologyArgs verify_topo;
  verify_topo.attach(verify_cmd);
  std::string verify_coloring_in, verify_trace_in, verify_out;
  std::uint32_t verify_m = 0, verify_k = 0;
  verify_cmd->add_option("--coloring", verify_coloring_in, "Coloring JSON")->required();
  verify_cmd->add_option("--trace", verify_trace_in, "Trace JSON-lines");
  verify_cmd->add_option("-m,--m", verify_m, "Override m from the coloring document");
  verify_cmd->add_option("-k,--k", verify_k, "Override K from the coloring document");
  verify_cmd->add_option("-o,--out", verify_out, "Report output (default stdout)");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Generate a topology");
  std::string gen_spec, gen_out;
  std::uint64_t gen_seed = 1;
  gen_cmd->add_option("spec", gen_spec, "kind:n[:param]; kinds: random star path caterpillar balanced")->required();
  gen_cmd->add_option("--seed", gen_seed, "Generator seed");
  gen_cmd->add_option("-o,--out", gen_out, "Output file (default stdout)");

  // export-dot
  auto* dot_cmd = app.add_subcommand("export-dot", "Graphviz rendering of a topology");
  TopologyArgs dot_topo;
  dot_topo.attach(dot_cmd);
  std::string dot_coloring, dot_out;
  dot_cmd->add_option("--coloring", dot_coloring, "Coloring JSON to annotate");
  dot_cmd->add_option("-o,--out", dot_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) {
      if (!config_in.empty()) {
        config = RunConfig::from_json(read_file(config_in));
      } else {
        config.partition = parse_partition_policy(partition);
        config.clash = parse_clash_policy(clash);
        config.end_rule = parse_end_slot_rule(end_rule);
      }
      config.validate();
      if (!config_save.empty()) emit(config_save, config.to_json());
      return cmd_run(config, verbosity, std::cout);
    }
    if (*sweep_cmd) {
      sweep.partition = parse_partition_policy(sweep_partition);
      return cmd_sweep(sweep, std::cout);
    }
    if (*oracle_cmd) {
      const auto tree = oracle_topo.load();
      const std::uint32_t k = optimal_k(tree, oracle_m);
      if (*df_cmd) {
        if (augment) {
          const auto verdict = multicolor_feasible(tree, oracle_m);
          if (!verdict.feasible) {
            throw Error(ErrorCode::kPredicateNotSatisfied, "no node can hold a second color");
          }
          auto colors = df_mcoloring(tree, *verdict.witness, oracle_m);
          colors = augment_witness(tree, std::move(colors), *verdict.witness, oracle_m);
          emit(oracle_out, coloring_to_json(tree, {oracle_m, k, colors, std::nullopt}));
        } else {
          const Vertex root = resolve_root(tree, oracle_root);
          emit(oracle_out, coloring_to_json(tree, {oracle_m, k, df_mcoloring(tree, root, oracle_m),
                                                   std::nullopt}));
        }
      } else if (*feasible_cmd) {
        emit(oracle_out, verdict_to_json(tree, multicolor_feasible(tree, oracle_m)));
      } else if (*mink_cmd) {
        const auto found = brute_force_min_k(tree, oracle_m, multi);
        std::ostringstream text;
        text << "{\"min_k\": " << found << ", \"lower_bound\": " << lower_bound_k(tree, oracle_m)
             << ", \"multi\": " << (multi ? "true" : "false") << "}\n";
        emit(oracle_out, text.str());
      } else if (*d2_cmd) {
        const std::uint32_t kk = reduce_k != 0 ? reduce_k : k;
        const auto input = d2_in.empty() ? greedy_distance2_coloring(tree)
                                         : int_coloring_from_json(tree, read_file(d2_in));
        const auto reduced = distance2_to_ccmc(tree, input, kk, oracle_m);
        const bool bound = satisfies_closed_neighborhood_bound(tree, reduced, oracle_m);
        emit(oracle_out, int_coloring_to_json(tree, reduced, kk, oracle_m));
        if (!bound) {
          std::cerr << "reduced coloring violates the closed-neighborhood bound\n";
          return 1;
        }
      }
      return 0;
    }
    if (*verify_cmd) {
      const auto tree = verify_topo.load();
      const auto doc = coloring_from_json(tree, read_file(verify_coloring_in));
      const std::uint32_t m = verify_m != 0 ? verify_m : doc.m;
      const std::uint32_t k = verify_k != 0 ? verify_k : (doc.k != 0 ? doc.k : optimal_k(tree, m));
      const auto report = verify_coloring(tree, doc.colors, m, k);
      std::string text = report_to_json(report);
      bool ok = report.ok();
      if (!verify_trace_in.empty()) {
        std::ifstream trace_file(verify_trace_in, std::ios::binary);
        if (!trace_file) throw Error(ErrorCode::kInvalidParameters, "cannot read " + verify_trace_in);
        const auto trace_report = verify_trace(read_trace(trace_file, tree), tree);
        text += report_to_json(trace_report);
        ok = ok && trace_report.ok();
      }
      emit(verify_out, text);
      return ok ? 0 : 1;
    }
    if (*gen_cmd) {
      emit(gen_out, to_json(generate_tree(GeneratorSpec::parse(gen_spec), gen_seed)) + "\n");
      return 0;
    }
    if (*dot_cmd) {
      const auto tree = dot_topo.load();
      if (dot_coloring.empty()) {
        emit(dot_out, to_dot(tree));
      } else {
        const auto doc = coloring_from_json(tree, read_file(dot_coloring));
        emit(dot_out, to_dot(tree, &doc.colors));
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_status(e.code());
  }
  return 2;
}
