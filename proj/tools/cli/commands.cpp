#include "cli/commands.hpp"

#include <atomic>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "ccmc/errors.hpp"
#include "ccmc/generators.hpp"
#include "ccmc/io.hpp"
#include "ccmc/oracle.hpp"
#include "ccmc/rng.hpp"
#include "ccmc/trace_io.hpp"

namespace ccmc::cli {

using nlohmann::ordered_json;

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kInvalidParameters, "cannot write " + path);
  file << content;
}

// Checks shared by single runs and sweeps, beyond the coloring and trace reports.
std::vector<std::string> extra_checks(const TreeNetwork& tree, const RunResult& result,
                                      std::uint32_t m, bool extension) {
  std::vector<std::string> problems;
  if (result.stats.token_violations != 0) {
    problems.push_back(std::to_string(result.stats.token_violations) +
                       " token-count invariant violations");
  }
  const std::uint32_t k = optimal_k(tree, m);
  const auto single = reduce_to_single(result.colors());
  if (!verify_coloring(tree, single, m, k).ok()) {
    problems.push_back("singleton reduction fails verification");
  }
  if (m == 1) {
    std::vector<Color> flat(single.size());
    for (std::size_t v = 0; v < single.size(); ++v) flat[v] = *single[v].begin();
    if (!is_distance2_coloring(tree, flat)) {
      problems.push_back("singleton reduction is not a distance-2 coloring");
    }
  }
  if (extension) {
    for (Vertex v = 0; v < tree.size(); ++v) {
      if (result.nodes[v].ak != k) {
        problems.push_back("node " + std::to_string(tree.label(v)) + " ended with ak " +
                           std::to_string(result.nodes[v].ak) + ", expected " +
                           std::to_string(k));
      }
    }
  }
  return problems;
}

EngineOptions engine_options(std::uint32_t m, bool extension, PartitionPolicy partition,
                             ClashPolicy clash, EndSlotRule end_rule, bool transcript) {
  EngineOptions options;
  options.protocol.m = m;
  options.protocol.partition = partition;
  options.protocol.k_dissemination = extension;
  options.protocol.end_rule = end_rule;
  options.clash_policy = clash;
  options.record_transcript = transcript;
  return options;
}

}  // namespace

RunOutcome execute_run(const RunConfig& config) {
  config.validate();
  RunOutcome outcome(load_topology(config.topology, config.generator, config.seed));
  const auto& tree = outcome.tree;
  outcome.root = resolve_root(tree, config.root);

  const auto options = engine_options(config.m, config.extension, config.partition, config.clash,
                                      config.end_rule, true);
  const std::uint64_t budget = round_budget(tree, outcome.root, config.m, config.extension);
  outcome.result =
      run(tree, outcome.root, options, config.max_rounds != 0 ? config.max_rounds : 4 * budget);

  const std::uint32_t k = optimal_k(tree, config.m);
  const auto colors = outcome.result.colors();
  outcome.coloring_report = verify_coloring(tree, colors, config.m, k);
  outcome.trace_report = verify_trace(outcome.result.trace, tree);
  outcome.problems = extra_checks(tree, outcome.result, config.m, config.extension);

  ColoringDocument doc{config.m, k, colors, std::nullopt};
  if (config.extension) {
    std::vector<std::uint32_t> ak;
    for (const auto& node : outcome.result.nodes) ak.push_back(node.ak);
    doc.ak = std::move(ak);
  }
  outcome.trace_jsonl = trace_to_jsonl(outcome.result.trace, tree);
  outcome.coloring_json = coloring_to_json(tree, doc);

  ordered_json report;
  report["ok"] = outcome.ok();
  report["coloring"] = ordered_json::parse(report_to_json(outcome.coloring_report));
  report["trace"] = ordered_json::parse(report_to_json(outcome.trace_report));
  report["invariants"] = {{"token_checks", outcome.result.stats.token_checks},
                          {"token_violations", outcome.result.stats.token_violations},
                          {"refill_iterations", outcome.result.stats.refill_iterations}};
  report["problems"] = outcome.problems;
  outcome.report_json = report.dump(2) + "\n";
  return outcome;
}

int cmd_run(const RunConfig& config, int verbosity, std::ostream& out) {
  const auto outcome = execute_run(config);
  if (!config.trace_out.empty()) write_file(config.trace_out, outcome.trace_jsonl);
  if (!config.coloring_out.empty()) write_file(config.coloring_out, outcome.coloring_json);
  if (!config.report_out.empty()) write_file(config.report_out, outcome.report_json);

  if (verbosity >= 2) {
    for (const auto& line : outcome.result.transcript) out << line << "\n";
  }
  if (verbosity >= 1) out << outcome.report_json;
  const auto& t = outcome.trace_report;
  out << (outcome.ok() ? "ok" : "FAILED") << ": n=" << outcome.tree.size()
      << " root=" << outcome.tree.label(outcome.root) << " m=" << config.m
      << " colors=" << outcome.coloring_report.colors_used
      << " K=" << optimal_k(outcome.tree, config.m) << " broadcasts=" << t.broadcast_count
      << " rounds=" << t.rounds_used << "/" << t.round_budget << "\n";
  if (config.coloring_out.empty() && verbosity == 0) out << outcome.coloring_json;
  for (const auto& v : outcome.coloring_report.violations) {
    out << "  " << v.property << ": " << v.detail << "\n";
  }
  for (const auto& p : outcome.trace_report.problems) out << "  " << p << "\n";
  for (const auto& p : outcome.problems) out << "  " << p << "\n";
  return outcome.ok() ? 0 : 1;
}

std::string SweepSummary::to_json() const {
  ordered_json out{{"ok", ok()},
                   {"runs", runs},
                   {"passed", passed},
                   {"exhaustive_trees", exhaustive_trees},
                   {"exhaustive_checks", exhaustive_checks},
                   {"exhaustive_mismatches", exhaustive_mismatches},
                   {"max_colors", max_colors},
                   {"max_rounds", max_rounds},
                   {"max_budget_fraction", max_budget_fraction},
                   {"failures", failures}};
  return out.dump(2) + "\n";
}

namespace {

struct CaseResult {
  bool ok = true;
  std::string label;
  std::vector<std::string> problems;
  std::size_t colors = 0;
  std::uint64_t rounds = 0;
  double budget_fraction = 0.0;
};

CaseResult check_case(const TreeNetwork& tree, Vertex root, std::uint32_t m, bool extension,
                      PartitionPolicy partition, std::string label) {
  CaseResult out;
  out.label = std::move(label);
  try {
    const auto options = engine_options(m, extension, partition, ClashPolicy::kAbort,
                                        EndSlotRule::kSlotSpan, false);
    const auto budget = round_budget(tree, root, m, extension);
    const auto result = run(tree, root, options, 4 * budget);
    const auto colors = result.colors();
    const auto coloring = verify_coloring(tree, colors, m, optimal_k(tree, m));
    const auto trace = verify_trace(result.trace, tree);
    for (const auto& v : coloring.violations) out.problems.push_back(v.property + ": " + v.detail);
    out.problems.insert(out.problems.end(), trace.problems.begin(), trace.problems.end());
    const auto extra = extra_checks(tree, result, m, extension);
    out.problems.insert(out.problems.end(), extra.begin(), extra.end());
    out.colors = coloring.colors_used;
    out.rounds = trace.rounds_used;
    out.budget_fraction = static_cast<double>(trace.rounds_used) / static_cast<double>(budget);
  } catch (const std::exception& e) {
    out.problems.push_back(e.what());
  }
  out.ok = out.problems.empty();
  return out;
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

}  // namespace

SweepSummary run_sweep(const SweepConfig& config) {
  if (config.n_min == 0 || config.n_min > config.n_max || config.m_min == 0 ||
      config.m_min > config.m_max) {
    throw Error(ErrorCode::kInvalidParameters, "empty n or m range");
  }
  static constexpr TreeKind kKinds[] = {TreeKind::kRandom, TreeKind::kRandom, TreeKind::kStar,
                                        TreeKind::kPath, TreeKind::kCaterpillar,
                                        TreeKind::kBalanced};
  std::vector<CaseResult> cases(config.count);
  parallel_for(config.count, config.jobs, [&](std::size_t i) {
    Rng rng(config.seed * 0x9E3779B97F4A7C15ULL + i);
    const TreeKind kind = kKinds[rng.below(std::size(kKinds))];
    const std::size_t n = rng.between(config.n_min, config.n_max);
    const auto m = static_cast<std::uint32_t>(rng.between(config.m_min, config.m_max));
    const std::uint64_t tree_seed = rng.below(UINT64_MAX);
    const auto tree = generate_tree(kind, n, tree_seed);
    const Vertex root = i % 2 == 0 ? tree.max_degree_vertex() : rng.below(n);
    cases[i] = check_case(tree, root, m, config.extension, config.partition,
                          std::string(to_string(kind)) + ":" + std::to_string(n) +
                              " seed=" + std::to_string(tree_seed) + " m=" + std::to_string(m) +
                              " root=" + std::to_string(tree.label(root)));
  });

  SweepSummary summary;
  auto absorb = [&](const CaseResult& c) {
    ++summary.runs;
    if (c.ok) {
      ++summary.passed;
    } else {
      summary.failures.push_back(c.label + ": " + c.problems.front());
    }
    summary.max_colors = std::max(summary.max_colors, c.colors);
    summary.max_rounds = std::max(summary.max_rounds, c.rounds);
    summary.max_budget_fraction = std::max(summary.max_budget_fraction, c.budget_fraction);
  };
  for (const auto& c : cases) absorb(c);

  for (std::size_t n = 1; n <= config.exhaustive_n; ++n) {
    for (const auto& tree : enumerate_free_trees(n)) {
      ++summary.exhaustive_trees;
      for (std::uint32_t m : config.exhaustive_m) {
        const std::uint32_t expected = brute_force_min_k(tree, m, false);
        for (Vertex root = 0; root < tree.size(); ++root) {
          const auto c = check_case(tree, root, m, config.extension, config.partition,
                                    "free tree " + canonical_form(tree) + " m=" +
                                        std::to_string(m) + " root=" + std::to_string(root));
          absorb(c);
          ++summary.exhaustive_checks;
          if (c.colors != expected) {
            ++summary.exhaustive_mismatches;
            summary.failures.push_back(c.label + ": protocol used " + std::to_string(c.colors) +
                                       " colors, brute force needs " + std::to_string(expected));
          }
        }
      }
    }
  }
  return summary;
}

int cmd_sweep(const SweepConfig& config, std::ostream& out) {
  const auto summary = run_sweep(config);
  out << summary.to_json();
  return summary.ok() ? 0 : 1;
}

}  // namespace ccmc::cli
