#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ccmc/engine.hpp"
#include "ccmc/verifier.hpp"
#include "cli/config.hpp"

namespace ccmc::cli {

// A finished run with its artifacts rendered but not yet written anywhere.
struct RunOutcome {
  explicit RunOutcome(TreeNetwork t) : tree(std::move(t)) {}

  TreeNetwork tree;
  Vertex root = 0;
  RunResult result;
  VerificationReport coloring_report;
  TraceReport trace_report;
  std::vector<std::string> problems;  // checks outside the two reports
  std::string trace_jsonl;
  std::string coloring_json;
  std::string report_json;

  bool ok() const { return coloring_report.ok() && trace_report.ok() && problems.empty(); }
};

// Throws ccmc::Error (ClashAbortError under the abort policy).
RunOutcome execute_run(const RunConfig& config);

// Writes the configured artifacts and a summary line. Returns the exit status.
int cmd_run(const RunConfig& config, int verbosity, std::ostream& out);

struct SweepSummary {
  std::size_t runs = 0;
  std::size_t passed = 0;
  std::size_t exhaustive_trees = 0;
  std::size_t exhaustive_checks = 0;
  std::size_t exhaustive_mismatches = 0;
  std::size_t max_colors = 0;
  std::uint64_t max_rounds = 0;
  double max_budget_fraction = 0.0;
  std::vector<std::string> failures;

  bool ok() const { return passed == runs && exhaustive_mismatches == 0; }
  std::string to_json() const;
};

SweepSummary run_sweep(const SweepConfig& config);
int cmd_sweep(const SweepConfig& config, std::ostream& out);

}  // namespace ccmc::cli
