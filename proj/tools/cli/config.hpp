#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ccmc/engine.hpp"
#include "ccmc/protocol.hpp"
#include "ccmc/tree.hpp"

namespace ccmc::cli {

// Everything needed to reproduce a run. Persisted as JSON with --save-config
// and replayed with --config.
struct RunConfig {
  std::string topology;   // topology file; empty when generated
  std::string generator;  // "kind:n[:param]"
  std::uint64_t seed = 1;
  std::uint32_t m = 1;
  std::string root = "auto";  // a node label, or the highest-degree node
  bool extension = false;
  PartitionPolicy partition = PartitionPolicy::kSpread;
  ClashPolicy clash = ClashPolicy::kAbort;
  EndSlotRule end_rule = EndSlotRule::kSlotSpan;
  std::uint64_t max_rounds = 0;  // 0: four times the round budget
  std::string trace_out;
  std::string coloring_out;
  std::string report_out;

  // Throws kInvalidParameters.
  void validate() const;
  std::string to_json() const;
  static RunConfig from_json(std::string_view text);
};

TreeNetwork load_topology(const std::string& topology, const std::string& generator,
                          std::uint64_t seed);
Vertex resolve_root(const TreeNetwork& tree, const std::string& root);

struct SweepConfig {
  std::size_t count = 1000;
  std::size_t n_min = 1;
  std::size_t n_max = 64;
  std::uint32_t m_min = 1;
  std::uint32_t m_max = 4;
  std::uint64_t seed = 1;
  bool extension = false;
  PartitionPolicy partition = PartitionPolicy::kSpread;
  // Free trees up to this size are checked against the brute-force oracle.
  std::size_t exhaustive_n = 0;
  std::vector<std::uint32_t> exhaustive_m{1, 2, 3};
  std::size_t jobs = 1;
};

}  // namespace ccmc::cli
