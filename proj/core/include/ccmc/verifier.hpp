#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccmc/engine.hpp"
#include "ccmc/tree.hpp"
#include "ccmc/types.hpp"

namespace ccmc {

struct Violation {
  std::vector<NodeLabel> nodes;
  std::string property;
  std::string detail;
};

struct VerificationReport {
  bool conflict_free = true;
  bool m_collision_free = true;
  bool efficiency_ok = true;
  bool k_optimal = true;
  std::size_t colors_used = 0;
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

// Checks neighbor disjointness, the m bound on each color around every node,
// |union of colors| <= K, and that exactly ceil(delta / m) + 1 colors are used
// with no empty set. `colors` is indexed by vertex. Throws kMissingNode.
VerificationReport verify_coloring(const TreeNetwork& tree, const std::vector<ColorSet>& colors,
                                   std::uint32_t m, std::uint32_t k);

struct TraceReport {
  bool clash_free = true;
  std::size_t broadcast_count = 0;
  std::size_t expected_broadcasts = 0;
  std::size_t leaf_count = 0;
  std::uint64_t rounds_used = 0;
  std::uint64_t round_budget = 0;
  bool bounds_ok = true;
  std::size_t color_messages = 0;
  std::size_t malformed_messages = 0;
  std::vector<std::string> problems;

  bool ok() const { return problems.empty(); }
};

// Zero clashes, broadcast count 2n - (x + 1) (plus n - x END messages with K
// dissemination), rounds within budget, and every COLOR well formed.
// Throws kIncompleteTrace.
TraceReport verify_trace(const SimulationTrace& trace, const TreeNetwork& tree);

struct ScheduledRound {
  std::uint64_t round = 0;
  std::vector<Vertex> senders;
};

// Senders allowed by (round mod K) in colors, for rounds [first, first + count).
std::vector<ScheduledRound> slot_schedule(const std::vector<ColorSet>& colors, std::uint32_t k,
                                          std::uint64_t first, std::uint64_t count);

// True iff every sender is on one of its slots and no round has a conflict or
// more than m broadcasting neighbors around a node.
bool verify_slot_usage(const TreeNetwork& tree, const std::vector<ColorSet>& colors,
                       std::uint32_t k, std::uint32_t m,
                       const std::vector<ScheduledRound>& schedule);

// Nodes within two hops hold distinct colors.
bool is_distance2_coloring(const TreeNetwork& tree, const std::vector<Color>& coloring);

// |{j in N(i) u {i} : col(j) = c}| <= m for every node i and color c.
bool satisfies_closed_neighborhood_bound(const TreeNetwork& tree,
                                         const std::vector<Color>& coloring, std::uint32_t m);

}  // namespace ccmc
