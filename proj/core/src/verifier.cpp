#include "ccmc/verifier.hpp"

#include <algorithm>
#include <map>

#include "ccmc/errors.hpp"
#include "ccmc/protocol.hpp"

namespace ccmc {

VerificationReport verify_coloring(const TreeNetwork& tree, const std::vector<ColorSet>& colors,
                                   std::uint32_t m, std::uint32_t k) {
  if (colors.size() != tree.size()) {
    throw Error(ErrorCode::kMissingNode, "coloring has " + std::to_string(colors.size()) +
                                             " entries for " + std::to_string(tree.size()) +
                                             " nodes");
  }
  VerificationReport report;

  for (const auto& [a, b] : tree.edges()) {
    ColorSet shared;
    std::set_intersection(colors[a].begin(), colors[a].end(), colors[b].begin(), colors[b].end(),
                          std::inserter(shared, shared.end()));
    if (!shared.empty()) {
      report.conflict_free = false;
      report.violations.push_back({{tree.label(a), tree.label(b)},
                                   "conflict-freedom",
                                   "neighbors share " + format_colors(shared)});
    }
  }

  for (Vertex i = 0; i < tree.size(); ++i) {
    std::map<Color, std::vector<NodeLabel>> holders;
    for (Vertex j : tree.neighbors(i)) {
      for (Color c : colors[j]) holders[c].push_back(tree.label(j));
    }
    for (const auto& [c, who] : holders) {
      if (who.size() > m) {
        report.m_collision_free = false;
        report.violations.push_back({who, "m-collision-freedom",
                                     "color " + std::to_string(c) + " held by " +
                                         std::to_string(who.size()) + " neighbors of " +
                                         std::to_string(tree.label(i))});
      }
    }
  }

  ColorSet used;
  for (const auto& set : colors) used.insert(set.begin(), set.end());
  report.colors_used = used.size();
  if (used.size() > k) {
    report.efficiency_ok = false;
    report.violations.push_back({{}, "efficiency",
                                 std::to_string(used.size()) + " colors exceed K = " +
                                     std::to_string(k)});
  }

  const std::uint32_t target = optimal_k(tree, m);
  if (used.size() != target) {
    report.k_optimal = false;
    report.violations.push_back({{}, "color-count",
                                 std::to_string(used.size()) + " colors used, expected " +
                                     std::to_string(target)});
  }
  for (Vertex v = 0; v < tree.size(); ++v) {
    if (colors[v].empty()) {
      report.k_optimal = false;
      report.violations.push_back({{tree.label(v)}, "non-empty", "empty color set"});
    }
  }
  return report;
}

TraceReport verify_trace(const SimulationTrace& trace, const TreeNetwork& tree) {
  if (!trace.terminated) throw Error(ErrorCode::kIncompleteTrace, "run did not terminate");
  const auto root = tree.find(trace.root);
  if (!root) throw Error(ErrorCode::kUnknownRoot, "trace root " + std::to_string(trace.root));
  const std::uint32_t k_bound = optimal_k(tree, trace.m);

  TraceReport report;
  report.leaf_count = tree.leaf_count_from(*root);
  report.broadcast_count = trace.broadcast_count();
  report.expected_broadcasts = 2 * tree.size() - (report.leaf_count + 1);
  if (trace.k_dissemination) report.expected_broadcasts += tree.size() - report.leaf_count;
  report.rounds_used = trace.final_round;
  report.round_budget = round_budget(tree, *root, trace.m, trace.k_dissemination);

  for (const auto& record : trace.rounds) {
    for (const auto& clash : record.clashes) {
      report.clash_free = false;
      report.problems.push_back("round " + std::to_string(record.round) + ": " +
                                std::string(to_string(clash.kind)) + " at node " +
                                std::to_string(tree.label(clash.victim)));
    }
    // Re-detect from the broadcasts themselves rather than trusting the log.
    if (record.clashes.empty() && !detect_clashes(record.broadcasts, tree, trace.m).empty()) {
      report.clash_free = false;
      report.problems.push_back("round " + std::to_string(record.round) +
                                ": unreported clash among broadcasts");
    }
    for (const auto& event : record.broadcasts) {
      const auto* color = std::get_if<ColorMessage>(&event.message);
      if (color == nullptr) continue;
      ++report.color_messages;
      const auto verdict = check_well_formed(*color, tree, event.sender, trace.m, k_bound);
      if (!verdict.ok()) {
        ++report.malformed_messages;
        for (const auto& detail : verdict.details) {
          report.problems.push_back("round " + std::to_string(record.round) + ": COLOR from " +
                                    std::to_string(tree.label(event.sender)) + ": " + detail);
        }
      }
    }
  }

  if (report.broadcast_count != report.expected_broadcasts) {
    report.bounds_ok = false;
    report.problems.push_back(std::to_string(report.broadcast_count) + " broadcasts, expected " +
                              std::to_string(report.expected_broadcasts));
  }
  if (report.rounds_used > report.round_budget) {
    report.bounds_ok = false;
    report.problems.push_back(std::to_string(report.rounds_used) + " rounds exceed budget " +
                              std::to_string(report.round_budget));
  }
  return report;
}

std::vector<ScheduledRound> slot_schedule(const std::vector<ColorSet>& colors, std::uint32_t k,
                                          std::uint64_t first, std::uint64_t count) {
  std::vector<ScheduledRound> schedule;
  if (k == 0) return schedule;
  for (std::uint64_t r = first; r < first + count; ++r) {
    ScheduledRound round{r, {}};
    for (Vertex v = 0; v < colors.size(); ++v) {
      if (colors[v].contains(static_cast<Color>(r % k))) round.senders.push_back(v);
    }
    schedule.push_back(std::move(round));
  }
  return schedule;
}

bool verify_slot_usage(const TreeNetwork& tree, const std::vector<ColorSet>& colors,
                       std::uint32_t k, std::uint32_t m,
                       const std::vector<ScheduledRound>& schedule) {
  if (k == 0 || colors.size() != tree.size()) return false;
  for (const auto& round : schedule) {
    std::vector<bool> sending(tree.size(), false);
    for (Vertex v : round.senders) {
      if (v >= tree.size() || !colors[v].contains(static_cast<Color>(round.round % k))) {
        return false;
      }
      sending[v] = true;
    }
    for (Vertex i = 0; i < tree.size(); ++i) {
      std::size_t around = 0;
      for (Vertex j : tree.neighbors(i)) {
        if (!sending[j]) continue;
        if (sending[i]) return false;
        ++around;
      }
      if (around > m) return false;
    }
  }
  return true;
}

bool is_distance2_coloring(const TreeNetwork& tree, const std::vector<Color>& coloring) {
  if (coloring.size() != tree.size()) return false;
  for (Vertex v = 0; v < tree.size(); ++v) {
    for (Vertex w : tree.neighbors(v)) {
      if (coloring[w] == coloring[v]) return false;
      for (Vertex x : tree.neighbors(w)) {
        if (x != v && coloring[x] == coloring[v]) return false;
      }
    }
  }
  return true;
}

bool satisfies_closed_neighborhood_bound(const TreeNetwork& tree,
                                         const std::vector<Color>& coloring, std::uint32_t m) {
  if (coloring.size() != tree.size()) return false;
  for (Vertex i = 0; i < tree.size(); ++i) {
    std::map<Color, std::uint32_t> count{{coloring[i], 1}};
    for (Vertex j : tree.neighbors(i)) {
      if (++count[coloring[j]] > m) return false;
    }
    if (count[coloring[i]] > m) return false;
  }
  return true;
}

}  // namespace ccmc
