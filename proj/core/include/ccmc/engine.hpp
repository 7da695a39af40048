#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccmc/errors.hpp"
#include "ccmc/message.hpp"
#include "ccmc/protocol.hpp"
#include "ccmc/tree.hpp"

namespace ccmc {

enum class ClashKind { kConflict, kCollision };
enum class ClashPolicy {
  kAbort,  // stop the run with the report attached
  kDrop,   // clash victims discard every message of that round
};

std::string_view to_string(ClashKind kind);
std::string_view to_string(ClashPolicy policy);
ClashPolicy parse_clash_policy(std::string_view text);

struct BroadcastEvent {
  std::uint64_t round = 0;
  Vertex sender = 0;
  Message message;
};

struct ClashReport {
  std::uint64_t round = 0;
  Vertex victim = 0;
  ClashKind kind = ClashKind::kConflict;
  std::vector<Vertex> senders;  // ascending

  friend bool operator==(const ClashReport&, const ClashReport&) = default;
};

struct Delivery {
  Vertex sender = 0;
  Vertex receiver = 0;

  friend bool operator==(const Delivery&, const Delivery&) = default;
};

struct RoundRecord {
  std::uint64_t round = 0;
  std::vector<BroadcastEvent> broadcasts;
  std::vector<Delivery> deliveries;
  std::vector<ClashReport> clashes;
  std::uint64_t state_digest = 0;
};

// Round 0 holds the START delivery; every later record is one clock tick.
struct SimulationTrace {
  NodeLabel root = 0;
  std::uint32_t m = 1;
  bool k_dissemination = false;
  std::vector<RoundRecord> rounds;
  bool terminated = false;
  std::uint64_t final_round = 0;

  std::size_t broadcast_count() const;
  std::size_t clash_count() const;
};

struct EngineOptions {
  ProtocolOptions protocol;
  ClashPolicy clash_policy = ClashPolicy::kAbort;
  bool record_transcript = false;
};

class ClashAbortError : public Error {
 public:
  ClashAbortError(std::uint64_t round, std::vector<ClashReport> reports);
  const std::vector<ClashReport>& reports() const { return reports_; }

 private:
  std::vector<ClashReport> reports_;
};

// Every conflict (a sender with a broadcasting neighbor; one report per such
// sender) and every collision (a vertex with more than m broadcasting
// neighbors) among the broadcasts of a single round.
std::vector<ClashReport> detect_clashes(std::span<const BroadcastEvent> round_broadcasts,
                                        const TreeNetwork& tree, std::uint32_t m);

std::uint64_t state_digest(std::span<const NodeState> nodes);

// One synchronous round at `clock`: guards are evaluated against the state at
// round start, broadcasts are delivered to all neighbors in the same round,
// then receivers run their handlers in ascending sender identity. Throws
// ClashAbortError under kAbort when a clash is detected.
RoundRecord step(const TreeNetwork& tree, std::vector<NodeState>& nodes, std::uint64_t clock,
                 const EngineOptions& options, const HandlerSinks& sinks = {});

// Owns node states and the clock for a single run. Not thread-safe.
class Engine {
 public:
  Engine(const TreeNetwork& tree, EngineOptions options);

  // Delivers START to `root` at clock 0.
  void start(Vertex root);
  // Advances the clock by one and executes that round.
  const RoundRecord& step();
  // Base protocol: the root claimed termination. With K dissemination: every
  // node reached state 6.
  bool finished() const;

  std::uint64_t clock() const { return clock_; }
  std::vector<NodeState>& nodes() { return nodes_; }
  const std::vector<NodeState>& nodes() const { return nodes_; }
  const SimulationTrace& trace() const { return trace_; }
  SimulationTrace& trace() { return trace_; }
  const InvariantStats& stats() const { return stats_; }
  const std::vector<std::string>& transcript() const { return transcript_; }
  std::vector<ColorSet> colors() const;

 private:
  HandlerSinks sinks();

  const TreeNetwork* tree_;
  EngineOptions options_;
  std::vector<NodeState> nodes_;
  std::uint64_t clock_ = 0;
  bool started_ = false;
  Vertex root_ = 0;
  SimulationTrace trace_;
  InvariantStats stats_;
  std::vector<std::string> transcript_;
};

struct RunResult {
  SimulationTrace trace;
  std::vector<NodeState> nodes;
  InvariantStats stats;
  std::vector<std::string> transcript;

  std::vector<ColorSet> colors() const;
};

// START at clock 0, then rounds until finished. Throws kRoundBudgetExhausted
// after `max_rounds` rounds, ClashAbortError under kAbort.
RunResult run(const TreeNetwork& tree, Vertex root, const EngineOptions& options,
              std::uint64_t max_rounds);

// 2 * (height + 1) * (ceil(delta / m) + 1) + 2 rounds for the base protocol;
// a third sweep is budgeted when K dissemination is enabled.
std::uint64_t round_budget(const TreeNetwork& tree, Vertex root, std::uint32_t m,
                           bool k_dissemination = false);

}  // namespace ccmc
