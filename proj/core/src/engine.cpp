#include "ccmc/engine.hpp"

#include <algorithm>

namespace ccmc {

std::string_view to_string(ClashKind kind) {
  return kind == ClashKind::kConflict ? "conflict" : "collision";
}

std::string_view to_string(ClashPolicy policy) {
  return policy == ClashPolicy::kAbort ? "abort" : "drop";
}

ClashPolicy parse_clash_policy(std::string_view text) {
  if (text == "abort") return ClashPolicy::kAbort;
  if (text == "drop") return ClashPolicy::kDrop;
  throw Error(ErrorCode::kInvalidParameters, "unknown clash policy: " + std::string(text));
}

std::size_t SimulationTrace::broadcast_count() const {
  std::size_t total = 0;
  for (const auto& r : rounds) total += r.broadcasts.size();
  return total;
}

std::size_t SimulationTrace::clash_count() const {
  std::size_t total = 0;
  for (const auto& r : rounds) total += r.clashes.size();
  return total;
}

namespace {

std::string describe(std::uint64_t round, const std::vector<ClashReport>& reports) {
  std::string out = std::to_string(reports.size()) + " clash(es) in round " + std::to_string(round);
  if (!reports.empty()) {
    out += ", first: " + std::string(to_string(reports.front().kind)) + " at vertex " +
           std::to_string(reports.front().victim);
  }
  return out;
}

}  // namespace

ClashAbortError::ClashAbortError(std::uint64_t round, std::vector<ClashReport> reports)
    : Error(ErrorCode::kClashAbort, describe(round, reports)), reports_(std::move(reports)) {}

std::vector<ClashReport> detect_clashes(std::span<const BroadcastEvent> round_broadcasts,
                                        const TreeNetwork& tree, std::uint32_t m) {
  std::vector<bool> sending(tree.size(), false);
  std::uint64_t round = 0;
  for (const auto& event : round_broadcasts) {
    sending.at(event.sender) = true;
    round = event.round;
  }
  std::vector<ClashReport> reports;
  for (Vertex v = 0; v < tree.size(); ++v) {
    std::vector<Vertex> senders;
    for (Vertex w : tree.neighbors(v)) {
      if (sending[w]) senders.push_back(w);
    }
    std::sort(senders.begin(), senders.end());
    if (sending[v] && !senders.empty()) {
      reports.push_back({round, v, ClashKind::kConflict, senders});
    }
    if (senders.size() > m) {
      reports.push_back({round, v, ClashKind::kCollision, std::move(senders)});
    }
  }
  return reports;
}

std::uint64_t state_digest(std::span<const NodeState> nodes) {
  std::uint64_t h = fnv1a("");
  for (const auto& node : nodes) {
    h = fnv1a(encode(node), h);
    h = fnv1a("\n", h);
  }
  return h;
}

RoundRecord step(const TreeNetwork& tree, std::vector<NodeState>& nodes, std::uint64_t clock,
                 const EngineOptions& options, const HandlerSinks& sinks) {
  RoundRecord record;
  record.round = clock;
  for (Vertex v = 0; v < tree.size(); ++v) {
    if (auto msg = broadcast_guard(nodes[v], clock, options.protocol, sinks)) {
      record.broadcasts.push_back({clock, v, std::move(*msg)});
    }
  }
  record.clashes = detect_clashes(record.broadcasts, tree, options.protocol.m);
  if (!record.clashes.empty() && options.clash_policy == ClashPolicy::kAbort) {
    throw ClashAbortError(clock, record.clashes);
  }

  std::vector<bool> deaf(tree.size(), false);
  for (const auto& clash : record.clashes) deaf[clash.victim] = true;

  std::vector<const BroadcastEvent*> by_sender(tree.size(), nullptr);
  for (const auto& event : record.broadcasts) by_sender[event.sender] = &event;

  // Collect every delivery first so handlers never observe a partial round.
  std::vector<std::vector<const BroadcastEvent*>> inbox(tree.size());
  for (Vertex v = 0; v < tree.size(); ++v) {
    if (deaf[v]) continue;
    for (Vertex w : tree.neighbors(v)) {  // neighbors are ordered by identity
      if (by_sender[w] != nullptr) {
        inbox[v].push_back(by_sender[w]);
        record.deliveries.push_back({w, v});
      }
    }
  }
  for (Vertex v = 0; v < tree.size(); ++v) {
    for (const BroadcastEvent* event : inbox[v]) {
      receive(nodes[v], event->message, options.protocol, sinks);
    }
  }
  record.state_digest = state_digest(nodes);
  return record;
}

Engine::Engine(const TreeNetwork& tree, EngineOptions options)
    : tree_(&tree),
      options_(options),
      nodes_(make_node_states(tree, options.protocol)) {
  trace_.m = options.protocol.m;
  trace_.k_dissemination = options.protocol.k_dissemination;
}

HandlerSinks Engine::sinks() {
  return {options_.record_transcript ? &transcript_ : nullptr, &stats_};
}

void Engine::start(Vertex root) {
  if (started_) throw Error(ErrorCode::kNotInitialState, "engine already started");
  if (root >= tree_->size()) throw Error(ErrorCode::kUnknownRoot, "root vertex out of range");
  started_ = true;
  root_ = root;
  clock_ = 0;
  trace_.root = tree_->label(root);
  on_start(nodes_[root], clock_, options_.protocol, sinks());
  RoundRecord record;
  record.round = 0;
  record.state_digest = state_digest(nodes_);
  trace_.rounds.push_back(std::move(record));
  trace_.terminated = finished();
}

const RoundRecord& Engine::step() {
  if (!started_) throw Error(ErrorCode::kNotInitialState, "engine not started");
  ++clock_;
  try {
    trace_.rounds.push_back(ccmc::step(*tree_, nodes_, clock_, options_, sinks()));
  } catch (const ClashAbortError& e) {
    RoundRecord record;
    record.round = clock_;
    record.clashes = e.reports();
    trace_.rounds.push_back(std::move(record));
    throw;
  }
  trace_.final_round = clock_;
  trace_.terminated = finished();
  return trace_.rounds.back();
}

bool Engine::finished() const {
  if (!started_) return false;
  if (!options_.protocol.k_dissemination) return nodes_[root_].root_terminated;
  return std::all_of(nodes_.begin(), nodes_.end(), [](const NodeState& n) { return n.state == 6; });
}

std::vector<ColorSet> Engine::colors() const {
  std::vector<ColorSet> out;
  out.reserve(nodes_.size());
  for (const auto& node : nodes_) out.push_back(node.colors());
  return out;
}

std::vector<ColorSet> RunResult::colors() const {
  std::vector<ColorSet> out;
  out.reserve(nodes.size());
  for (const auto& node : nodes) out.push_back(node.colors());
  return out;
}

RunResult run(const TreeNetwork& tree, Vertex root, const EngineOptions& options,
              std::uint64_t max_rounds) {
  if (max_rounds == 0) throw Error(ErrorCode::kInvalidParameters, "max_rounds must be >= 1");
  Engine engine(tree, options);
  engine.start(root);
  while (!engine.finished()) {
    if (engine.clock() >= max_rounds) {
      throw Error(ErrorCode::kRoundBudgetExhausted,
                  "not finished after " + std::to_string(max_rounds) + " rounds");
    }
    engine.step();
  }
  return {std::move(engine.trace()), std::move(engine.nodes()), engine.stats(),
          engine.transcript()};
}

std::uint64_t round_budget(const TreeNetwork& tree, Vertex root, std::uint32_t m,
                           bool k_dissemination) {
  const std::uint64_t sweeps = k_dissemination ? 3 : 2;
  return sweeps * (tree.height_from(root) + 1) * optimal_k(tree, m) + 2;
}

}  // namespace ccmc
