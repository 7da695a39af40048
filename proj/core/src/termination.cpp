#include "ccmc/termination.hpp"

#include <algorithm>

namespace ccmc {

namespace {

void note(const HandlerSinks& sinks, const NodeState& node, const std::string& line) {
  if (sinks.transcript != nullptr) {
    sinks.transcript->push_back("[" + std::to_string(node.id.value) + "] " + line);
  }
}

}  // namespace

void on_term_ext(NodeState& node, const TermMessage& msg, const HandlerSinks& sinks) {
  if (msg.dest != node.id) return;
  node.colored.insert(msg.sender);
  if (msg.ak) node.ak = std::max(node.ak, *msg.ak);
  note(sinks, node, "N1: " + std::to_string(msg.sender.value) + " colored, ak " +
                        std::to_string(node.ak));
  if (std::includes(node.colored.begin(), node.colored.end(), node.neighbors.begin(),
                    node.neighbors.end())) {
    node.state = node.is_root() ? 5 : 3;
    note(sinks, node, "MC-34': state " + std::to_string(node.state));
  }
}

std::optional<Message> end_guard(NodeState& node, std::uint64_t clock,
                                 const ProtocolOptions& options, const HandlerSinks& sinks) {
  if (node.state != 5) return std::nullopt;
  const std::uint32_t modulus =
      options.end_rule == EndSlotRule::kSlotSpan ? node.slot_span : node.ak;
  if (modulus == 0 || !node.colors().contains(static_cast<Color>(clock % modulus))) {
    return std::nullopt;
  }
  node.state = 6;
  if (!node.has_children()) {
    note(sinks, node, "N3: leaf reaches state 6 at clock " + std::to_string(clock));
    return std::nullopt;
  }
  note(sinks, node, "N3: broadcast END ak " + std::to_string(node.ak) + " at clock " +
                        std::to_string(clock));
  return EndMessage{node.id, node.ak};
}

void on_end(NodeState& node, const EndMessage& msg, const HandlerSinks& sinks) {
  if (!node.parent || msg.sender != *node.parent || node.is_root() || node.state != 4) return;
  node.ak = std::max(node.ak, msg.k);
  node.state = 5;
  note(sinks, node, "N6: ak " + std::to_string(node.ak) + ", state 5");
}

}  // namespace ccmc
