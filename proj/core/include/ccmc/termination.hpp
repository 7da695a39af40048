#pragma once

#include <cstdint>
#include <optional>

#include "ccmc/message.hpp"
#include "ccmc/protocol.hpp"

namespace ccmc {

// K dissemination: TERM messages carry each subtree's largest sigma up to
// the root, then END messages carry the maximum back down. A node's ak starts
// at its sigma and ends at ceil(delta / m) + 1.

// TERM addressed to `node` with K dissemination on: folds msg.ak into ak and,
// once every child reported, moves the root to state 5 (others to 3).
void on_term_ext(NodeState& node, const TermMessage& msg, const HandlerSinks& sinks = {});

// State-5 guard. Nodes with children broadcast END(id, ak); leaves move to
// state 6 silently.
std::optional<Message> end_guard(NodeState& node, std::uint64_t clock,
                                 const ProtocolOptions& options,
                                 const HandlerSinks& sinks = {});

// Acts only on END from the parent while in state 4.
void on_end(NodeState& node, const EndMessage& msg, const HandlerSinks& sinks = {});

}  // namespace ccmc
