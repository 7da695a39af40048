#pragma once

#include <iosfwd>
#include <string>

#include "ccmc/engine.hpp"
#include "ccmc/tree.hpp"

namespace ccmc {

// JSON-lines trace format, one object per round:
//   {"round": r,
//    "broadcasts": [{"sender": label, "type": "COLOR", "digest": "<16 hex>",
//                    "payload": {...}}],
//    "deliveries": [[sender, receiver], ...],
//    "clashes": [{"victim": label, "kind": "conflict", "senders": [...]}],
//    "state_digest": "<16 hex>", "terminated": bool}
// The round-0 record also carries "meta": {"root", "m", "k_dissemination"}.
// Vertices are written as document labels.
void write_trace(std::ostream& out, const SimulationTrace& trace, const TreeNetwork& tree);
std::string trace_to_jsonl(const SimulationTrace& trace, const TreeNetwork& tree);

// Inverse of write_trace. Throws kParseError on malformed input, or when a
// payload does not match its digest.
SimulationTrace read_trace(std::istream& in, const TreeNetwork& tree);

}  // namespace ccmc
