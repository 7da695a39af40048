#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ccmc/message.hpp"
#include "ccmc/tokens.hpp"
#include "ccmc/tree.hpp"
#include "ccmc/types.hpp"

namespace ccmc {

// How leftover tokens are handled once every child holds one color.
enum class PartitionPolicy {
  kSpread,   // hand out every remaining token round-robin
  kMinimal,  // one color per child
};

// Which modulus the END broadcast guard applies to the clock.
enum class EndSlotRule {
  kSlotSpan,  // CLOCK mod slot_span, the same discipline as COLOR/TERM
  kAk,        // CLOCK mod ak, the literal reading
};

std::string_view to_string(PartitionPolicy policy);
PartitionPolicy parse_partition_policy(std::string_view text);
std::string_view to_string(EndSlotRule rule);
EndSlotRule parse_end_slot_rule(std::string_view text);

struct ProtocolOptions {
  std::uint32_t m = 1;
  PartitionPolicy partition = PartitionPolicy::kSpread;
  bool k_dissemination = false;
  EndSlotRule end_rule = EndSlotRule::kSlotSpan;
};

// Counts checks of the token-count identity
//   |tokens| = m * max_cl - m * |colors| - |parent colors \ colors|
// performed after token construction and after every refill iteration.
struct InvariantStats {
  std::uint64_t token_checks = 0;
  std::uint64_t token_violations = 0;
  std::uint64_t refill_iterations = 0;
};

// Optional observers for one handler invocation.
struct HandlerSinks {
  std::vector<std::string>* transcript = nullptr;
  InvariantStats* stats = nullptr;
};

// Protocol state of one process.
struct NodeState {
  NodeId id;
  std::vector<NodeId> neighbors;  // ascending
  std::uint32_t sigma = 1;

  int state = 0;
  std::optional<NodeId> parent;
  std::set<NodeId> colored;
  std::set<NodeId> to_color;
  ColorMap color_map;
  std::uint32_t max_cl = 0;
  std::uint32_t slot_span = 0;
  std::uint32_t ak = 0;
  bool root_terminated = false;

  const ColorSet& colors() const;
  ColorSet& colors() { return color_map[id]; }
  bool is_root() const { return parent.has_value() && *parent == id; }
  bool has_children() const { return !to_color.empty(); }
  bool is_neighbor(NodeId other) const;

  friend bool operator==(const NodeState&, const NodeState&) = default;
};

NodeState make_node_state(NodeId id, std::vector<NodeId> neighbors,
                          const ProtocolOptions& options);
// Initial states for every vertex of a tree, indexed by vertex.
std::vector<NodeState> make_node_states(const TreeNetwork& tree, const ProtocolOptions& options);

// Stable textual form of a node state, used for trace digests.
std::string encode(const NodeState& node);

// m tokens for each color of [0, max_cl) outside `colors`, minus one token per
// color of `parent_colors` (saturating at zero). Throws kDomainViolation if an
// input color is outside the domain.
TokenMultiset build_tokens(const ColorSet& colors, const ColorSet& parent_colors,
                           std::uint32_t max_cl, std::uint32_t m);

// Adds tokens until there is one per child: first by giving up the node's own
// largest colors while it holds more than one, then by taking the largest
// remaining parent color. Throws kInvariantBroken if a set would empty out.
void refill_loop(NodeState& node, TokenMultiset& tokens, std::uint32_t m,
                 const HandlerSinks& sinks = {});

// Splits tokens into one non-empty color set per child. Children are served
// in ascending identity; the first pass gives each child one token, smallest
// colors first. Under kSpread the remaining tokens are dealt round-robin,
// skipping children that already hold that color. Throws kInsufficientTokens.
std::map<NodeId, ColorSet> partition_tokens(const TokenMultiset& tokens,
                                            const std::set<NodeId>& children,
                                            PartitionPolicy policy);

// Receipt of the external START at `clock` (0 in a normal run).
// Throws kNotInitialState.
void on_start(NodeState& node, std::uint64_t clock, const ProtocolOptions& options,
              const HandlerSinks& sinks = {});
// First COLOR: adopt the parent, compute own colors and child proposals.
// Throws kMalformedColorMap.
void on_color_first(NodeState& node, const ColorMessage& msg, const ProtocolOptions& options,
                    const HandlerSinks& sinks = {});
// Later COLOR from a child: keep only colors that child allows.
// Throws kUnknownSender, kMalformedColorMap.
void on_color_from_child(NodeState& node, const ColorMessage& msg,
                         const HandlerSinks& sinks = {});
void on_color(NodeState& node, const ColorMessage& msg, const ProtocolOptions& options,
              const HandlerSinks& sinks = {});
void on_term(NodeState& node, const TermMessage& msg, const ProtocolOptions& options,
             const HandlerSinks& sinks = {});
void receive(NodeState& node, const Message& msg, const ProtocolOptions& options,
             const HandlerSinks& sinks = {});

// Evaluated at the beginning of round `clock`. Returns the message to
// broadcast, if any, and advances the state (1->2, 3->4, and 5->6 with K
// dissemination).
std::optional<Message> broadcast_guard(NodeState& node, std::uint64_t clock,
                                       const ProtocolOptions& options,
                                       const HandlerSinks& sinks = {});

// Keeps each node's smallest color. Throws kEmptyColorSet.
std::vector<ColorSet> reduce_to_single(const std::vector<ColorSet>& colors);

// Structural properties of a COLOR message.
enum class WellFormedness { kKeys = 0, kNonEmpty, kSenderDisjoint, kMultiplicity, kMaxClRange, kDomain };
inline constexpr std::size_t kWellFormednessCount = 6;
std::string_view to_string(WellFormedness property);

struct WellFormedVerdict {
  std::array<bool, kWellFormednessCount> holds{true, true, true, true, true, true};
  std::vector<std::string> details;

  bool ok() const;
  bool violates(WellFormedness property) const {
    return !holds[static_cast<std::size_t>(property)];
  }
  std::vector<WellFormedness> violated() const;
};

// Checks a COLOR message broadcast by `sender` against the M1..M6
// properties: keys are exactly the sender's closed neighborhood, entries
// non-empty, neighbor entries disjoint from the sender's, every color in at
// most m neighbor entries, 1 < max_cl <= k_bound, and all colors < max_cl.
WellFormedVerdict check_well_formed(const ColorMessage& msg, const TreeNetwork& tree,
                                    Vertex sender, std::uint32_t m, std::uint32_t k_bound);

}  // namespace ccmc
