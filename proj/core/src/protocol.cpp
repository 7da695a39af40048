#include "ccmc/protocol.hpp"

#include <algorithm>
#include <sstream>

#include "ccmc/errors.hpp"
#include "ccmc/termination.hpp"

namespace ccmc {

std::string_view to_string(PartitionPolicy policy) {
  return policy == PartitionPolicy::kSpread ? "spread" : "minimal";
}

PartitionPolicy parse_partition_policy(std::string_view text) {
  if (text == "spread") return PartitionPolicy::kSpread;
  if (text == "minimal") return PartitionPolicy::kMinimal;
  throw Error(ErrorCode::kInvalidParameters, "unknown partition policy: " + std::string(text));
}

std::string_view to_string(EndSlotRule rule) {
  return rule == EndSlotRule::kSlotSpan ? "slot-span" : "ak";
}

EndSlotRule parse_end_slot_rule(std::string_view text) {
  if (text == "slot-span") return EndSlotRule::kSlotSpan;
  if (text == "ak") return EndSlotRule::kAk;
  throw Error(ErrorCode::kInvalidParameters, "unknown END slot rule: " + std::string(text));
}

namespace {

const ColorSet kEmptyColors;

void note(const HandlerSinks& sinks, const NodeState& node, const std::string& line) {
  if (sinks.transcript != nullptr) {
    sinks.transcript->push_back("[" + std::to_string(node.id.value) + "] " + line);
  }
}

std::string format_ids(const std::set<NodeId>& ids) {
  std::string out = "{";
  bool first = true;
  for (NodeId id : ids) {
    if (!first) out += ",";
    out += std::to_string(id.value);
    first = false;
  }
  return out + "}";
}

// Parent colors that the node does not itself hold. For the root the parent
// entry aliases its own colors, so the difference is empty.
std::size_t foreign_parent_colors(const NodeState& node) {
  if (!node.parent) return 0;
  const auto it = node.color_map.find(*node.parent);
  if (it == node.color_map.end()) return 0;
  const ColorSet& own = node.colors();
  return static_cast<std::size_t>(std::count_if(
      it->second.begin(), it->second.end(), [&](Color c) { return !own.contains(c); }));
}

void check_token_count(const NodeState& node, const TokenMultiset& tokens, std::uint32_t m,
                       const HandlerSinks& sinks) {
  const long long expected = static_cast<long long>(m) * node.max_cl -
                             static_cast<long long>(m) * node.colors().size() -
                             static_cast<long long>(foreign_parent_colors(node));
  if (sinks.stats != nullptr) ++sinks.stats->token_checks;
  if (static_cast<long long>(tokens.size()) != expected) {
    if (sinks.stats != nullptr) ++sinks.stats->token_violations;
    note(sinks, node, "token count " + std::to_string(tokens.size()) + " != expected " +
                          std::to_string(expected));
  }
}

}  // namespace

const ColorSet& NodeState::colors() const {
  auto it = color_map.find(id);
  return it == color_map.end() ? kEmptyColors : it->second;
}

bool NodeState::is_neighbor(NodeId other) const {
  return std::binary_search(neighbors.begin(), neighbors.end(), other);
}

NodeState make_node_state(NodeId id, std::vector<NodeId> neighbors,
                          const ProtocolOptions& options) {
  NodeState node;
  node.id = id;
  std::sort(neighbors.begin(), neighbors.end());
  node.neighbors = std::move(neighbors);
  node.sigma = star_constant(node.neighbors.size(), options.m);
  node.ak = node.sigma;
  return node;
}

std::vector<NodeState> make_node_states(const TreeNetwork& tree, const ProtocolOptions& options) {
  std::vector<NodeState> nodes;
  nodes.reserve(tree.size());
  for (Vertex v = 0; v < tree.size(); ++v) {
    std::vector<NodeId> ids;
    for (Vertex w : tree.neighbors(v)) ids.push_back(tree.identity(w));
    nodes.push_back(make_node_state(tree.identity(v), std::move(ids), options));
  }
  return nodes;
}

std::string encode(const NodeState& node) {
  std::ostringstream os;
  os << node.id << "|s" << node.state << "|p";
  if (node.parent) os << *node.parent;
  os << "|c" << format_ids(node.colored) << "|t" << format_ids(node.to_color) << "|";
  for (const auto& [id, colors] : node.color_map) os << id << ":" << format_colors(colors) << ";";
  os << "|" << node.max_cl << "|" << node.slot_span << "|" << node.ak << "|"
     << node.root_terminated;
  return os.str();
}

TokenMultiset build_tokens(const ColorSet& colors, const ColorSet& parent_colors,
                           std::uint32_t max_cl, std::uint32_t m) {
  for (const ColorSet* set : {&colors, &parent_colors}) {
    if (!set->empty() && *set->rbegin() >= max_cl) {
      throw Error(ErrorCode::kDomainViolation,
                  "color " + std::to_string(*set->rbegin()) + " outside [0.." +
                      std::to_string(max_cl) + ")");
    }
  }
  TokenMultiset tokens;
  for (Color c = 0; c < max_cl; ++c) {
    if (!colors.contains(c)) tokens.add(c, m);
  }
  for (Color c : parent_colors) tokens.remove(c, 1);
  return tokens;
}

void refill_loop(NodeState& node, TokenMultiset& tokens, std::uint32_t m,
                 const HandlerSinks& sinks) {
  while (tokens.size() < node.to_color.size()) {
    ColorSet& own = node.colors();
    if (own.size() > 1) {
      const Color cl = *own.rbegin();
      own.erase(std::prev(own.end()));
      tokens.add(cl, m);
      note(sinks, node, "MC-12: stripped own color " + std::to_string(cl));
    } else {
      if (!node.parent || node.is_root()) {
        throw Error(ErrorCode::kInvariantBroken, "root ran short of tokens");
      }
      ColorSet& up = node.color_map[*node.parent];
      if (up.size() <= 1) {
        throw Error(ErrorCode::kInvariantBroken,
                    "parent color set of node " + std::to_string(node.id.value) +
                        " would become empty");
      }
      const Color cl = *up.rbegin();
      up.erase(std::prev(up.end()));
      tokens.add(cl, 1);
      note(sinks, node, "MC-14: stripped parent color " + std::to_string(cl));
    }
    if (sinks.stats != nullptr) ++sinks.stats->refill_iterations;
    check_token_count(node, tokens, m, sinks);
  }
}

std::map<NodeId, ColorSet> partition_tokens(const TokenMultiset& tokens,
                                            const std::set<NodeId>& children,
                                            PartitionPolicy policy) {
  if (children.empty()) return {};
  if (tokens.size() < children.size()) {
    throw Error(ErrorCode::kInsufficientTokens,
                std::to_string(tokens.size()) + " tokens for " +
                    std::to_string(children.size()) + " children");
  }
  std::vector<Color> pool;
  pool.reserve(tokens.size());
  for (const auto& [color, count] : tokens.entries()) pool.insert(pool.end(), count, color);

  const std::vector<NodeId> order(children.begin(), children.end());
  std::vector<ColorSet> sets(order.size());
  std::size_t next = 0;
  for (; next < order.size(); ++next) sets[next].insert(pool[next]);

  if (policy == PartitionPolicy::kSpread) {
    std::size_t cursor = 0;
    for (; next < pool.size(); ++next) {
      const Color c = pool[next];
      for (std::size_t t = 0; t < order.size(); ++t) {
        const std::size_t k = (cursor + t) % order.size();
        if (sets[k].insert(c).second) {
          cursor = k + 1;
          break;
        }
      }
    }
  }

  std::map<NodeId, ColorSet> out;
  for (std::size_t k = 0; k < order.size(); ++k) out.emplace(order[k], std::move(sets[k]));
  return out;
}

void on_start(NodeState& node, std::uint64_t clock, const ProtocolOptions& options,
              const HandlerSinks& sinks) {
  if (node.state != 0 || node.parent) {
    throw Error(ErrorCode::kNotInitialState,
                "START delivered to node " + std::to_string(node.id.value) + " in state " +
                    std::to_string(node.state));
  }
  note(sinks, node, "MC-01: START received at clock " + std::to_string(clock));
  ColorMessage fictitious;
  fictitious.sender = node.id;
  fictitious.max_cl = node.sigma;
  fictitious.cl_map[node.id] = {static_cast<Color>((clock + 1) % node.sigma)};
  on_color_first(node, fictitious, options, sinks);
}

void on_color_first(NodeState& node, const ColorMessage& msg, const ProtocolOptions& options,
                    const HandlerSinks& sinks) {
  if (node.state != 0 || node.parent) {
    throw Error(ErrorCode::kNotInitialState, "node already received its first COLOR");
  }
  const auto own = msg.cl_map.find(node.id);
  const auto from_parent = msg.cl_map.find(msg.sender);
  if (own == msg.cl_map.end() || from_parent == msg.cl_map.end()) {
    throw Error(ErrorCode::kMalformedColorMap,
                "COLOR from " + std::to_string(msg.sender.value) + " lacks an entry for " +
                    std::to_string(node.id.value) + " or its sender");
  }
  const bool root = msg.sender == node.id;

  node.parent = msg.sender;
  node.color_map[msg.sender] = from_parent->second;
  node.colored.clear();
  node.to_color.clear();
  for (NodeId nb : node.neighbors) {
    if (nb != msg.sender) node.to_color.insert(nb);
  }
  if (!root) node.colored.insert(msg.sender);
  node.color_map[node.id] = own->second;
  node.max_cl = std::max(msg.max_cl, node.sigma);
  node.slot_span = msg.max_cl;
  note(sinks, node, "MC-05: parent " + std::to_string(msg.sender.value) + " colors " +
                        format_colors(from_parent->second));
  note(sinks, node, "MC-07: colors " + format_colors(own->second) + ", MC-08: max_cl " +
                        std::to_string(node.max_cl) + " slot_span " +
                        std::to_string(node.slot_span));

  if (node.to_color.empty()) {
    if (root) {
      // Isolated root: nothing to color and nobody to report to.
      node.state = options.k_dissemination ? 6 : 4;
      node.root_terminated = true;
      note(sinks, node, "isolated root terminates");
    } else {
      node.state = 3;
      note(sinks, node, "MC-22: leaf, state 3");
    }
    return;
  }

  TokenMultiset tokens =
      build_tokens(node.colors(), node.color_map[*node.parent], node.max_cl, options.m);
  note(sinks, node, "MC-10: built " + std::to_string(tokens.size()) + " tokens for " +
                        std::to_string(node.to_color.size()) + " children");
  check_token_count(node, tokens, options.m, sinks);
  refill_loop(node, tokens, options.m, sinks);

  for (auto& [child, colors] : partition_tokens(tokens, node.to_color, options.partition)) {
    note(sinks, node, "MC-20: proposed " + format_colors(colors) + " to " +
                          std::to_string(child.value));
    node.color_map[child] = std::move(colors);
  }
  node.state = 1;
  note(sinks, node, "MC-21: state 1");
}

void on_color_from_child(NodeState& node, const ColorMessage& msg, const HandlerSinks& sinks) {
  if (!node.is_neighbor(msg.sender) || msg.sender == node.parent) {
    throw Error(ErrorCode::kUnknownSender,
                "COLOR from " + std::to_string(msg.sender.value) + " is not from a child of " +
                    std::to_string(node.id.value));
  }
  const auto allowed = msg.cl_map.find(node.id);
  if (allowed == msg.cl_map.end()) {
    throw Error(ErrorCode::kMalformedColorMap,
                "COLOR from " + std::to_string(msg.sender.value) + " lacks an entry for " +
                    std::to_string(node.id.value));
  }
  ColorSet& own = node.colors();
  ColorSet kept;
  std::set_intersection(own.begin(), own.end(), allowed->second.begin(), allowed->second.end(),
                        std::inserter(kept, kept.end()));
  note(sinks, node, "MC-24: colors " + format_colors(own) + " & " +
                        format_colors(allowed->second) + " = " + format_colors(kept));
  own = std::move(kept);
}

void on_color(NodeState& node, const ColorMessage& msg, const ProtocolOptions& options,
              const HandlerSinks& sinks) {
  if (!node.parent) {
    on_color_first(node, msg, options, sinks);
  } else {
    on_color_from_child(node, msg, sinks);
  }
}

void on_term(NodeState& node, const TermMessage& msg, const ProtocolOptions& options,
             const HandlerSinks& sinks) {
  if (msg.dest != node.id) {
    note(sinks, node, "MC-31: discarded TERM for " + std::to_string(msg.dest.value));
    return;
  }
  if (options.k_dissemination) {
    on_term_ext(node, msg, sinks);
    return;
  }
  node.colored.insert(msg.sender);
  note(sinks, node, "MC-32: " + std::to_string(msg.sender.value) + " colored");
  if (std::includes(node.colored.begin(), node.colored.end(), node.neighbors.begin(),
                    node.neighbors.end())) {
    if (node.is_root()) {
      node.root_terminated = true;
      note(sinks, node, "MC-34: root claims termination");
    } else {
      node.state = 3;
      note(sinks, node, "MC-34: subtree colored, state 3");
    }
  }
}

void receive(NodeState& node, const Message& msg, const ProtocolOptions& options,
             const HandlerSinks& sinks) {
  if (const auto* color = std::get_if<ColorMessage>(&msg)) {
    on_color(node, *color, options, sinks);
  } else if (const auto* term = std::get_if<TermMessage>(&msg)) {
    on_term(node, *term, options, sinks);
  } else if (const auto* end = std::get_if<EndMessage>(&msg)) {
    if (options.k_dissemination) on_end(node, *end, sinks);
  } else {
    on_start(node, 0, options, sinks);
  }
}

std::optional<Message> broadcast_guard(NodeState& node, std::uint64_t clock,
                                       const ProtocolOptions& options,
                                       const HandlerSinks& sinks) {
  if (node.state == 5 && options.k_dissemination) return end_guard(node, clock, options, sinks);
  if (node.state != 1 && node.state != 3) return std::nullopt;
  if (node.slot_span == 0 || !node.colors().contains(static_cast<Color>(clock % node.slot_span))) {
    return std::nullopt;
  }
  if (node.state == 1) {
    node.state = 2;
    note(sinks, node, "MC-27: broadcast COLOR at clock " + std::to_string(clock));
    return ColorMessage{node.id, node.color_map, node.max_cl};
  }
  node.state = 4;
  note(sinks, node, "MC-28: broadcast TERM to " + std::to_string(node.parent->value) +
                        " at clock " + std::to_string(clock));
  TermMessage term{*node.parent, node.id, std::nullopt};
  if (options.k_dissemination) term.ak = node.ak;
  return term;
}

std::vector<ColorSet> reduce_to_single(const std::vector<ColorSet>& colors) {
  std::vector<ColorSet> out;
  out.reserve(colors.size());
  for (std::size_t v = 0; v < colors.size(); ++v) {
    if (colors[v].empty()) {
      throw Error(ErrorCode::kEmptyColorSet, "vertex " + std::to_string(v) + " has no color");
    }
    out.push_back({*colors[v].begin()});
  }
  return out;
}

std::string_view to_string(WellFormedness property) {
  switch (property) {
    case WellFormedness::kKeys: return "M1";
    case WellFormedness::kNonEmpty: return "M2";
    case WellFormedness::kSenderDisjoint: return "M3";
    case WellFormedness::kMultiplicity: return "M4";
    case WellFormedness::kMaxClRange: return "M5";
    case WellFormedness::kDomain: return "M6";
  }
  return "?";
}

bool WellFormedVerdict::ok() const {
  return std::all_of(holds.begin(), holds.end(), [](bool b) { return b; });
}

std::vector<WellFormedness> WellFormedVerdict::violated() const {
  std::vector<WellFormedness> out;
  for (std::size_t i = 0; i < kWellFormednessCount; ++i) {
    if (!holds[i]) out.push_back(static_cast<WellFormedness>(i));
  }
  return out;
}

WellFormedVerdict check_well_formed(const ColorMessage& msg, const TreeNetwork& tree,
                                    Vertex sender, std::uint32_t m, std::uint32_t k_bound) {
  WellFormedVerdict verdict;
  auto fail = [&](WellFormedness p, const std::string& detail) {
    verdict.holds[static_cast<std::size_t>(p)] = false;
    verdict.details.push_back(std::string(to_string(p)) + ": " + detail);
  };

  std::set<NodeId> expected{tree.identity(sender)};
  std::set<NodeId> neighbor_ids;
  for (Vertex w : tree.neighbors(sender)) {
    expected.insert(tree.identity(w));
    neighbor_ids.insert(tree.identity(w));
  }
  std::set<NodeId> keys;
  for (const auto& [id, colors] : msg.cl_map) keys.insert(id);
  if (keys != expected || msg.sender != tree.identity(sender)) {
    fail(WellFormedness::kKeys, "keys differ from the sender's closed neighborhood");
  }

  const auto self_entry = msg.cl_map.find(msg.sender);
  const ColorSet empty;
  const ColorSet& own = self_entry == msg.cl_map.end() ? empty : self_entry->second;
  std::map<Color, std::uint32_t> usage;
  for (const auto& [id, colors] : msg.cl_map) {
    if (colors.empty()) fail(WellFormedness::kNonEmpty, "empty entry for " + std::to_string(id.value));
    if (!colors.empty() && *colors.rbegin() >= msg.max_cl) {
      fail(WellFormedness::kDomain, "entry for " + std::to_string(id.value) + " exceeds max_cl");
    }
    if (!neighbor_ids.contains(id)) continue;
    for (Color c : colors) {
      if (own.contains(c)) {
        fail(WellFormedness::kSenderDisjoint,
             "color " + std::to_string(c) + " shared with neighbor " + std::to_string(id.value));
      }
      ++usage[c];
    }
  }
  for (const auto& [c, count] : usage) {
    if (count > m) {
      fail(WellFormedness::kMultiplicity,
           "color " + std::to_string(c) + " proposed to " + std::to_string(count) + " neighbors");
    }
  }
  if (msg.max_cl <= 1 || msg.max_cl > k_bound) {
    fail(WellFormedness::kMaxClRange, "max_cl " + std::to_string(msg.max_cl) +
                                          " outside (1.." + std::to_string(k_bound) + "]");
  }
  return verdict;
}

}  // namespace ccmc
