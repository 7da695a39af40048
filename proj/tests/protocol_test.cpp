#include <gtest/gtest.h>

#include <map>

#include "ccmc/engine.hpp"
#include "ccmc/errors.hpp"
#include "ccmc/generators.hpp"
#include "ccmc/protocol.hpp"
#include "ccmc/rng.hpp"
#include "ccmc/tokens.hpp"
#include "support/independent.hpp"

namespace ccmc {
namespace {

std::vector<NodeId> ids(std::initializer_list<std::uint64_t> values) {
  std::vector<NodeId> out;
  for (auto v : values) out.push_back(NodeId{v});
  return out;
}

std::vector<NodeId> id_range(std::uint64_t first, std::uint64_t count) {
  std::vector<NodeId> out;
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(NodeId{first + i});
  return out;
}

ProtocolOptions with_m(std::uint32_t m) {
  ProtocolOptions options;
  options.m = m;
  return options;
}

TEST(TokenMultiset, AddRemoveSaturates) {
  TokenMultiset tokens;
  tokens.add(3, 2);
  tokens.add(1);
  EXPECT_EQ(tokens.size(), 3u);
  EXPECT_EQ(tokens.remove(3, 5), 2u);
  EXPECT_EQ(tokens.multiplicity(3), 0u);
  EXPECT_EQ(tokens.entries().size(), 1u);
  EXPECT_EQ(tokens.remove(7), 0u);
  EXPECT_EQ(tokens.size(), 1u);
}

TEST(BuildTokens, InternalNodeExample) {
  const auto tokens = build_tokens({1}, {0}, 5, 3);
  const std::map<Color, std::uint32_t> expected{{0, 2}, {2, 3}, {3, 3}, {4, 3}};
  EXPECT_EQ(tokens.entries(), expected);
  EXPECT_EQ(tokens.size(), 11u);
  EXPECT_EQ(tokens.size(), 3u * 5 - 3u * 1 - 1u);
}

TEST(BuildTokens, EmptyWhenDomainIsTight) {
  EXPECT_EQ(build_tokens({1}, {0}, 2, 1).size(), 0u);
}

TEST(BuildTokens, RootParentAliasesOwnColors) {
  // The root's parent is itself, so its parent colors are its own colors.
  for (std::uint32_t m = 1; m <= 4; ++m) {
    for (std::size_t degree = 1; degree <= 12; ++degree) {
      const auto s = star_constant(degree, m);
      const auto tokens = build_tokens({1 % s}, {1 % s}, s, m);
      EXPECT_EQ(tokens.size(), m * s - m);
      EXPECT_GE(tokens.size(), degree);
    }
  }
}

TEST(BuildTokens, DomainViolation) {
  EXPECT_THROW(build_tokens({5}, {0}, 5, 1), Error);
  try {
    build_tokens({1}, {7}, 5, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomainViolation);
  }
}

TEST(BuildTokens, MultiplicitiesFollowDefinition) {
  for (std::uint32_t m = 1; m <= 3; ++m) {
    for (std::uint32_t max_cl = 2; max_cl <= 6; ++max_cl) {
      for (Color own = 0; own < max_cl; ++own) {
        for (Color up = 0; up < max_cl; ++up) {
          if (up == own) continue;
          const auto tokens = build_tokens({own}, {up}, max_cl, m);
          for (Color c = 0; c < max_cl; ++c) {
            const std::uint32_t expected = c == own ? 0 : (c == up ? m - 1 : m);
            EXPECT_EQ(tokens.multiplicity(c), expected);
            EXPECT_LE(tokens.multiplicity(c), m);
          }
          EXPECT_EQ(tokens.size(), m * max_cl - m - 1);
        }
      }
    }
  }
}

// A node with a parent already chosen, ready for the refill loop.
NodeState adopted(std::uint64_t id, std::uint64_t parent, std::vector<NodeId> children,
                  ColorSet own, ColorSet up, std::uint32_t max_cl, std::uint32_t m) {
  auto neighbors = children;
  neighbors.push_back(NodeId{parent});
  NodeState node = make_node_state(NodeId{id}, neighbors, with_m(m));
  node.parent = NodeId{parent};
  node.colored = {NodeId{parent}};
  node.to_color = {children.begin(), children.end()};
  node.color_map[NodeId{id}] = std::move(own);
  node.color_map[NodeId{parent}] = std::move(up);
  node.max_cl = max_cl;
  node.slot_span = max_cl;
  return node;
}

TEST(RefillLoop, NoIterationWhenEnoughTokens) {
  auto node = adopted(10, 0, id_range(20, 9), {1}, {0}, 5, 3);
  auto tokens = build_tokens(node.colors(), node.color_map[NodeId{0}], 5, 3);
  const auto before = node;
  InvariantStats stats;
  refill_loop(node, tokens, 3, {nullptr, &stats});
  EXPECT_EQ(node, before);
  EXPECT_EQ(tokens.size(), 11u);
  EXPECT_EQ(stats.refill_iterations, 0u);
}

TEST(RefillLoop, StripsMaximalOwnColorFirst) {
  auto node = adopted(10, 0, ids({20}), {1, 2}, {0}, 3, 1);
  auto tokens = build_tokens(node.colors(), node.color_map[NodeId{0}], 3, 1);
  ASSERT_EQ(tokens.size(), 0u);
  std::vector<std::string> transcript;
  InvariantStats stats;
  refill_loop(node, tokens, 1, {&transcript, &stats});
  EXPECT_EQ(node.colors(), (ColorSet{1}));
  EXPECT_EQ(tokens.multiplicity(2), 1u);
  EXPECT_EQ(stats.refill_iterations, 1u);
  EXPECT_EQ(stats.token_violations, 0u);
  ASSERT_FALSE(transcript.empty());
  EXPECT_NE(transcript.back().find("MC-12: stripped own color 2"), std::string::npos);
}

TEST(RefillLoop, StripsMaximalParentColorWhenOwnIsSingleton) {
  auto node = adopted(10, 0, ids({20}), {1}, {0, 2}, 3, 1);
  auto tokens = build_tokens(node.colors(), node.color_map[NodeId{0}], 3, 1);
  ASSERT_EQ(tokens.size(), 0u);
  std::vector<std::string> transcript;
  InvariantStats stats;
  refill_loop(node, tokens, 1, {&transcript, &stats});
  EXPECT_EQ(node.colors(), (ColorSet{1}));
  EXPECT_EQ(node.color_map[NodeId{0}], (ColorSet{0}));
  EXPECT_EQ(tokens.multiplicity(2), 1u);
  EXPECT_EQ(stats.token_violations, 0u);
  EXPECT_NE(transcript.back().find("MC-14: stripped parent color 2"), std::string::npos);
}

TEST(RefillLoop, InvariantHoldsAfterEveryIteration) {
  // Own and parent sets are large, so the loop strips several colors.
  const std::uint32_t m = 2;
  auto node = adopted(50, 0, id_range(100, 7), {1, 3, 5}, {0, 2, 4}, 6, m);
  auto tokens = build_tokens(node.colors(), node.color_map[NodeId{0}], 6, m);
  InvariantStats stats;
  refill_loop(node, tokens, m, {nullptr, &stats});
  EXPECT_GE(tokens.size(), 7u);
  EXPECT_GE(stats.refill_iterations, 2u);
  EXPECT_EQ(stats.token_checks, stats.refill_iterations);
  EXPECT_EQ(stats.token_violations, 0u);
  EXPECT_FALSE(node.colors().empty());
  EXPECT_FALSE(node.color_map[NodeId{0}].empty());
  EXPECT_EQ(node.colors().count(1), 1u);  // smallest color never withdrawn
  EXPECT_EQ(tokens.size(), m * 6 - m * node.colors().size() - node.color_map[NodeId{0}].size());
}

TEST(RefillLoop, ParentSetCannotEmpty) {
  auto node = adopted(10, 0, id_range(20, 5), {1}, {0}, 2, 1);
  TokenMultiset tokens;
  try {
    refill_loop(node, tokens, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvariantBroken);
  }
}

void expect_partition_valid(const TokenMultiset& tokens, const std::set<NodeId>& children,
                            const std::map<NodeId, ColorSet>& parts) {
  ASSERT_EQ(parts.size(), children.size());
  std::map<Color, std::uint32_t> used;
  for (const auto& [child, colors] : parts) {
    EXPECT_TRUE(children.contains(child));
    EXPECT_FALSE(colors.empty());
    for (Color c : colors) ++used[c];
  }
  std::size_t total = 0;
  for (const auto& [c, count] : used) {
    EXPECT_LE(count, tokens.multiplicity(c)) << "color " << c;
    total += count;
  }
  EXPECT_LE(total, tokens.size());
}

TEST(PartitionTokens, NineChildren) {
  const auto tokens = build_tokens({1}, {0}, 5, 3);
  const auto children_vec = id_range(20, 9);
  const std::set<NodeId> children(children_vec.begin(), children_vec.end());
  for (auto policy : {PartitionPolicy::kSpread, PartitionPolicy::kMinimal}) {
    const auto parts = partition_tokens(tokens, children, policy);
    expect_partition_valid(tokens, children, parts);
  }
}

TEST(PartitionTokens, SingleChildSingleToken) {
  TokenMultiset tokens;
  tokens.add(5);
  const auto parts = partition_tokens(tokens, {NodeId{4}}, PartitionPolicy::kSpread);
  EXPECT_EQ(parts.at(NodeId{4}), (ColorSet{5}));
}

TEST(PartitionTokens, SpreadGivesLeftoversAway) {
  TokenMultiset tokens;
  tokens.add(0, 1);
  tokens.add(1, 2);
  const std::set<NodeId> children{NodeId{1}, NodeId{2}};
  const auto spread = partition_tokens(tokens, children, PartitionPolicy::kSpread);
  expect_partition_valid(tokens, children, spread);
  EXPECT_EQ(spread.at(NodeId{1}).size() + spread.at(NodeId{2}).size(), 3u);

  const auto minimal = partition_tokens(tokens, children, PartitionPolicy::kMinimal);
  expect_partition_valid(tokens, children, minimal);
  EXPECT_EQ(minimal.at(NodeId{1}), (ColorSet{0}));
  EXPECT_EQ(minimal.at(NodeId{2}), (ColorSet{1}));
}

TEST(PartitionTokens, InsufficientTokens) {
  TokenMultiset tokens;
  tokens.add(0);
  try {
    partition_tokens(tokens, {NodeId{1}, NodeId{2}}, PartitionPolicy::kSpread);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientTokens);
  }
}

TEST(PartitionTokens, RandomMultisetsKeepConstraints) {
  Rng rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    TokenMultiset tokens;
    const auto m = static_cast<std::uint32_t>(rng.between(1, 4));
    const auto colors = rng.between(1, 8);
    for (Color c = 0; c < colors; ++c) tokens.add(c, static_cast<std::uint32_t>(rng.below(m + 1)));
    if (tokens.empty()) continue;
    std::set<NodeId> children;
    const auto count = rng.between(1, tokens.size());
    for (std::uint64_t i = 0; i < count; ++i) children.insert(NodeId{100 + i});
    for (auto policy : {PartitionPolicy::kSpread, PartitionPolicy::kMinimal}) {
      expect_partition_valid(tokens, children, partition_tokens(tokens, children, policy));
    }
  }
}

TEST(OnStart, RootWithDegreeTen) {
  auto node = make_node_state(NodeId{0}, id_range(1, 10), with_m(3));
  on_start(node, 0, with_m(3));
  EXPECT_EQ(node.colors(), (ColorSet{1}));
  EXPECT_EQ(node.state, 1);
  EXPECT_TRUE(node.is_root());
  EXPECT_EQ(node.to_color.size(), 10u);
  EXPECT_TRUE(node.colored.empty());
  EXPECT_EQ(node.slot_span, 5u);
}

TEST(OnStart, RootWithOneNeighbor) {
  auto node = make_node_state(NodeId{0}, ids({1}), with_m(1));
  on_start(node, 0, with_m(1));
  EXPECT_EQ(node.sigma, 2u);
  EXPECT_EQ(node.colors(), (ColorSet{1}));
  EXPECT_FALSE(node.to_color.empty());
  EXPECT_EQ(node.state, 1);
}

TEST(OnStart, IsolatedRoot) {
  auto node = make_node_state(NodeId{0}, {}, with_m(1));
  on_start(node, 0, with_m(1));
  EXPECT_EQ(node.sigma, 1u);
  EXPECT_EQ(node.colors(), (ColorSet{0}));
  EXPECT_TRUE(node.root_terminated);
  EXPECT_FALSE(broadcast_guard(node, 0, with_m(1)).has_value());
}

TEST(OnStart, OnlyFromInitialState) {
  auto node = make_node_state(NodeId{0}, ids({1}), with_m(1));
  on_start(node, 0, with_m(1));
  try {
    on_start(node, 0, with_m(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotInitialState);
  }
}

TEST(OnColorFirst, LeafAdoptsProposal) {
  auto leaf = make_node_state(NodeId{7}, ids({3}), with_m(1));
  ColorMessage msg{NodeId{3}, {{NodeId{3}, {0}}, {NodeId{7}, {2}}}, 4};
  on_color_first(leaf, msg, with_m(1));
  EXPECT_EQ(leaf.colors(), (ColorSet{2}));
  EXPECT_EQ(leaf.state, 3);
  EXPECT_EQ(leaf.parent, NodeId{3});
  EXPECT_EQ(leaf.colored, (std::set<NodeId>{NodeId{3}}));
  EXPECT_EQ(leaf.slot_span, 4u);
}

TEST(OnColorFirst, InternalNodeBuildsElevenTokens) {
  const std::uint32_t m = 3;
  auto neighbors = id_range(20, 9);
  neighbors.push_back(NodeId{0});
  auto node = make_node_state(NodeId{10}, neighbors, with_m(m));
  ColorMessage msg{NodeId{0}, {{NodeId{0}, {0}}, {NodeId{10}, {1}}}, 5};
  std::vector<std::string> transcript;
  InvariantStats stats;
  on_color_first(node, msg, with_m(m), {&transcript, &stats});
  EXPECT_EQ(node.state, 1);
  EXPECT_EQ(node.max_cl, 5u);
  EXPECT_EQ(stats.refill_iterations, 0u);
  EXPECT_EQ(stats.token_checks, 1u);
  EXPECT_EQ(stats.token_violations, 0u);
  bool built = false;
  for (const auto& line : transcript) built |= line.find("built 11 tokens for 9 children") != std::string::npos;
  EXPECT_TRUE(built);
  for (NodeId child : node.to_color) EXPECT_FALSE(node.color_map[child].empty());
}

TEST(OnColorFirst, MissingSelfEntry) {
  auto node = make_node_state(NodeId{7}, ids({3}), with_m(1));
  ColorMessage msg{NodeId{3}, {{NodeId{3}, {0}}}, 2};
  try {
    on_color_first(node, msg, with_m(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedColorMap);
  }
}

TEST(OnColorFromChild, Intersects) {
  auto node = adopted(10, 0, ids({20}), {0, 4}, {1}, 5, 1);
  on_color_from_child(node, {NodeId{20}, {{NodeId{10}, {0}}, {NodeId{20}, {2}}}, 5});
  EXPECT_EQ(node.colors(), (ColorSet{0}));

  auto other = adopted(10, 0, ids({20}), {0}, {1}, 5, 1);
  on_color_from_child(other, {NodeId{20}, {{NodeId{10}, {0, 3}}, {NodeId{20}, {2}}}, 5});
  EXPECT_EQ(other.colors(), (ColorSet{0}));
}

TEST(OnColorFromChild, DisjointProposalEmptiesSet) {
  auto node = adopted(10, 0, ids({20}), {0}, {1}, 5, 1);
  on_color_from_child(node, {NodeId{20}, {{NodeId{10}, {3}}, {NodeId{20}, {2}}}, 5});
  EXPECT_TRUE(node.colors().empty());
  EXPECT_THROW(reduce_to_single({node.colors()}), Error);
}

TEST(OnColorFromChild, UnknownSender) {
  auto node = adopted(10, 0, ids({20}), {0}, {1}, 5, 1);
  try {
    on_color_from_child(node, {NodeId{99}, {{NodeId{10}, {0}}}, 5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownSender);
  }
}

TEST(BroadcastGuard, WaitingStateIsSilent) {
  auto node = adopted(10, 0, ids({20}), {1}, {0}, 5, 1);
  node.state = 2;
  for (std::uint64_t clock = 0; clock < 10; ++clock) {
    EXPECT_FALSE(broadcast_guard(node, clock, with_m(1)).has_value());
  }
}

TEST(BroadcastGuard, ColorOnSlot) {
  auto node = adopted(10, 0, ids({20}), {1}, {0}, 5, 1);
  node.state = 1;
  EXPECT_FALSE(broadcast_guard(node, 7, with_m(1)).has_value());
  const auto msg = broadcast_guard(node, 6, with_m(1));
  ASSERT_TRUE(msg.has_value());
  EXPECT_TRUE(std::holds_alternative<ColorMessage>(*msg));
  EXPECT_EQ(node.state, 2);
}

TEST(BroadcastGuard, TermOnSlot) {
  auto node = adopted(10, 0, {}, {2}, {0}, 5, 1);
  node.state = 3;
  const auto msg = broadcast_guard(node, 7, with_m(1));
  ASSERT_TRUE(msg.has_value());
  const auto& term = std::get<TermMessage>(*msg);
  EXPECT_EQ(term.dest, NodeId{0});
  EXPECT_EQ(term.sender, NodeId{10});
  EXPECT_FALSE(term.ak.has_value());
  EXPECT_EQ(node.state, 4);
}

TEST(OnTerm, AddressedElsewhere) {
  auto node = adopted(10, 0, ids({20, 21}), {1}, {0}, 5, 1);
  node.state = 2;
  const auto before = node;
  on_term(node, {NodeId{99}, NodeId{20}, std::nullopt}, with_m(1));
  EXPECT_EQ(node, before);
}

TEST(OnTerm, LastChildMovesInternalNodeToThree) {
  auto node = adopted(10, 0, ids({20, 21}), {1}, {0}, 5, 1);
  node.state = 2;
  on_term(node, {NodeId{10}, NodeId{20}, std::nullopt}, with_m(1));
  EXPECT_EQ(node.state, 2);
  on_term(node, {NodeId{10}, NodeId{21}, std::nullopt}, with_m(1));
  EXPECT_EQ(node.state, 3);
}

TEST(OnTerm, RootClaimsTermination) {
  auto root = make_node_state(NodeId{0}, ids({1, 2}), with_m(1));
  on_start(root, 0, with_m(1));
  root.state = 2;
  on_term(root, {NodeId{0}, NodeId{1}, std::nullopt}, with_m(1));
  EXPECT_FALSE(root.root_terminated);
  on_term(root, {NodeId{0}, NodeId{2}, std::nullopt}, with_m(1));
  EXPECT_TRUE(root.root_terminated);
}

TEST(ReduceToSingle, KeepsSmallest) {
  EXPECT_EQ(reduce_to_single({{0, 4}, {1}}), (std::vector<ColorSet>{{0}, {1}}));
  EXPECT_EQ(reduce_to_single({{2}}), (std::vector<ColorSet>{{2}}));
  try {
    reduce_to_single({{1}, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyColorSet);
  }
}

// The first COLOR message of a run on a star with center 0 and m = 2.
struct ColorFixture {
  TreeNetwork tree = testing::star(4);
  std::uint32_t m = 2;
  std::uint32_t k = 3;
  ColorMessage msg;

  ColorFixture() {
    EngineOptions options;
    options.protocol.m = m;
    Engine engine(tree, options);
    engine.start(0);
    while (true) {
      const auto& record = engine.step();
      if (!record.broadcasts.empty()) {
        msg = std::get<ColorMessage>(record.broadcasts.front().message);
        break;
      }
    }
  }
};

TEST(WellFormed, ProtocolMessagePasses) {
  ColorFixture f;
  const auto verdict = check_well_formed(f.msg, f.tree, 0, f.m, f.k);
  EXPECT_TRUE(verdict.ok()) << (verdict.details.empty() ? "" : verdict.details.front());
}

void expect_only(const WellFormedVerdict& verdict, WellFormedness property) {
  EXPECT_EQ(verdict.violated(), std::vector<WellFormedness>{property})
      << (verdict.details.empty() ? "no details" : verdict.details.front());
}

TEST(WellFormed, MissingNeighborKeyTripsKeysOnly) {
  ColorFixture f;
  f.msg.cl_map.erase(NodeId{3});
  expect_only(check_well_formed(f.msg, f.tree, 0, f.m, f.k), WellFormedness::kKeys);
}

TEST(WellFormed, ExtraKeyTripsKeys) {
  ColorFixture f;
  f.msg.cl_map[NodeId{42}] = {0};
  expect_only(check_well_formed(f.msg, f.tree, 0, f.m, f.k), WellFormedness::kKeys);
}

TEST(WellFormed, EmptyEntryTripsNonEmpty) {
  ColorFixture f;
  f.msg.cl_map[NodeId{2}].clear();
  expect_only(check_well_formed(f.msg, f.tree, 0, f.m, f.k), WellFormedness::kNonEmpty);
}

TEST(WellFormed, SharedColorTripsSenderDisjoint) {
  ColorFixture f;
  // Give leaf 1 the sender's color instead of its own.
  f.msg.cl_map[NodeId{1}] = f.msg.cl_map[NodeId{0}];
  expect_only(check_well_formed(f.msg, f.tree, 0, f.m, f.k), WellFormedness::kSenderDisjoint);
}

TEST(WellFormed, OverusedColorTripsMultiplicity) {
  ColorFixture f;
  const Color own = *f.msg.cl_map[NodeId{0}].begin();
  const Color other = own == 0 ? 2 : 0;
  for (std::uint64_t leaf = 1; leaf <= 4; ++leaf) f.msg.cl_map[NodeId{leaf}] = {other};
  expect_only(check_well_formed(f.msg, f.tree, 0, f.m, f.k), WellFormedness::kMultiplicity);
}

TEST(WellFormed, MaxClAboveBoundTripsRange) {
  ColorFixture f;
  f.msg.max_cl = f.k + 1;
  expect_only(check_well_formed(f.msg, f.tree, 0, f.m, f.k), WellFormedness::kMaxClRange);
}

TEST(WellFormed, MaxClOneViolatesRange) {
  ColorFixture f;
  f.msg.max_cl = 1;
  const auto verdict = check_well_formed(f.msg, f.tree, 0, f.m, f.k);
  EXPECT_TRUE(verdict.violates(WellFormedness::kMaxClRange));
}

TEST(WellFormed, ColorBeyondMaxClTripsDomain) {
  ColorFixture f;
  f.msg.cl_map[NodeId{4}] = {f.msg.max_cl};
  expect_only(check_well_formed(f.msg, f.tree, 0, f.m, f.k), WellFormedness::kDomain);
}

TEST(WellFormed, Names) {
  EXPECT_EQ(to_string(WellFormedness::kKeys), "M1");
  EXPECT_EQ(to_string(WellFormedness::kDomain), "M6");
}

TEST(NodeState, EncodingDistinguishesStates) {
  auto a = make_node_state(NodeId{1}, ids({2}), with_m(1));
  auto b = a;
  b.state = 3;
  EXPECT_NE(encode(a), encode(b));
  EXPECT_EQ(encode(a), encode(make_node_state(NodeId{1}, ids({2}), with_m(1))));
}

TEST(Policies, ParseAndPrint) {
  EXPECT_EQ(parse_partition_policy(to_string(PartitionPolicy::kMinimal)), PartitionPolicy::kMinimal);
  EXPECT_EQ(parse_end_slot_rule(to_string(EndSlotRule::kAk)), EndSlotRule::kAk);
  EXPECT_THROW(parse_partition_policy("greedy"), Error);
  EXPECT_THROW(parse_end_slot_rule("never"), Error);
}

}  // namespace
}  // namespace ccmc
