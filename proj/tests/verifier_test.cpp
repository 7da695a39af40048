#include <gtest/gtest.h>

#include "ccmc/engine.hpp"
#include "ccmc/errors.hpp"
#include "ccmc/generators.hpp"
#include "ccmc/io.hpp"
#include "ccmc/oracle.hpp"
#include "ccmc/verifier.hpp"
#include "support/independent.hpp"

namespace ccmc {
namespace {

RunResult run_m(const TreeNetwork& tree, Vertex root, std::uint32_t m, bool extension = false) {
  EngineOptions options;
  options.protocol.m = m;
  options.protocol.k_dissemination = extension;
  return run(tree, root, options, 4 * round_budget(tree, root, m, extension));
}

TEST(VerifyColoring, ProtocolOutputPasses) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto tree = generate_tree(TreeKind::kRandom, 2 + seed, seed);
    for (std::uint32_t m = 1; m <= 4; ++m) {
      const auto colors = run_m(tree, 0, m).colors();
      const auto report = verify_coloring(tree, colors, m, testing::expected_k(tree, m));
      EXPECT_TRUE(report.ok());
      EXPECT_EQ(report.colors_used, testing::expected_k(tree, m));
      std::vector<std::set<std::uint32_t>> sets(colors.begin(), colors.end());
      EXPECT_TRUE(testing::naive_valid(tree, sets, m));
    }
  }
}

TEST(VerifyColoring, AdjacentSharedColor) {
  const auto tree = testing::path(3);
  const auto report = verify_coloring(tree, {{0}, {0}, {1}}, 1, 3);
  EXPECT_FALSE(report.conflict_free);
  EXPECT_FALSE(report.ok());
  ASSERT_FALSE(report.violations.empty());
  EXPECT_EQ(report.violations[0].property, "conflict-freedom");
  EXPECT_EQ(report.violations[0].nodes, (std::vector<NodeLabel>{0, 1}));
}

TEST(VerifyColoring, CollisionThreshold) {
  const auto tree = testing::star(3);
  const auto bad = verify_coloring(tree, {{0}, {1}, {1}, {1}}, 2, 3);
  EXPECT_FALSE(bad.m_collision_free);
  EXPECT_TRUE(bad.conflict_free);
  const auto fine = verify_coloring(tree, {{0}, {1}, {1}, {2}}, 2, 3);
  EXPECT_TRUE(fine.m_collision_free);
}

TEST(VerifyColoring, EfficiencyAndCount) {
  const auto tree = testing::path(2);
  const auto too_many = verify_coloring(tree, {{0, 2}, {1}}, 1, 2);
  EXPECT_FALSE(too_many.efficiency_ok);
  EXPECT_FALSE(too_many.k_optimal);
  const auto empty = verify_coloring(tree, {{0}, {}}, 1, 2);
  EXPECT_FALSE(empty.k_optimal);
}

TEST(VerifyColoring, MissingNode) {
  try {
    verify_coloring(testing::path(3), {{0}, {1}}, 1, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingNode);
  }
}

TEST(VerifyColoring, AllTrueIffNoViolations) {
  const auto tree = testing::star(4);
  for (const std::vector<ColorSet>& colors :
       {std::vector<ColorSet>{{0}, {1}, {1}, {2}, {2}}, std::vector<ColorSet>{{0}, {0}, {1}, {2}, {2}},
        std::vector<ColorSet>{{0}, {1}, {1}, {1}, {2}}}) {
    const auto r = verify_coloring(tree, colors, 2, 3);
    EXPECT_EQ(r.conflict_free && r.m_collision_free && r.efficiency_ok && r.k_optimal, r.ok());
    EXPECT_EQ(r.ok(), verify_coloring(tree, colors, 2, 3).ok());
  }
}

TEST(VerifyColoring, SingletonReductionPreservesValidity) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto tree = generate_tree(TreeKind::kBalanced, 10 + seed, seed, 2 + seed % 4);
    for (std::uint32_t m = 1; m <= 3; ++m) {
      const auto colors = run_m(tree, 0, m).colors();
      const auto single = reduce_to_single(colors);
      EXPECT_TRUE(verify_coloring(tree, single, m, testing::expected_k(tree, m)).ok());
      if (m == 1) {
        std::vector<Color> flat;
        for (const auto& s : single) flat.push_back(*s.begin());
        EXPECT_TRUE(is_distance2_coloring(tree, flat));
      }
    }
  }
}

TEST(VerifyTrace, TwoNodePath) {
  const auto tree = testing::path(2);
  const auto report = verify_trace(run_m(tree, 0, 1).trace, tree);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.broadcast_count, 2u);
  EXPECT_EQ(report.expected_broadcasts, 2u);
  EXPECT_EQ(report.leaf_count, 1u);
}

TEST(VerifyTrace, CorpusRunsAreCleanAndWithinBounds) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto tree = generate_tree(TreeKind::kRandom, 3 + seed, seed);
    const Vertex root = seed % tree.size();
    for (std::uint32_t m = 1; m <= 3; ++m) {
      const auto report = verify_trace(run_m(tree, root, m).trace, tree);
      EXPECT_TRUE(report.ok());
      EXPECT_TRUE(report.clash_free);
      const auto x = testing::leaves_relative_to(tree, root);
      EXPECT_EQ(report.broadcast_count, 2 * tree.size() - (x + 1));
      EXPECT_LE(report.broadcast_count, 2 * tree.size() - tree.max_degree());
      EXPECT_EQ(report.malformed_messages, 0u);
    }
  }
}

TEST(VerifyTrace, ExtensionCountsEndMessages) {
  const auto tree = generate_tree(TreeKind::kBalanced, 13, 0, 3);
  const auto report = verify_trace(run_m(tree, 0, 2, true).trace, tree);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.expected_broadcasts, 2 * 13 - (9 + 1) + (13 - 9));
}

TEST(VerifyTrace, IncompleteTrace) {
  const auto tree = testing::path(5);
  EngineOptions options;
  Engine engine(tree, options);
  engine.start(0);
  engine.step();
  try {
    verify_trace(engine.trace(), tree);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncompleteTrace);
  }
}

TEST(VerifyTrace, DetectsInjectedBroadcast) {
  const auto tree = testing::star(3);
  auto trace = run_m(tree, 0, 1).trace;
  // A leaf speaking in the root's COLOR round creates a conflict.
  for (auto& record : trace.rounds) {
    if (!record.broadcasts.empty()) {
      record.broadcasts.push_back({record.round, 1, TermMessage{NodeId{0}, NodeId{1}, {}}});
      break;
    }
  }
  const auto report = verify_trace(trace, tree);
  EXPECT_FALSE(report.clash_free);
  EXPECT_FALSE(report.bounds_ok);
}

TEST(VerifyTrace, DetectsMalformedColor) {
  const auto tree = testing::star(3);
  auto trace = run_m(tree, 0, 1).trace;
  for (auto& record : trace.rounds) {
    for (auto& b : record.broadcasts) {
      if (auto* color = std::get_if<ColorMessage>(&b.message)) color->max_cl = 99;
    }
  }
  const auto report = verify_trace(trace, tree);
  EXPECT_EQ(report.malformed_messages, 1u);
  EXPECT_FALSE(report.ok());
}

TEST(SlotUsage, DerivedScheduleIsValid) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto tree = generate_tree(TreeKind::kRandom, 30, seed);
    for (std::uint32_t m = 1; m <= 3; ++m) {
      const auto colors = run_m(tree, 0, m).colors();
      const auto k = testing::expected_k(tree, m);
      EXPECT_TRUE(verify_slot_usage(tree, colors, k, m, slot_schedule(colors, k, 0, 3 * k)));
    }
  }
}

TEST(SlotUsage, OffSlotSender) {
  const auto tree = testing::path(3);
  const std::vector<ColorSet> colors{{0}, {1}, {2}};
  EXPECT_FALSE(verify_slot_usage(tree, colors, 3, 1, {{4, {0}}}));
  EXPECT_TRUE(verify_slot_usage(tree, colors, 3, 1, {{3, {0}}}));
}

TEST(SlotUsage, NeighborsNeverShareASlot) {
  const auto tree = testing::path(4);
  const std::vector<ColorSet> colors{{0}, {1}, {2}, {0}};
  for (const auto& round : slot_schedule(colors, 3, 0, 6)) {
    for (Vertex a : round.senders) {
      for (Vertex b : round.senders) EXPECT_FALSE(tree.adjacent(a, b));
    }
  }
  EXPECT_TRUE(verify_slot_usage(tree, colors, 3, 1, slot_schedule(colors, 3, 0, 6)));
}

TEST(Distance2Predicate, Examples) {
  EXPECT_TRUE(is_distance2_coloring(testing::path(4), {0, 1, 2, 0}));
  EXPECT_FALSE(is_distance2_coloring(testing::path(4), {0, 1, 0, 2}));
  EXPECT_TRUE(satisfies_closed_neighborhood_bound(testing::path(3), {0, 0, 1}, 2));
  EXPECT_FALSE(satisfies_closed_neighborhood_bound(testing::path(3), {0, 0, 0}, 2));
}

TEST(ColoringJson, RoundTrip) {
  const auto tree = load_tree("5 3\n3 9\n");
  ColoringDocument doc{2, 3, {{0}, {1, 2}, {0}}, std::vector<std::uint32_t>{3, 3, 3}};
  const auto text = coloring_to_json(tree, doc);
  const auto back = coloring_from_json(tree, text);
  EXPECT_EQ(back.colors, doc.colors);
  EXPECT_EQ(back.m, 2u);
  EXPECT_EQ(back.k, 3u);
  EXPECT_EQ(coloring_to_json(tree, {back.m, back.k, back.colors, doc.ak}), text);
}

TEST(ColoringJson, MissingNodeAndBadKey) {
  const auto tree = testing::path(2);
  try {
    coloring_from_json(tree, R"({"colors":{"0":[1]}})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingNode);
  }
  try {
    coloring_from_json(tree, R"({"colors":{"zero":[1],"1":[0]}})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
  }
}

}  // namespace
}  // namespace ccmc
