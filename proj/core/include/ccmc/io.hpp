#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccmc/oracle.hpp"
#include "ccmc/tree.hpp"
#include "ccmc/types.hpp"
#include "ccmc/verifier.hpp"

namespace ccmc {

struct ColoringDocument {
  std::uint32_t m = 1;
  std::uint32_t k = 0;
  std::vector<ColorSet> colors;  // indexed by vertex
  // Per-vertex ak at the end of a run with K dissemination.
  std::optional<std::vector<std::uint32_t>> ak;
};

// {"m": .., "K": .., "colors": {"label": [..]}} with keys in label order, plus
// "ak" when present. Output is deterministic.
std::string coloring_to_json(const TreeNetwork& tree, const ColoringDocument& doc);
// Throws kParseError, kUnknownNode, kMissingNode.
ColoringDocument coloring_from_json(const TreeNetwork& tree, std::string_view text);

// Integer colorings ({"colors": {"label": c}}) for the distance-2 reduction.
std::string int_coloring_to_json(const TreeNetwork& tree, const std::vector<Color>& coloring,
                                 std::uint32_t k, std::uint32_t m);
std::vector<Color> int_coloring_from_json(const TreeNetwork& tree, std::string_view text);

std::string report_to_json(const VerificationReport& report);
std::string report_to_json(const TraceReport& report);
std::string verdict_to_json(const TreeNetwork& tree, const FeasibilityVerdict& verdict);

}  // namespace ccmc
