#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ccmc/tree.hpp"
#include "ccmc/types.hpp"

namespace ccmc {

// Centralized reference algorithms. All functions are pure.

// No coloring with fewer than ceil(delta / m) + 1 colors exists; returns that value.
std::uint32_t lower_bound_k(const TreeNetwork& tree, std::uint32_t m);

// Sequential depth-first coloring with K = ceil(delta / m) + 1 colors and one
// color per node. The root gets 0; every node hands its children the smallest
// tokens of a pool holding m tokens per color other than its own and its
// parent's, plus m - 1 tokens of the parent's color. Throws kUnknownRoot.
std::vector<ColorSet> df_mcoloring(const TreeNetwork& tree, Vertex root, std::uint32_t m);

struct FeasibilityVerdict {
  bool feasible = false;
  std::optional<Vertex> witness;
  // Per vertex: max({ceil(d_i / m)} u {floor(d_j / m) : j neighbor of i}) + 1.
  std::vector<std::uint32_t> predicate_values;
  std::uint32_t k = 0;
};

// Whether some node can hold two colors while K stays ceil(delta / m) + 1:
// true iff K exceeds predicate_values[i] for some i. The witness is the first
// such vertex.
FeasibilityVerdict multicolor_feasible(const TreeNetwork& tree, std::uint32_t m);

// Adds color K - 1 to the witness of a coloring produced by df_mcoloring
// rooted at that witness. Throws kPredicateNotSatisfied.
std::vector<ColorSet> augment_witness(const TreeNetwork& tree, std::vector<ColorSet> coloring,
                                      Vertex witness, std::uint32_t m);

enum class SearchMode {
  kSingleton,     // every node holds exactly one color
  kOneMulti,      // exactly one node holds two colors, the rest one
  kUnrestricted,  // any non-empty sets, at least one node with two or more
};

inline constexpr std::size_t kDefaultBruteForceCap = 9;
inline constexpr std::size_t kUnrestrictedCap = 6;

// Exhaustive search for a valid coloring with colors in [0, k).
// Throws kInstanceTooLarge past the cap for the mode.
bool coloring_exists(const TreeNetwork& tree, std::uint32_t m, std::uint32_t k, SearchMode mode,
                     std::size_t cap = kDefaultBruteForceCap);

// Smallest K admitting a valid singleton coloring (multi = false) or a valid
// coloring where one node holds two colors (multi = true).
std::uint32_t brute_force_min_k(const TreeNetwork& tree, std::uint32_t m, bool multi,
                                std::size_t cap = kDefaultBruteForceCap);

// Greedy distance-2 coloring in BFS order from vertex 0: each vertex takes the
// smallest color unused within two hops.
std::vector<Color> greedy_distance2_coloring(const TreeNetwork& tree);

// Calls `visit` with every distance-2 coloring using colors in [0, colors).
// Returns the number visited.
std::size_t enumerate_distance2_colorings(const TreeNetwork& tree, std::uint32_t colors,
                                          const std::function<void(const std::vector<Color>&)>& visit);

// col'(x) = col(x) mod K for a distance-2 coloring with K * m colors.
// Throws kInvalidDistance2Input.
std::vector<Color> distance2_to_ccmc(const TreeNetwork& tree, const std::vector<Color>& coloring,
                                     std::uint32_t k, std::uint32_t m);

}  // namespace ccmc
