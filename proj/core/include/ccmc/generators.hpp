#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ccmc/tree.hpp"

namespace ccmc {

enum class TreeKind { kRandom, kStar, kPath, kCaterpillar, kBalanced };

std::string_view to_string(TreeKind kind);
TreeKind parse_tree_kind(std::string_view text);

// A generator request as written on the command line: "kind:n" or
// "kind:n:param". The param is the arity for balanced trees and the spine
// length for caterpillars; other kinds ignore it.
struct GeneratorSpec {
  TreeKind kind = TreeKind::kRandom;
  std::size_t n = 1;
  std::uint32_t param = 0;

  static GeneratorSpec parse(std::string_view text);
  std::string str() const;
};

// Deterministic for fixed (kind, n, param, seed). Labels are 0..n-1 and serve
// as globally unique identities. Throws kInvalidParameters when n == 0.
TreeNetwork generate_tree(TreeKind kind, std::size_t n, std::uint64_t seed,
                          std::uint32_t param = 0);
TreeNetwork generate_tree(const GeneratorSpec& spec, std::uint64_t seed);

// One representative of every unlabeled tree on n vertices, in a fixed order.
std::vector<TreeNetwork> enumerate_free_trees(std::size_t n);

// Isomorphism-invariant string for a tree (AHU encoding rooted at the center).
std::string canonical_form(const TreeNetwork& tree);

}  // namespace ccmc
