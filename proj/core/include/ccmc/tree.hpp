#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ccmc/types.hpp"

namespace ccmc {

// Immutable, validated tree topology.
//
// Vertices are addressed by a dense index. Each one carries the label it had
// in the source document and a protocol identity (equal to the label unless
// the document overrides it). Neighbor lists are sorted by identity so every
// downstream iteration is deterministic.
class TreeNetwork {
 public:
  using LabeledEdge = std::pair<NodeLabel, NodeLabel>;

  // Validates and builds a tree. `identities` may remap labels to protocol
  // identities; labels not mentioned keep their own value as identity.
  // Throws Error with kInvalidParameters, kUnknownNode, kDuplicateEdge,
  // kNotATree or kDistance2Violation.
  static TreeNetwork build(std::vector<NodeLabel> labels,
                           const std::vector<LabeledEdge>& edges,
                           const std::map<NodeLabel, std::uint64_t>& identities = {});

  std::size_t size() const { return labels_.size(); }
  std::size_t edge_count() const { return size() - 1; }

  NodeLabel label(Vertex v) const { return labels_.at(v); }
  NodeId identity(Vertex v) const { return ids_.at(v); }
  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_.at(v); }
  std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }
  std::size_t max_degree() const { return max_degree_; }

  std::optional<Vertex> find(NodeLabel label) const;
  // Throws kUnknownNode.
  Vertex vertex(NodeLabel label) const;
  bool adjacent(Vertex a, Vertex b) const;

  // Edges as (smaller index, larger index), sorted.
  std::vector<std::pair<Vertex, Vertex>> edges() const;

  // Highest-degree vertex, smallest label on ties.
  Vertex max_degree_vertex() const;

  // Hop distance from `root` to every vertex.
  std::vector<std::size_t> depths_from(Vertex root) const;
  std::size_t height_from(Vertex root) const;
  // Vertices without children when the tree hangs from `root`.
  std::size_t leaf_count_from(Vertex root) const;

  bool has_custom_identities() const { return custom_ids_; }

 private:
  std::vector<NodeLabel> labels_;
  std::vector<NodeId> ids_;
  std::vector<std::vector<Vertex>> adjacency_;
  std::map<NodeLabel, Vertex> by_label_;
  std::size_t max_degree_ = 0;
  bool custom_ids_ = false;
};

// sigma = ceil(degree / m) + 1, the number of colors a star of that degree needs.
std::uint32_t star_constant(std::size_t degree, std::uint32_t m);
// Throws kUnknownNode, kInvalidParameters (m == 0).
std::uint32_t sigma(const TreeNetwork& tree, NodeLabel node, std::uint32_t m);
// ceil(max_degree / m) + 1.
std::uint32_t optimal_k(const TreeNetwork& tree, std::uint32_t m);

// Accepts the JSON document {"nodes": [...], "edges": [[u, v], ...],
// "ids": {"label": identity}} ("nodes" and "ids" optional) or a plain-text edge
// list with one "u v" pair per line. A line with a single integer declares an
// isolated node; '#' starts a comment.
TreeNetwork load_tree(std::string_view document);
TreeNetwork load_tree_file(const std::filesystem::path& path);

// Canonical JSON serialization (labels sorted, edges sorted).
std::string to_json(const TreeNetwork& tree);
// Graphviz export; colors (indexed by vertex) are added as node labels when given.
std::string to_dot(const TreeNetwork& tree, const std::vector<ColorSet>* colors = nullptr);

}  // namespace ccmc
