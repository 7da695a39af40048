#include "ccmc/tree.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "ccmc/errors.hpp"

namespace ccmc {

namespace {

using nlohmann::json;

std::string describe_edge(NodeLabel a, NodeLabel b) {
  std::ostringstream os;
  os << "(" << a << "," << b << ")";
  return os.str();
}

}  // namespace

TreeNetwork TreeNetwork::build(std::vector<NodeLabel> labels,
                               const std::vector<LabeledEdge>& edges,
                               const std::map<NodeLabel, std::uint64_t>& identities) {
  if (labels.empty()) {
    throw Error(ErrorCode::kInvalidParameters, "a tree needs at least one node");
  }
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
    throw Error(ErrorCode::kInvalidParameters, "node list contains duplicates");
  }

  TreeNetwork tree;
  tree.labels_ = std::move(labels);
  const std::size_t n = tree.labels_.size();
  tree.ids_.resize(n);
  tree.adjacency_.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    tree.by_label_.emplace(tree.labels_[v], v);
    tree.ids_[v] = NodeId{tree.labels_[v]};
  }
  for (const auto& [label, id] : identities) {
    tree.ids_[tree.vertex(label)] = NodeId{id};
    tree.custom_ids_ = true;
  }

  std::set<std::pair<Vertex, Vertex>> seen;
  for (const auto& [a, b] : edges) {
    const Vertex u = tree.vertex(a);
    const Vertex v = tree.vertex(b);
    if (u == v) {
      throw Error(ErrorCode::kNotATree, "self-loop at " + std::to_string(a));
    }
    if (!seen.emplace(std::min(u, v), std::max(u, v)).second) {
      throw Error(ErrorCode::kDuplicateEdge, describe_edge(a, b));
    }
    tree.adjacency_[u].push_back(v);
    tree.adjacency_[v].push_back(u);
  }
  if (seen.size() != n - 1) {
    throw Error(ErrorCode::kNotATree, std::to_string(n) + " nodes but " +
                                          std::to_string(seen.size()) + " edges");
  }

  // n - 1 edges plus connectivity implies acyclicity.
  std::vector<bool> reached(n, false);
  std::queue<Vertex> frontier;
  frontier.push(0);
  reached[0] = true;
  std::size_t count = 1;
  while (!frontier.empty()) {
    const Vertex u = frontier.front();
    frontier.pop();
    for (Vertex w : tree.adjacency_[u]) {
      if (!reached[w]) {
        reached[w] = true;
        ++count;
        frontier.push(w);
      }
    }
  }
  if (count != n) {
    throw Error(ErrorCode::kNotATree, "graph is disconnected");
  }

  // Any two vertices within distance two lie in a common closed neighborhood.
  for (Vertex v = 0; v < n; ++v) {
    std::vector<NodeId> ball{tree.ids_[v]};
    for (Vertex w : tree.adjacency_[v]) ball.push_back(tree.ids_[w]);
    std::sort(ball.begin(), ball.end());
    if (auto it = std::adjacent_find(ball.begin(), ball.end()); it != ball.end()) {
      throw Error(ErrorCode::kDistance2Violation,
                  "identity " + std::to_string(it->value) + " repeats around node " +
                      std::to_string(tree.labels_[v]));
    }
  }

  for (auto& list : tree.adjacency_) {
    std::sort(list.begin(), list.end(), [&](Vertex a, Vertex b) {
      return tree.ids_[a] < tree.ids_[b];
    });
    tree.max_degree_ = std::max(tree.max_degree_, list.size());
  }
  return tree;
}

std::optional<Vertex> TreeNetwork::find(NodeLabel label) const {
  auto it = by_label_.find(label);
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

Vertex TreeNetwork::vertex(NodeLabel label) const {
  if (auto v = find(label)) return *v;
  throw Error(ErrorCode::kUnknownNode, "no node labelled " + std::to_string(label));
}

bool TreeNetwork::adjacent(Vertex a, Vertex b) const {
  const auto& list = adjacency_.at(a);
  return std::find(list.begin(), list.end(), b) != list.end();
}

std::vector<std::pair<Vertex, Vertex>> TreeNetwork::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(edge_count());
  for (Vertex u = 0; u < size(); ++u) {
    for (Vertex w : adjacency_[u]) {
      if (u < w) out.emplace_back(u, w);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Vertex TreeNetwork::max_degree_vertex() const {
  Vertex best = 0;
  for (Vertex v = 1; v < size(); ++v) {
    // Vertices are sorted by label, so strict comparison keeps the smallest.
    if (degree(v) > degree(best)) best = v;
  }
  return best;
}

std::vector<std::size_t> TreeNetwork::depths_from(Vertex root) const {
  std::vector<std::size_t> depth(size(), 0);
  std::vector<bool> seen(size(), false);
  std::queue<Vertex> frontier;
  frontier.push(root);
  seen.at(root) = true;
  while (!frontier.empty()) {
    const Vertex u = frontier.front();
    frontier.pop();
    for (Vertex w : adjacency_[u]) {
      if (!seen[w]) {
        seen[w] = true;
        depth[w] = depth[u] + 1;
        frontier.push(w);
      }
    }
  }
  return depth;
}

std::size_t TreeNetwork::height_from(Vertex root) const {
  const auto depth = depths_from(root);
  return *std::max_element(depth.begin(), depth.end());
}

std::size_t TreeNetwork::leaf_count_from(Vertex root) const {
  if (size() == 1) return 1;
  std::size_t leaves = 0;
  for (Vertex v = 0; v < size(); ++v) {
    if (v != root && degree(v) == 1) ++leaves;
  }
  return leaves;
}

std::uint32_t star_constant(std::size_t degree, std::uint32_t m) {
  if (m == 0) throw Error(ErrorCode::kInvalidParameters, "m must be positive");
  return ceil_div(degree, m) + 1;
}

std::uint32_t sigma(const TreeNetwork& tree, NodeLabel node, std::uint32_t m) {
  return star_constant(tree.degree(tree.vertex(node)), m);
}

std::uint32_t optimal_k(const TreeNetwork& tree, std::uint32_t m) {
  return star_constant(tree.max_degree(), m);
}

namespace {

TreeNetwork load_json(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  try {
    std::vector<TreeNetwork::LabeledEdge> edges;
    std::set<NodeLabel> labels;
    for (const auto& e : doc.value("edges", json::array())) {
      if (!e.is_array() || e.size() != 2) {
        throw Error(ErrorCode::kParseError, "edge entries must be [u, v] pairs");
      }
      edges.emplace_back(e[0].get<NodeLabel>(), e[1].get<NodeLabel>());
    }
    std::vector<NodeLabel> node_list;
    if (doc.contains("nodes")) {
      node_list = doc.at("nodes").get<std::vector<NodeLabel>>();
    } else {
      for (const auto& [a, b] : edges) {
        labels.insert(a);
        labels.insert(b);
      }
      node_list.assign(labels.begin(), labels.end());
    }
    std::map<NodeLabel, std::uint64_t> identities;
    if (doc.contains("ids")) {
      for (const auto& [key, value] : doc.at("ids").items()) {
        identities[std::stoull(key)] = value.get<std::uint64_t>();
      }
    }
    return TreeNetwork::build(std::move(node_list), edges, identities);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

TreeNetwork load_edge_list(std::string_view document) {
  std::istringstream in{std::string(document)};
  std::string line;
  std::set<NodeLabel> labels;
  std::vector<TreeNetwork::LabeledEdge> edges;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<NodeLabel> values;
    std::string token;
    while (fields >> token) {
      try {
        std::size_t used = 0;
        values.push_back(std::stoull(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw Error(ErrorCode::kParseError,
                    "line " + std::to_string(line_no) + ": not an integer: " + token);
      }
    }
    if (values.empty()) continue;
    if (values.size() > 2) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": expected \"u v\"");
    }
    labels.insert(values.begin(), values.end());
    if (values.size() == 2) edges.emplace_back(values[0], values[1]);
  }
  return TreeNetwork::build({labels.begin(), labels.end()}, edges);
}

}  // namespace

TreeNetwork load_tree(std::string_view document) {
  const auto first = document.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && document[first] == '{') {
    return load_json(document);
  }
  return load_edge_list(document);
}

TreeNetwork load_tree_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kParseError, "cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_tree(buffer.str());
}

std::string to_json(const TreeNetwork& tree) {
  json doc;
  doc["nodes"] = json::array();
  for (Vertex v = 0; v < tree.size(); ++v) doc["nodes"].push_back(tree.label(v));
  doc["edges"] = json::array();
  for (const auto& [u, w] : tree.edges()) {
    doc["edges"].push_back({tree.label(u), tree.label(w)});
  }
  if (tree.has_custom_identities()) {
    json ids = json::object();
    for (Vertex v = 0; v < tree.size(); ++v) {
      if (tree.identity(v).value != tree.label(v)) {
        ids[std::to_string(tree.label(v))] = tree.identity(v).value;
      }
    }
    doc["ids"] = ids;
  }
  return doc.dump();
}

std::string to_dot(const TreeNetwork& tree, const std::vector<ColorSet>* colors) {
  std::ostringstream os;
  os << "graph tree {\n";
  for (Vertex v = 0; v < tree.size(); ++v) {
    os << "  n" << tree.label(v) << " [label=\"" << tree.label(v);
    if (tree.identity(v).value != tree.label(v)) os << " (id " << tree.identity(v) << ")";
    if (colors != nullptr && v < colors->size()) {
      os << "\\n{";
      bool first = true;
      for (Color c : (*colors)[v]) {
        os << (first ? "" : ",") << c;
        first = false;
      }
      os << "}";
    }
    os << "\"];\n";
  }
  for (const auto& [u, w] : tree.edges()) {
    os << "  n" << tree.label(u) << " -- n" << tree.label(w) << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace ccmc
