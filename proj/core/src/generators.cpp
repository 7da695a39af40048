#include "ccmc/generators.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "ccmc/errors.hpp"
#include "ccmc/rng.hpp"

namespace ccmc {

namespace {

using EdgeList = std::vector<TreeNetwork::LabeledEdge>;

TreeNetwork from_parents(std::size_t n, const std::vector<std::size_t>& parent) {
  std::vector<NodeLabel> labels(n);
  EdgeList edges;
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = i;
    if (i > 0) edges.emplace_back(parent[i], i);
  }
  return TreeNetwork::build(std::move(labels), edges);
}

TreeNetwork prufer_tree(std::size_t n, Rng& rng) {
  std::vector<NodeLabel> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i;
  EdgeList edges;
  if (n == 2) edges.emplace_back(0, 1);
  if (n <= 2) return TreeNetwork::build(std::move(labels), edges);

  std::vector<std::size_t> code(n - 2);
  for (auto& c : code) c = rng.below(n);
  std::vector<std::size_t> degree(n, 1);
  for (auto c : code) ++degree[c];
  std::set<std::size_t> leaves;
  for (std::size_t v = 0; v < n; ++v) {
    if (degree[v] == 1) leaves.insert(v);
  }
  for (auto c : code) {
    const std::size_t leaf = *leaves.begin();
    leaves.erase(leaves.begin());
    edges.emplace_back(leaf, c);
    if (--degree[c] == 1) leaves.insert(c);
  }
  const std::size_t a = *leaves.begin();
  const std::size_t b = *std::next(leaves.begin());
  edges.emplace_back(a, b);
  return TreeNetwork::build(std::move(labels), edges);
}

std::string ahu(const TreeNetwork& tree, Vertex v, Vertex parent) {
  std::vector<std::string> parts;
  for (Vertex w : tree.neighbors(v)) {
    if (w != parent) parts.push_back(ahu(tree, w, v));
  }
  std::sort(parts.begin(), parts.end());
  std::string out = "(";
  for (const auto& p : parts) out += p;
  out += ")";
  return out;
}

std::vector<Vertex> centers(const TreeNetwork& tree) {
  const std::size_t n = tree.size();
  if (n <= 2) {
    std::vector<Vertex> all(n);
    for (Vertex v = 0; v < n; ++v) all[v] = v;
    return all;
  }
  std::vector<std::size_t> degree(n);
  std::vector<Vertex> layer;
  for (Vertex v = 0; v < n; ++v) {
    degree[v] = tree.degree(v);
    if (degree[v] == 1) layer.push_back(v);
  }
  std::size_t remaining = n;
  while (remaining > 2) {
    remaining -= layer.size();
    std::vector<Vertex> next;
    for (Vertex leaf : layer) {
      for (Vertex w : tree.neighbors(leaf)) {
        if (--degree[w] == 1) next.push_back(w);
      }
    }
    layer = std::move(next);
  }
  std::sort(layer.begin(), layer.end());
  return layer;
}

}  // namespace

std::string_view to_string(TreeKind kind) {
  switch (kind) {
    case TreeKind::kRandom: return "random";
    case TreeKind::kStar: return "star";
    case TreeKind::kPath: return "path";
    case TreeKind::kCaterpillar: return "caterpillar";
    case TreeKind::kBalanced: return "balanced";
  }
  return "unknown";
}

TreeKind parse_tree_kind(std::string_view text) {
  for (auto kind : {TreeKind::kRandom, TreeKind::kStar, TreeKind::kPath,
                    TreeKind::kCaterpillar, TreeKind::kBalanced}) {
    if (to_string(kind) == text) return kind;
  }
  throw Error(ErrorCode::kInvalidParameters, "unknown tree kind: " + std::string(text));
}

GeneratorSpec GeneratorSpec::parse(std::string_view text) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto colon = text.find(':');
    parts.push_back(text.substr(0, colon));
    if (colon == std::string_view::npos) break;
    text.remove_prefix(colon + 1);
  }
  if (parts.size() < 2 || parts.size() > 3) {
    throw Error(ErrorCode::kInvalidParameters, "generator spec must be kind:n[:param]");
  }
  auto number = [](std::string_view s) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw Error(ErrorCode::kInvalidParameters, "not a number: " + std::string(s));
    }
    return value;
  };
  GeneratorSpec spec;
  spec.kind = parse_tree_kind(parts[0]);
  spec.n = number(parts[1]);
  if (parts.size() == 3) spec.param = static_cast<std::uint32_t>(number(parts[2]));
  return spec;
}

std::string GeneratorSpec::str() const {
  std::string out = std::string(to_string(kind)) + ":" + std::to_string(n);
  if (param != 0) out += ":" + std::to_string(param);
  return out;
}

TreeNetwork generate_tree(TreeKind kind, std::size_t n, std::uint64_t seed,
                          std::uint32_t param) {
  if (n == 0) throw Error(ErrorCode::kInvalidParameters, "n must be at least 1");
  Rng rng(seed);
  std::vector<std::size_t> parent(n, 0);
  switch (kind) {
    case TreeKind::kRandom:
      return prufer_tree(n, rng);
    case TreeKind::kStar:
      return from_parents(n, parent);
    case TreeKind::kPath:
      for (std::size_t i = 1; i < n; ++i) parent[i] = i - 1;
      return from_parents(n, parent);
    case TreeKind::kBalanced: {
      const std::size_t arity = param == 0 ? 2 : param;
      for (std::size_t i = 1; i < n; ++i) parent[i] = (i - 1) / arity;
      return from_parents(n, parent);
    }
    case TreeKind::kCaterpillar: {
      std::size_t spine = param;
      if (spine == 0) spine = 1 + rng.below(std::max<std::size_t>(1, n / 3));
      spine = std::min(spine, n);
      for (std::size_t i = 1; i < spine; ++i) parent[i] = i - 1;
      for (std::size_t i = spine; i < n; ++i) parent[i] = rng.below(spine);
      return from_parents(n, parent);
    }
  }
  throw Error(ErrorCode::kInvalidParameters, "unknown tree kind");
}

TreeNetwork generate_tree(const GeneratorSpec& spec, std::uint64_t seed) {
  return generate_tree(spec.kind, spec.n, seed, spec.param);
}

std::string canonical_form(const TreeNetwork& tree) {
  std::string best;
  for (Vertex c : centers(tree)) {
    auto form = ahu(tree, c, c);
    if (best.empty() || form < best) best = std::move(form);
  }
  return best;
}

std::vector<TreeNetwork> enumerate_free_trees(std::size_t n) {
  if (n == 0) return {};
  // Grow every tree of size k into all trees of size k + 1 by hanging a new
  // leaf on each vertex, keeping one representative per canonical form.
  std::vector<std::vector<std::size_t>> layer{{0}};  // parent arrays
  for (std::size_t size = 1; size < n; ++size) {
    std::set<std::string> seen;
    std::vector<std::vector<std::size_t>> next;
    for (const auto& parents : layer) {
      for (std::size_t attach = 0; attach < size; ++attach) {
        auto grown = parents;
        grown.push_back(attach);
        const auto form = canonical_form(from_parents(size + 1, grown));
        if (seen.insert(form).second) next.push_back(std::move(grown));
      }
    }
    layer = std::move(next);
  }
  std::vector<TreeNetwork> out;
  out.reserve(layer.size());
  for (const auto& parents : layer) out.push_back(from_parents(n, parents));
  return out;
}

}  // namespace ccmc
