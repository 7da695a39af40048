#include "ccmc/oracle.hpp"

#include <algorithm>
#include <bit>
#include <queue>

#include "ccmc/errors.hpp"

namespace ccmc {

namespace {

std::vector<Vertex> bfs_order(const TreeNetwork& tree, Vertex root) {
  std::vector<Vertex> order{root};
  std::vector<bool> seen(tree.size(), false);
  seen[root] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (Vertex w : tree.neighbors(order[i])) {
      if (!seen[w]) {
        seen[w] = true;
        order.push_back(w);
      }
    }
  }
  return order;
}

// Vertices within two hops of each vertex, excluding itself.
std::vector<std::vector<Vertex>> two_hop_balls(const TreeNetwork& tree) {
  std::vector<std::vector<Vertex>> balls(tree.size());
  for (Vertex v = 0; v < tree.size(); ++v) {
    std::set<Vertex> ball;
    for (Vertex w : tree.neighbors(v)) {
      ball.insert(w);
      for (Vertex x : tree.neighbors(w)) {
        if (x != v) ball.insert(x);
      }
    }
    balls[v].assign(ball.begin(), ball.end());
  }
  return balls;
}

using Mask = std::uint32_t;

class ColoringSearch {
 public:
  ColoringSearch(const TreeNetwork& tree, std::uint32_t m, std::uint32_t k)
      : tree_(tree),
        m_(m),
        k_(k),
        order_(bfs_order(tree, 0)),
        mask_(tree.size(), 0),
        count_(tree.size(), std::vector<std::uint32_t>(k, 0)) {}

  // candidates[v] lists the masks vertex v may take.
  bool solve(const std::vector<std::vector<Mask>>& candidates, bool need_multi) {
    candidates_ = &candidates;
    need_multi_ = need_multi;
    return place(0);
  }

 private:
  bool fits(Vertex v, Mask mask) const {
    for (Vertex w : tree_.neighbors(v)) {
      if (mask_[w] & mask) return false;
      for (Mask rest = mask; rest != 0; rest &= rest - 1) {
        if (count_[w][std::countr_zero(rest)] + 1 > m_) return false;
      }
    }
    return true;
  }

  void apply(Vertex v, Mask mask, int delta) {
    mask_[v] = delta > 0 ? mask : 0;
    for (Vertex w : tree_.neighbors(v)) {
      for (Mask rest = mask; rest != 0; rest &= rest - 1) {
        count_[w][std::countr_zero(rest)] += delta;
      }
    }
  }

  bool place(std::size_t index) {
    if (index == order_.size()) {
      if (!need_multi_) return true;
      return std::any_of(mask_.begin(), mask_.end(), [](Mask m) { return std::popcount(m) >= 2; });
    }
    const Vertex v = order_[index];
    for (Mask mask : (*candidates_)[v]) {
      if (!fits(v, mask)) continue;
      apply(v, mask, +1);
      if (place(index + 1)) return true;
      apply(v, mask, -1);
    }
    return false;
  }

  const TreeNetwork& tree_;
  std::uint32_t m_;
  std::uint32_t k_;
  std::vector<Vertex> order_;
  std::vector<Mask> mask_;
  std::vector<std::vector<std::uint32_t>> count_;
  const std::vector<std::vector<Mask>>* candidates_ = nullptr;
  bool need_multi_ = false;
};

std::vector<Mask> singletons(std::uint32_t k) {
  std::vector<Mask> out;
  for (std::uint32_t c = 0; c < k; ++c) out.push_back(Mask{1} << c);
  return out;
}

std::vector<Mask> pairs(std::uint32_t k) {
  std::vector<Mask> out;
  for (std::uint32_t a = 0; a < k; ++a) {
    for (std::uint32_t b = a + 1; b < k; ++b) out.push_back((Mask{1} << a) | (Mask{1} << b));
  }
  return out;
}

}  // namespace

std::uint32_t lower_bound_k(const TreeNetwork& tree, std::uint32_t m) {
  return optimal_k(tree, m);
}

std::vector<ColorSet> df_mcoloring(const TreeNetwork& tree, Vertex root, std::uint32_t m) {
  if (root >= tree.size()) throw Error(ErrorCode::kUnknownRoot, "root vertex out of range");
  const std::uint32_t k = optimal_k(tree, m);
  std::vector<std::optional<Color>> color(tree.size());
  std::vector<std::optional<Vertex>> parent(tree.size());
  color[root] = 0;

  // Each node's pool depends only on its own and its parent's color, so a
  // breadth-first visit assigns exactly what the depth-first recursion would.
  for (Vertex j : bfs_order(tree, root)) {
    const Color own = *color[j];
    const bool has_up = parent[j].has_value();
    const Color up = has_up ? *color[*parent[j]] : 0;
    std::vector<Color> pool;
    for (Color c = 0; c < k; ++c) {
      if (c == own) continue;
      const std::uint32_t copies = (has_up && c == up) ? m - 1 : m;
      pool.insert(pool.end(), copies, c);
    }
    std::size_t next = 0;
    for (Vertex child : tree.neighbors(j)) {
      if (parent[j] && child == *parent[j]) continue;
      if (next == pool.size()) {
        throw Error(ErrorCode::kInvariantBroken, "token pool exhausted at vertex " +
                                                     std::to_string(tree.label(j)));
      }
      parent[child] = j;
      color[child] = pool[next++];
    }
  }

  std::vector<ColorSet> out(tree.size());
  for (Vertex v = 0; v < tree.size(); ++v) out[v] = {*color[v]};
  return out;
}

FeasibilityVerdict multicolor_feasible(const TreeNetwork& tree, std::uint32_t m) {
  FeasibilityVerdict verdict;
  verdict.k = optimal_k(tree, m);
  verdict.predicate_values.resize(tree.size());
  for (Vertex i = 0; i < tree.size(); ++i) {
    std::uint32_t worst = ceil_div(tree.degree(i), m);
    for (Vertex j : tree.neighbors(i)) {
      worst = std::max(worst, static_cast<std::uint32_t>(tree.degree(j) / m));
    }
    verdict.predicate_values[i] = worst + 1;
    if (!verdict.feasible && verdict.k > worst + 1) {
      verdict.feasible = true;
      verdict.witness = i;
    }
  }
  return verdict;
}

std::vector<ColorSet> augment_witness(const TreeNetwork& tree, std::vector<ColorSet> coloring,
                                      Vertex witness, std::uint32_t m) {
  const auto verdict = multicolor_feasible(tree, m);
  if (witness >= tree.size() || verdict.k <= verdict.predicate_values[witness]) {
    throw Error(ErrorCode::kPredicateNotSatisfied,
                "vertex cannot hold a second color with K = " + std::to_string(verdict.k));
  }
  coloring.at(witness).insert(verdict.k - 1);
  return coloring;
}

bool coloring_exists(const TreeNetwork& tree, std::uint32_t m, std::uint32_t k, SearchMode mode,
                     std::size_t cap) {
  if (mode == SearchMode::kUnrestricted) cap = std::min(cap, kUnrestrictedCap);
  if (tree.size() > cap) {
    throw Error(ErrorCode::kInstanceTooLarge, std::to_string(tree.size()) + " nodes exceeds cap " +
                                                  std::to_string(cap));
  }
  if (m == 0 || k > 24) throw Error(ErrorCode::kInvalidParameters, "need m >= 1 and k <= 24");
  if (k == 0) return false;

  ColoringSearch search(tree, m, k);
  const std::size_t n = tree.size();
  switch (mode) {
    case SearchMode::kSingleton: {
      std::vector<std::vector<Mask>> candidates(n, singletons(k));
      candidates[0] = {Mask{1}};  // colors are interchangeable
      return search.solve(candidates, false);
    }
    case SearchMode::kOneMulti: {
      for (Vertex multi = 0; multi < n; ++multi) {
        std::vector<std::vector<Mask>> candidates(n, singletons(k));
        candidates[multi] = pairs(k);
        if (search.solve(candidates, true)) return true;
      }
      return false;
    }
    case SearchMode::kUnrestricted: {
      std::vector<Mask> all;
      for (Mask mask = 1; mask < (Mask{1} << k); ++mask) all.push_back(mask);
      std::vector<std::vector<Mask>> candidates(n, all);
      return search.solve(candidates, true);
    }
  }
  return false;
}

std::uint32_t brute_force_min_k(const TreeNetwork& tree, std::uint32_t m, bool multi,
                                std::size_t cap) {
  if (tree.size() > cap) {
    throw Error(ErrorCode::kInstanceTooLarge, std::to_string(tree.size()) + " nodes exceeds cap " +
                                                  std::to_string(cap));
  }
  // Past the bound plus one a second color is always free, so stop there.
  const std::uint32_t limit = optimal_k(tree, m) + 1;
  const auto mode = multi ? SearchMode::kOneMulti : SearchMode::kSingleton;
  for (std::uint32_t k = 1; k <= limit; ++k) {
    if (coloring_exists(tree, m, k, mode, cap)) return k;
  }
  throw Error(ErrorCode::kInvariantBroken, "no coloring found up to K = " + std::to_string(limit));
}

std::vector<Color> greedy_distance2_coloring(const TreeNetwork& tree) {
  const auto balls = two_hop_balls(tree);
  std::vector<std::optional<Color>> color(tree.size());
  for (Vertex v : bfs_order(tree, 0)) {
    std::set<Color> taken;
    for (Vertex w : balls[v]) {
      if (color[w]) taken.insert(*color[w]);
    }
    Color c = 0;
    while (taken.contains(c)) ++c;
    color[v] = c;
  }
  std::vector<Color> out(tree.size());
  for (Vertex v = 0; v < tree.size(); ++v) out[v] = *color[v];
  return out;
}

std::size_t enumerate_distance2_colorings(const TreeNetwork& tree, std::uint32_t colors,
                                          const std::function<void(const std::vector<Color>&)>& visit) {
  const auto balls = two_hop_balls(tree);
  const auto order = bfs_order(tree, 0);
  std::vector<Color> current(tree.size(), 0);
  std::vector<bool> assigned(tree.size(), false);
  std::size_t found = 0;
  std::function<void(std::size_t)> place = [&](std::size_t index) {
    if (index == order.size()) {
      ++found;
      visit(current);
      return;
    }
    const Vertex v = order[index];
    for (Color c = 0; c < colors; ++c) {
      bool clash = false;
      for (Vertex w : balls[v]) {
        if (assigned[w] && current[w] == c) {
          clash = true;
          break;
        }
      }
      if (clash) continue;
      current[v] = c;
      assigned[v] = true;
      place(index + 1);
      assigned[v] = false;
    }
  };
  place(0);
  return found;
}

std::vector<Color> distance2_to_ccmc(const TreeNetwork& tree, const std::vector<Color>& coloring,
                                     std::uint32_t k, std::uint32_t m) {
  if (k == 0 || m == 0) throw Error(ErrorCode::kInvalidParameters, "K and m must be positive");
  if (coloring.size() != tree.size()) {
    throw Error(ErrorCode::kInvalidDistance2Input, "coloring size differs from node count");
  }
  const std::uint64_t domain = static_cast<std::uint64_t>(k) * m;
  const auto balls = two_hop_balls(tree);
  for (Vertex v = 0; v < tree.size(); ++v) {
    if (coloring[v] >= domain) {
      throw Error(ErrorCode::kInvalidDistance2Input,
                  "color " + std::to_string(coloring[v]) + " outside [0.." + std::to_string(domain) + ")");
    }
    for (Vertex w : balls[v]) {
      if (coloring[w] == coloring[v]) {
        throw Error(ErrorCode::kInvalidDistance2Input,
                    "nodes " + std::to_string(tree.label(v)) + " and " +
                        std::to_string(tree.label(w)) + " share color within two hops");
      }
    }
  }
  std::vector<Color> out(coloring.size());
  for (std::size_t v = 0; v < coloring.size(); ++v) out[v] = coloring[v] % k;
  return out;
}

}  // namespace ccmc
