#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <set>

namespace ccmc {

// Dense index of a vertex inside a TreeNetwork.
using Vertex = std::size_t;

// Name under which a vertex appears in a topology document.
using NodeLabel = std::uint64_t;

using Color = std::uint32_t;
using ColorSet = std::set<Color>;

// Protocol-level identity of a process. Identities only need to be unique
// within hop-distance two, so two vertices of one tree may share one.
struct NodeId {
  std::uint64_t value = 0;

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

inline std::ostream& operator<<(std::ostream& os, NodeId id) {
  return os << id.value;
}

using ColorMap = std::map<NodeId, ColorSet>;

inline std::uint32_t ceil_div(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint32_t>((a + b - 1) / b);
}

}  // namespace ccmc

template <>
struct std::hash<ccmc::NodeId> {
  std::size_t operator()(ccmc::NodeId id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};
