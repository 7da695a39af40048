#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "ccmc/types.hpp"

namespace ccmc {

// External message that designates the root.
struct StartMessage {
  friend bool operator==(const StartMessage&, const StartMessage&) = default;
};

// Carries the sender's colors, its proposals for each neighbor, and the size
// of the color domain it used.
struct ColorMessage {
  NodeId sender;
  ColorMap cl_map;
  std::uint32_t max_cl = 0;

  friend bool operator==(const ColorMessage&, const ColorMessage&) = default;
};

// Broadcast to all neighbors; only `dest` acts on it. `ak` is present only
// when K dissemination is enabled.
struct TermMessage {
  NodeId dest;
  NodeId sender;
  std::optional<std::uint32_t> ak;

  friend bool operator==(const TermMessage&, const TermMessage&) = default;
};

struct EndMessage {
  NodeId sender;
  std::uint32_t k = 0;

  friend bool operator==(const EndMessage&, const EndMessage&) = default;
};

using Message = std::variant<StartMessage, ColorMessage, TermMessage, EndMessage>;

std::string_view type_name(const Message& message);

// Stable textual form, e.g. "COLOR(3;max_cl=5;1:{0};3:{1,2})".
std::string encode(const Message& message);

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 14695981039346656037ULL);
std::uint64_t digest(const Message& message);
std::string hex(std::uint64_t value);

std::string format_colors(const ColorSet& colors);

}  // namespace ccmc
