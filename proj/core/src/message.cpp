#include "ccmc/message.hpp"

#include <cstdio>
#include <sstream>

namespace ccmc {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::string_view type_name(const Message& message) {
  return std::visit(Overloaded{
                        [](const StartMessage&) { return std::string_view("START"); },
                        [](const ColorMessage&) { return std::string_view("COLOR"); },
                        [](const TermMessage&) { return std::string_view("TERM"); },
                        [](const EndMessage&) { return std::string_view("END"); },
                    },
                    message);
}

std::string format_colors(const ColorSet& colors) {
  std::string out = "{";
  bool first = true;
  for (Color c : colors) {
    if (!first) out += ",";
    out += std::to_string(c);
    first = false;
  }
  return out + "}";
}

std::string encode(const Message& message) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const StartMessage&) { os << "START()"; },
                 [&](const ColorMessage& m) {
                   os << "COLOR(" << m.sender << ";max_cl=" << m.max_cl;
                   for (const auto& [id, colors] : m.cl_map) {
                     os << ";" << id << ":" << format_colors(colors);
                   }
                   os << ")";
                 },
                 [&](const TermMessage& m) {
                   os << "TERM(" << m.dest << ";" << m.sender;
                   if (m.ak) os << ";ak=" << *m.ak;
                   os << ")";
                 },
                 [&](const EndMessage& m) { os << "END(" << m.sender << ";k=" << m.k << ")"; },
             },
             message);
  return os.str();
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t digest(const Message& message) {
  return fnv1a(encode(message));
}

std::string hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace ccmc
