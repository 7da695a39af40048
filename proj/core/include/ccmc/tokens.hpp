#pragma once

#include <cstddef>
#include <cstdint>
#include <map>

#include "ccmc/types.hpp"

namespace ccmc {

// Multiset of colored tokens. A color with multiplicity q can still be
// proposed to q more children.
class TokenMultiset {
 public:
  void add(Color color, std::uint32_t count = 1);
  // Removes up to `count` tokens; returns how many were actually removed.
  std::uint32_t remove(Color color, std::uint32_t count = 1);

  std::uint32_t multiplicity(Color color) const;
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  // Colors with non-zero multiplicity, ascending.
  const std::map<Color, std::uint32_t>& entries() const { return counts_; }

  friend bool operator==(const TokenMultiset&, const TokenMultiset&) = default;

 private:
  std::map<Color, std::uint32_t> counts_;
  std::size_t size_ = 0;
};

}  // namespace ccmc
