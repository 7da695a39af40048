#include "ccmc/tokens.hpp"

#include <algorithm>

namespace ccmc {

void TokenMultiset::add(Color color, std::uint32_t count) {
  if (count == 0) return;
  counts_[color] += count;
  size_ += count;
}

std::uint32_t TokenMultiset::remove(Color color, std::uint32_t count) {
  auto it = counts_.find(color);
  if (it == counts_.end()) return 0;
  const std::uint32_t taken = std::min(count, it->second);
  it->second -= taken;
  size_ -= taken;
  if (it->second == 0) counts_.erase(it);
  return taken;
}

std::uint32_t TokenMultiset::multiplicity(Color color) const {
  auto it = counts_.find(color);
  return it == counts_.end() ? 0 : it->second;
}

}  // namespace ccmc
