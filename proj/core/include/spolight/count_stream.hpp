#pragma once
#include <cstdint>
#include <vector>

namespace spolight {

/// Time-binned detector counts: one or two channels of equal length.
struct BinnedCountStream {
  double bin_width_ns = 12.5;
  std::vector<std::vector<std::uint32_t>> channels;

  std::size_t bins() const { return channels.empty() ? 0 : channels.front().size(); }
  void validate() const;
};

}  // namespace spolight
