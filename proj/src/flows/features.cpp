#include "dosim/flows/features.hpp"

#include <algorithm>

namespace dosim::flows {

std::optional<FeatureVector> extract_features(const WindowStats& stats) noexcept {
  if (stats.pkt_count == 0) return std::nullopt;
  const auto count = static_cast<double>(stats.pkt_count);
  const auto peak = static_cast<double>(
      *std::max_element(stats.subwindow_counts.begin(), stats.subwindow_counts.end()));

  FeatureVector out;
  out[0] = std::log1p(count / stats.window_len);
  out[1] = (static_cast<double>(stats.byte_sum) / count) / kSizeNorm;
  out[2] = peak / (count / static_cast<double>(kSubwindows));
  out[3] = std::log1p(static_cast<double>(stats.dst_fanin));
  return out;
}

}  // namespace dosim::flows
