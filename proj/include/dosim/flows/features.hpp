#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>

#include "dosim/types.hpp"

namespace dosim::flows {

inline constexpr std::size_t kSubwindows = 10;
inline constexpr std::size_t kFeatureDim = 4;
/// Conventional MTU; normal traffic keeps the size ratio near [0, 1].
inline constexpr double kSizeNorm = 1500.0;

/// Per-flow statistics for one observation window.
struct WindowStats {
  FlowKey flow_key;
  SimTime window_start = 0.0;
  double window_len = 1.0;
  std::uint64_t pkt_count = 0;
  std::uint64_t byte_sum = 0;
  std::array<std::uint64_t, kSubwindows> subwindow_counts{};
  /// Distinct sources seen targeting flow_key.dst in this window.
  std::uint64_t dst_fanin = 0;
};

/// Point in the 4-d feature space:
///   [0] log-rate      ln(1 + pkt_count / window_len)
///   [1] size ratio    (byte_sum / pkt_count) / 1500
///   [2] burstiness    max subwindow / mean subwindow, in [1, 10]
///   [3] fan-in        ln(1 + dst_fanin)
struct FeatureVector {
  std::array<double, kFeatureDim> v{};

  double& operator[](std::size_t i) noexcept { return v[i]; }
  double operator[](std::size_t i) const noexcept { return v[i]; }

  double log_rate() const noexcept { return v[0]; }
  double size_ratio() const noexcept { return v[1]; }
  double burstiness() const noexcept { return v[2]; }
  double fan_in() const noexcept { return v[3]; }

  /// Packet rate this vector encodes (inverse of the log-rate component).
  double packet_rate() const noexcept { return std::expm1(v[0]); }

  bool finite() const noexcept {
    for (double x : v) {
      if (!std::isfinite(x)) return false;
    }
    return true;
  }

  bool operator==(const FeatureVector&) const = default;
};

/// Euclidean distance.
inline double distance(const FeatureVector& a, const FeatureVector& b) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < kFeatureDim; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

/// Nothing for an empty window.
std::optional<FeatureVector> extract_features(const WindowStats& stats) noexcept;

}  // namespace dosim::flows
