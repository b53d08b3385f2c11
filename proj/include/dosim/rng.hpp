#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dosim {

/// 64-bit FNV-1a. Used for substream derivation and log fingerprints.
constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state = kFnvOffset) noexcept;

/// Seeded pseudo-random stream. Every consumer draws from its own substream,
/// keyed by (consumer id, run seed), so adding a consumer never shifts
/// another consumer's draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng substream(std::uint64_t run_seed, std::string_view consumer);

  /// Uniform in [0, 1) with 53 random bits; identical on every platform.
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  std::uint64_t next() noexcept { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dosim
