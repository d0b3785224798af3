#pragma once

#include <cstdint>
#include <string>

namespace demonsim {

/// FNV-1a 64-bit hash; used for seed splitting and config hashes.
std::uint64_t fnv1a64(const std::string& s);

/// Stable per-subtask seed: one splitmix64 step over master ^ fnv1a64(path).
std::uint64_t derive_seed(std::uint64_t master, const std::string& path);

/// Deterministic counter-free RNG stream (splitmix64). Sub-streams are
/// derived as splitmix of (master ^ fnv1a64(path)), so results are
/// independent of execution order and identical across runs.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  /// Stream for a named subtask of `master`.
  static RngStream derived(std::uint64_t master, const std::string& path);

  std::uint64_t next_u64();
  /// Uniform double in [0, 1).
  double next_double();
  /// Poisson draw; exact inversion for small means, PTRS transformed
  /// rejection for large ones.
  long long poisson(double mean);

private:
  std::uint64_t state_;
};

}  // namespace demonsim
