#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace cbcfog {

// Seeded pseudo-random source. The std:: distributions are
// implementation-defined, so sampling helpers here work directly on the
// 64-bit engine output to keep streams identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  template <class T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      auto j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Stable seed for a named sub-stream, e.g. derive_seed(master, "topo=0/rep=3").
/// Depends only on the bytes of key, so adding new keys never shifts others.
std::uint64_t derive_seed(std::uint64_t master, std::string_view key);

} // namespace cbcfog
