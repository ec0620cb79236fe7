#pragma once

#include <cstdint>
#include <random>

namespace fwiforge::synth {

/// mt19937_64 with distribution helpers whose output is fixed by the C++
/// standard (std:: distributions are implementation-defined), so a seed
/// produces the same maps with any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Stream for one sample of a batch; depends only on (seed, index).
  static Rng for_sample(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    return Rng(seq);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo == hi ? lo : lo + (hi - lo) * unit(); }

  /// Uniform integer on the closed range [lo, hi].
  int uniform_int(int lo, int hi) {
    if (hi <= lo) return lo;
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>((engine_() >> 11) % span);
  }

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  explicit Rng(std::seed_seq& seq) : engine_(seq) {}
  std::mt19937_64 engine_;
};

}  // namespace fwiforge::synth
