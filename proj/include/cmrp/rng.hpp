#ifndef CMRP_RNG_HPP
#define CMRP_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace cmrp {

/// splitmix64 step; also used to derive substream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Deterministic random stream (xoshiro256++), seeded from a master seed
/// and a substream index via splitmix64. Stream i of a given master seed
/// is identical no matter how work is distributed over threads, which is
/// what makes all Monte Carlo output reproducible and thread-count
/// independent.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream) {
    std::uint64_t x = master_seed ^ ((stream + 1) * 0xA3EC647659359ACDull);
    for (auto& w : state_) w = splitmix64(x);
    if (state_[0] == 0 && state_[1] == 0 && state_[2] == 0 && state_[3] == 0)
      state_[0] = 0x9E3779B97F4A7C15ull;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform draw strictly inside (0,1); never returns 0 or 1, so logs
  /// and inverse CDFs are always finite.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform on (lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Exponential with the given rate, by inversion.
  double exponential(double rate) { return -std::log(uniform01()) / rate; }

  /// Standard normal (Box-Muller, one value per pair of uniforms).
  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace cmrp

#endif  // CMRP_RNG_HPP
