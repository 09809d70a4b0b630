#ifndef NEGOTIATION_RNG_HPP_
#define NEGOTIATION_RNG_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace negotiation {

// splitmix64, used for seeding and for deriving per-role child seeds from a
// master seed (child k is the k-th output of the stream seeded with master).
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t role) {
  SplitMix64 sm(master);
  std::uint64_t v = 0;
  for (std::uint64_t i = 0; i <= role; ++i) v = sm.next();
  return v;
}

// xoshiro256++. Small fixed state so checkpoints can store the generator
// position byte-exactly.
class Rng {
 public:
  using State = std::array<std::uint64_t, 4>;

  explicit Rng(std::uint64_t seed = 0) { reseed(seed); }

  void reseed(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& s : state_) s = sm.next();
  }

  std::uint64_t next() {
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

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // Standard normal via Box-Muller (single value per call, no cached state).
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  const State& state() const { return state_; }
  void set_state(const State& s) { state_ = s; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  State state_;
};

}  // namespace negotiation

#endif  // NEGOTIATION_RNG_HPP_
