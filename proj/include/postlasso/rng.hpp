#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "postlasso/normal.hpp"

namespace postlasso {

// xoshiro256** with splitmix64-based stream derivation. Substreams are
// derived from (master seed, stream id) so replicate randomness does not
// depend on execution order or thread count. Normal variates use the
// inverse-CDF transform, keeping every draw reproducible for a given build
// without relying on implementation-defined <random> distributions.
class Rng {
 public:
  static constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  explicit Rng(uint64_t seed) {
    uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
  }

  // Counter-based stream derivation: a well-mixed function of
  // (master, stream) only.
  static uint64_t derive(uint64_t master, uint64_t stream) {
    uint64_t mixed = mix(master + kGolden * (stream + 1));
    return mix(mixed ^ stream);
  }

  static Rng substream(uint64_t master, uint64_t stream) {
    return Rng(derive(master, stream));
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on the open interval (0, 1).
  double next_uniform() {
    return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_normal() { return normal_quantile(next_uniform()); }

  // Unbiased integer in [0, bound) via rejection.
  uint64_t next_below(uint64_t bound) {
    const uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const uint64_t x = next_u64();
      if (x >= threshold) return x % bound;
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[next_below(i)]);
    }
  }

 private:
  static uint64_t rotl(uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  static uint64_t splitmix64(uint64_t& s) {
    s += kGolden;
    return mix(s);
  }

  std::array<uint64_t, 4> state_;
};

// Stream tags used to keep the randomness of unrelated components disjoint.
namespace stream {
constexpr uint64_t kGraph = 0x67726168ULL;       // graph topology
constexpr uint64_t kReplicate = 0x7265700000ULL; // + replicate index
constexpr uint64_t kDesign = 0x64736e00ULL;      // X and noise draws
constexpr uint64_t kFolds = 0x666f6c64ULL;       // CV fold shuffle
constexpr uint64_t kLambdaSup = 0x73757000ULL;   // lambda_sup Monte Carlo
constexpr uint64_t kWishart = 0x77697368ULL;     // Wishart covariance draws
}  // namespace stream

}  // namespace postlasso
