#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace matpg {

/// splitmix64 finalizer; used both as a seed expander and as the mixing
/// step of derive_seed.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Hash-combines a base seed with a sequence of tag words. Streams keyed by
/// distinct (generation, pool, slot, task, episode, ...) tuples never share
/// draws, which keeps results independent of evaluation order and worker
/// count.
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = mix64(base ^ 0x243f6a8885a308d3ULL);
  for (std::uint64_t w : words) {
    h = mix64(h ^ mix64(w));
  }
  return h;
}

/// Deterministic, seedable pseudo-random stream (xoshiro256**). All
/// distribution code lives here rather than in <random> so that identical
/// seeds give identical draw sequences on every platform and standard
/// library.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : key_(seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) {
      s = mix64(s);
      word = s;
    }
    // xoshiro must not start from the all-zero state
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
      state_[0] = 0x9e3779b97f4a7c15ULL;
    }
  }

  /// The seed this stream was constructed from.
  std::uint64_t key() const { return key_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n == 0) {
      throw std::invalid_argument("uniform_below needs a positive bound");
    }
    // Debiased multiply-shift (Lemire); deterministic across platforms.
    std::uint64_t x = next_u64();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        x = next_u64();
        m = static_cast<unsigned __int128>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform_below(static_cast<std::uint64_t>(n)));
  }

  bool chance(double p) {
    if (p <= 0.0) {
      return false;
    }
    if (p >= 1.0) {
      return true;
    }
    return uniform() < p;
  }

  /// Derives an independent substream keyed off this stream's seed. Does not
  /// consume state, so derivations commute with draws.
  RngStream derive(std::initializer_list<std::uint64_t> words) const {
    return RngStream(derive_seed(key_, words));
  }

  std::uint64_t derive_key(std::initializer_list<std::uint64_t> words) const {
    return derive_seed(key_, words);
  }

  /// Fisher-Yates shuffle driven by this stream.
  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = index(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t key_;
  std::array<std::uint64_t, 4> state_;
};

// Stream tags used to key engine substreams. Distinct tags guarantee
// distinct draw sequences for each phase of a run.
namespace stream_tag {
inline constexpr std::uint64_t kInit = 0x01;
inline constexpr std::uint64_t kEval = 0x02;
inline constexpr std::uint64_t kSelect = 0x03;
inline constexpr std::uint64_t kVary = 0x04;
inline constexpr std::uint64_t kValidate = 0x05;
inline constexpr std::uint64_t kValidateCombined = 0x06;
}  // namespace stream_tag

}  // namespace matpg
