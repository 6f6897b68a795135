#pragma once

#include <cstdint>
#include <limits>

namespace perco {

inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t key, std::uint64_t value) noexcept {
  return mix64(key + golden_gamma + mix64(value + 0x632BE59BD9B4E019ULL));
}

constexpr std::uint64_t hash_combine(std::uint64_t key, std::uint64_t a, std::uint64_t b) noexcept {
  return hash_combine(hash_combine(key, a), b);
}

// Maps 64 random bits to the open interval (0,1) on a 2^-53 lattice.
constexpr double to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Counter-based generator: output k is mix64(key + (k+1) * gamma). The whole
// stream is a pure function of the key, so a stream derived from
// (master seed, replicate index) is independent of thread scheduling.
class CounterRng {
public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t key) noexcept : state_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += golden_gamma;
    return mix64(state_);
  }

  // uniform on (0,1), never 0 or 1
  constexpr double uniform() noexcept { return to_open_unit((*this)()); }

private:
  std::uint64_t state_;
};

// Stream key for replicate `index` of an experiment seeded with `master`.
constexpr std::uint64_t replicate_key(std::uint64_t master, std::uint64_t index) noexcept {
  return hash_combine(master, 0x5EED, index);
}

// Sub-streams of one replicate: cloud positions, edge variates, retention flags.
enum class Stream : std::uint64_t { cloud = 1, edges = 2, retention = 3, extra = 4 };

constexpr std::uint64_t stream_key(std::uint64_t replicate, Stream s) noexcept {
  return hash_combine(replicate, static_cast<std::uint64_t>(s));
}

// Uniform variate attached to the unordered pair {a, b}.
constexpr double pair_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
  if (a > b) {
    const auto t = a;
    a = b;
    b = t;
  }
  return to_open_unit(hash_combine(seed, a, b));
}

} // namespace perco
