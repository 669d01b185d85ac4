#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace muod {

// Mixes inputs into one 64-bit seed (splitmix64 finalizer). Used to derive
// independent per-replication streams: hash(base_seed, model, replication).
std::uint64_t seed_mix(std::uint64_t a, std::uint64_t b);
std::uint64_t seed_mix(std::uint64_t a, std::uint64_t b, std::uint64_t c);

// Deterministic random source. The engine is std::mt19937_64 (its stream is
// fixed by the standard) and every distribution is implemented explicitly, so
// identical seeds give identical draws on any platform or standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer on {lo, ..., hi}, inclusive; unbiased via rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Standard normal via Box-Muller; the paired draw is cached.
  double normal();
  // k distinct indices from {0, ..., n-1}, returned sorted ascending.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 gen_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace muod
