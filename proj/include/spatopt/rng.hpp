#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace spatopt {

/// Seedable random stream with portable draws.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Bounded integers and unit doubles are derived here rather than
/// through <random> distributions, whose algorithms differ between standard
/// libraries. Streams with different ids from the same seed are independent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n); n must be positive.
  std::size_t below(std::size_t n);

  /// Child stream keyed by this stream's seed and an id; does not advance this stream.
  Rng split(std::uint64_t stream) const { return Rng(seed_, stream_ * 0x9E3779B97F4A7C15ULL + stream + 1); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// FNV-1a digest of the serialized engine state.
  std::uint64_t state_digest() const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t h = 0xcbf29ce484222325ULL);

}  // namespace spatopt
