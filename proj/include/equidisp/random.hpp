#pragma once

#include <cstdint>
#include <random>

namespace equidisp {

// Seedable random stream. Identical (seed, stream_index) pairs reproduce
// identical draw sequences on every platform: the engine is the fully
// specified std::mt19937_64 and all transforms are implemented here rather
// than delegated to implementation-defined distributions.
//
// Parallel users take distinct stream_index values; a stream is single-owner.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_index = 0);

  // Uniform on [0, 1) with 53 random bits.
  double uniform01();

  // Standard normal draw (Box-Muller; the spare deviate is cached).
  double normal();

  double normal(double mean, double sd);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace equidisp
