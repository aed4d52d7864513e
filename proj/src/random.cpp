#include "equidisp/random.hpp"

#include <cmath>

namespace equidisp {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream_index) {
  std::uint64_t state = seed;
  const std::uint64_t a = splitmix64(state);
  state ^= stream_index * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL;
  const std::uint64_t b = splitmix64(state);
  return a ^ (b + 0x9E3779B97F4A7C15ULL);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_index)
    : engine_(mix_seed(seed, stream_index)),
      seed_(seed),
      stream_index_(stream_index) {}

double RandomStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller on (0,1] x [0,1).
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

double RandomStream::normal(double mean, double sd) {
  return mean + sd * normal();
}

}  // namespace equidisp
