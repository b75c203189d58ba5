#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dpag {

// Seeded 64-bit PRNG with explicit uniform/normal conversions.
// std::mt19937_64 output is fully specified by the standard, and the
// conversions below avoid distribution classes whose output sequences are
// implementation-defined, so identical seeds give identical streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; second value cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Integer in [0, n); n must be positive.
  std::size_t below(std::size_t n) { return eng_() % n; }

  // Derives an independent child stream; used to give each phase its own
  // named stream without coupling draw counts.
  Rng fork(std::uint64_t stream_id) {
    return Rng(eng_() ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1)));
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dpag
