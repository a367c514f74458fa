#pragma once

#include <cstdint>
#include <cmath>

namespace infodyn {

// Counter-based generator: output i of stream s under seed k is a pure
// function of (k, s, i), so runs are reproducible across platforms and
// independent streams can be split off a single seed.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  CounterRng split(std::uint64_t stream) const {
    return CounterRng(seed_, mix(stream_ * 0x9e3779b97f4a7c15ULL + stream));
  }

  std::uint64_t next_u64() { return at(counter_++); }

  // value of the stream at an absolute counter position, without advancing
  std::uint64_t at(std::uint64_t i) const {
    return mix(seed_ ^ mix(stream_ ^ mix(i + 0x2545f4914f6cdd1dULL)));
  }

  double next_double() {  // uniform in [0,1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool next_bit(double p_one = 0.5) { return next_double() < p_one; }

  // uniform integer in [0, n)
  std::uint64_t next_below(std::uint64_t n) {
    return next_u64() % n;
  }

  // geometric with mean m (support 1, 2, ...), by inversion
  std::uint64_t next_geometric(double m) {
    if (m <= 1.0) return 1;
    const double p = 1.0 / m;
    double u = next_double();
    if (u >= 1.0) u = 0x1.fffffffffffffp-1;
    const double g = std::floor(std::log1p(-u) / std::log1p(-p));
    return 1 + static_cast<std::uint64_t>(g);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace infodyn
