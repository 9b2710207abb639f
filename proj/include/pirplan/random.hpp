#ifndef PIRPLAN_RANDOM_HPP
#define PIRPLAN_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace pirplan {

/// mt19937_64 with hand-rolled variate transforms. The standard distribution
/// classes are implementation-defined, so outputs would differ across standard
/// libraries; these transforms keep seeded runs byte-stable everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform01() * static_cast<double>(n)) % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pirplan

#endif  // PIRPLAN_RANDOM_HPP
