#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace pesmc {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Hierarchical deterministic random stream. A stream is identified by a
// 64-bit key; child(tag) derives an independent stream whose draws do not
// depend on how much the parent has generated. This is what makes sampler
// output reproducible per seed no matter how work is split up.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key)
      : key_(key), eng_(splitmix64(splitmix64(key) ^ 0xd6e8feb86659fd93ull)) {}

  RngStream child(std::uint64_t tag) const {
    return RngStream(splitmix64(key_ ^ splitmix64(tag + 0x632be59bd9b4e019ull)));
  }

  std::uint64_t key() const { return key_; }

  // uniform on [0, 1)
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // uniform on (0, 1)
  double uniform01_pos() {
    double u;
    do {
      u = uniform01();
    } while (u <= 0.0);
    return u;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01_pos();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Gamma(shape, 1), Marsaglia-Tsang; shape < 1 boosted via the power trick.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = uniform01_pos();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform01_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double chi_squared(double nu) { return 2.0 * gamma(0.5 * nu); }

 private:
  std::uint64_t key_;
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Index of the category a uniform draw u falls into, given the inclusive
// prefix sums of the category masses.
inline Eigen::Index categorical_from_cumulative(const Eigen::VectorXd& cum, double u) {
  const double target = u * cum[cum.size() - 1];
  Eigen::Index lo = 0, hi = cum.size() - 1;
  while (lo < hi) {
    const Eigen::Index mid = (lo + hi) / 2;
    if (cum[mid] <= target)
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace pesmc
