#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace seal {

// The single random stream owned by one simulation (or one genesis pass).
// All draws go through here so that the consumption order is the schedule order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

  // Uniform integer on [lo, hi] inclusive.
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }

  // Uniform index on [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_));
  }

  bool bernoulli(double p) { return uniform() < p; }

  double gamma(double shape, double rate) {
    return std::gamma_distribution<double>(shape, 1.0 / rate)(engine_);
  }

  // Beta(1, b) by inversion: F(x) = 1 - (1 - x)^b.
  double beta_one(double b);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline double Rng::beta_one(double b) {
  const double u = uniform();
  return 1.0 - std::pow(1.0 - u, 1.0 / b);
}

}  // namespace seal
