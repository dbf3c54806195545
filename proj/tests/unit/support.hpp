#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "wgqed/model.hpp"

namespace wgqed::test {

inline constexpr double kLambda = 1e-6;

// Seeded draws for property tests. Each case gets its own stream so a failure
// can be replayed from the printed seed alone.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool coin() { return index(0, 1) == 1; }
  cplx phasor() { return std::polar(1.0, uniform(-kPi, kPi)); }

  // 1..max_n emitters within a few wavelengths of the origin, zero-mean detunings.
  EmitterArray array(std::size_t max_n, bool lossless = false) {
    const std::size_t n = index(1, max_n);
    std::vector<EmitterParams> e(n);
    double z = uniform(0.0, 0.3) * kLambda;
    double mean = 0.0;
    for (auto& p : e) {
      p.z = z;
      z += uniform(0.03, 1.2) * kLambda;
      p.gamma_wg = uniform(0.3, 2.0);
      p.gamma_nw = lossless ? 0.0 : uniform(0.0, 0.5);
      p.dk = uniform(-3.0, 3.0);
      mean += p.dk;
    }
    mean /= static_cast<double>(n);
    for (auto& p : e) p.dk -= mean;
    return EmitterArray(e, kPi / 2, UnitSystem{kLambda});
  }

 private:
  std::mt19937_64 rng_;
};

inline EmitterArray pair_array(double a_lambda, double gamma_nw, double dw = 0.0, double z1 = 0.0,
                               double lambda = kLambda) {
  return EmitterArray({{z1, 1.0, gamma_nw, dw / 2}, {z1 + a_lambda * lambda, 1.0, gamma_nw, -dw / 2}},
                      kPi / 2, UnitSystem{lambda});
}

inline Scenario with_pulse(EmitterArray array, double width, bool include_nw = true) {
  return Scenario{std::move(array), GaussianPulse{width, 0.0}, {}, include_nw};
}

inline Scenario excited(EmitterArray array, bool include_nw = true) {
  std::vector<cplx> a0(array.size());
  a0[0] = 1.0;
  return Scenario{std::move(array), {}, std::move(a0), include_nw};
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

}  // namespace wgqed::test
