#include "wgqed/fourier.hpp"

#include <cmath>

#include "wgqed/parallel.hpp"

namespace wgqed {

namespace {

std::vector<double> window_weights(std::size_t samples, const FourierOptions& options) {
  std::vector<double> w(samples, 1.0);
  if (options.window == Window::HannTail && samples > 1) {
    const auto taper = static_cast<std::size_t>(options.taper_fraction * static_cast<double>(samples));
    for (std::size_t i = 0; i < taper; ++i) {
      const double x = static_cast<double>(i + 1) / static_cast<double>(taper + 1);
      w[samples - 1 - i] = 0.5 * (1.0 - std::cos(kPi * x));
    }
  }
  // trapezoid end weights
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

}  // namespace

std::vector<std::vector<cplx>> fourier_chi(const AmplitudeTrajectory& trajectory, const EmitterArray& array,
                                           std::span<const double> grid, const FourierOptions& options) {
  const std::size_t n = trajectory.emitters();
  const std::size_t samples = trajectory.samples();
  if (n != array.size()) throw ValidationError("fourier_chi: trajectory and array sizes differ");
  if (samples < 2) throw ValidationError("fourier_chi: need at least two samples");
  const double h = trajectory.sample_step;
  const double t0 = trajectory.times.front();
  const auto weights = window_weights(samples, options);

  std::vector<std::vector<cplx>> chi(n, std::vector<cplx>(grid.size()));
  parallel_for(grid.size(), options.threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double omega = (grid[i] - array[j].dk) * UnitSystem::group_velocity;
      const cplx step = std::polar(1.0, omega * h);
      cplx phasor = std::polar(1.0, omega * t0);
      cplx sum{};
      const auto& a = trajectory.alpha[j];
      for (std::size_t s = 0; s < samples; ++s) {
        // re-anchor the recurrence now and then to keep rounding drift bounded
        if (s % 4096 == 0) phasor = std::polar(1.0, omega * (t0 + h * static_cast<double>(s)));
        sum += weights[s] * a[s] * phasor;
        phasor *= step;
      }
      chi[j][i] = h * sum;
    }
  });
  return chi;
}

double relative_l2_error(const std::vector<std::vector<cplx>>& a, const std::vector<std::vector<cplx>>& b) {
  if (a.size() != b.size()) throw GridError("relative_l2_error: emitter counts differ");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j].size() != b[j].size()) throw GridError("relative_l2_error: grid sizes differ");
    for (std::size_t i = 0; i < a[j].size(); ++i) {
      num += std::norm(a[j][i] - b[j][i]);
      den += std::norm(b[j][i]);
    }
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace wgqed
