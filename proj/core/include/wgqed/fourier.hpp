#pragma once

// Numerical bridge from the time domain to the frequency domain:
//   chi_j(dk - dk_j) = integral_0^T alpha_j(t) exp(i (dk - dk_j) v_g t) dt
// by the trapezoid rule on the stored samples.

#include <span>
#include <vector>

#include "wgqed/dynamics.hpp"
#include "wgqed/model.hpp"

namespace wgqed {

enum class Window { Rectangular, HannTail };

struct FourierOptions {
  Window window = Window::Rectangular;
  double taper_fraction = 0.1;  // HannTail: fraction of the record rolled off to zero
  unsigned threads = 1;
};

// Returns chi[j][i] for every emitter j and grid point i.
std::vector<std::vector<cplx>> fourier_chi(const AmplitudeTrajectory& trajectory, const EmitterArray& array,
                                           std::span<const double> grid, const FourierOptions& options = {});

// sqrt(sum |a - b|^2 / sum |b|^2) over all emitters and grid points.
double relative_l2_error(const std::vector<std::vector<cplx>>& a, const std::vector<std::vector<cplx>>& b);

}  // namespace wgqed
