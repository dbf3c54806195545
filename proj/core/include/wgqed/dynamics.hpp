#pragma once

// Time-domain emitter amplitudes. Integrates
//
//   d alpha_j / dt = b_j(t) - sum_l V_jl exp(i k_l z_jl) alpha_l(t - z_jl / v_g) exp(i (k_j - k_l) v_g t)
//
// with V_jl = V^(w)_jl + V^(nw)_jl, V_jj = (Gamma_j + gamma_j) / 2, using fixed-step
// RK4. Amplitudes vanish before t = 0. In Markovian mode the delays are dropped
// (phases kept); in full mode delayed values come from cubic Hermite
// interpolation of the stored history.

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "wgqed/model.hpp"

namespace wgqed {

// Incident-photon drive b_j(t). Closed form for a Gaussian pulse, trapezoid
// quadrature over the stored table for a tabulated spectrum. Throws
// MissingDriveError when the scenario has no input.
cplx drive(const Scenario& scenario, std::size_t j, double t);

struct EvolveOptions {
  double t_max = 0.0;            // <= 0 selects default_t_max(scenario)
  double step = 1e-3;
  std::size_t output_stride = 1; // keep every n-th step in the trajectory
  bool record_drive = false;
};

struct AmplitudeTrajectory {
  double sample_step = 0.0;                   // spacing of the stored samples
  double integration_step = 0.0;
  std::vector<double> times;
  std::vector<std::vector<cplx>> alpha;       // alpha[j][n]
  std::vector<std::vector<cplx>> drive;       // empty unless recorded

  std::size_t emitters() const { return alpha.size(); }
  std::size_t samples() const { return times.size(); }
  double t_end() const { return times.empty() ? 0.0 : times.back(); }
  double population(std::size_t n) const;     // sum_j |alpha_j(t_n)|^2
};

// 10 / (slowest intensity decay rate of the detuned array), capped at 1e4, plus the
// transit time of the input pulse past the last emitter.
double default_t_max(const Scenario& scenario);

AmplitudeTrajectory evolve(const Scenario& scenario, const EvolveOptions& options = {});

// |alpha_j(t)|^2, indexed [j][n].
std::vector<std::vector<double>> excitation_probabilities(const AmplitudeTrajectory& trajectory);

// Columns: t, re/im of each alpha_j, then each |alpha_j|^2. One header row.
void write_trajectory_csv(std::ostream& out, const AmplitudeTrajectory& trajectory);

}  // namespace wgqed
