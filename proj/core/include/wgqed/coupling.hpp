#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "wgqed/model.hpp"

namespace wgqed {

// Dipole-dipole interaction mediated by the free-space (non-guided) vacuum,
//   (3 sqrt(g_j g_l) / 4) [ sin^2(phi) (-i/x) + (1 - 3 cos^2(phi)) (1/x^2 + i/x^3) ],
// with x = k_a r_jl and phi the dipole angle to the chain axis. The
// (1 - 3 cos^2 phi) factor multiplies both near-field terms.
// Throws SingularSeparationError for x <= 0.
cplx nonwaveguide_coupling(double gamma_j, double gamma_l, double x, double phi);

struct CouplingMatrices {
  Eigen::MatrixXd waveguide;       // V^(w): Gamma_j/2 on the diagonal, sqrt(Gamma_j Gamma_l)/2 off it
  Eigen::MatrixXcd nonwaveguide;   // V^(nw): gamma_j/2 on the diagonal
  Eigen::MatrixXcd phase;          // exp(i k_a z_jl), ones on the diagonal
  Eigen::MatrixXcd effective;      // G = (V^(w) + V^(nw)) .* phase

  std::size_t size() const { return static_cast<std::size_t>(waveguide.rows()); }
  // V^(w) + V^(nw), no propagation phase.
  Eigen::MatrixXcd total() const { return waveguide.cast<cplx>() + nonwaveguide; }
};

// With include_nw = false the off-diagonal V^(nw) entries vanish but the
// diagonal keeps gamma_j / 2.
CouplingMatrices build_couplings(const EmitterArray& array, bool include_nw = true);
CouplingMatrices build_couplings(const Scenario& scenario);

// Eigenpair of the effective matrix. A mode evolves as exp(-eigenvalue t):
// Re is its amplitude decay rate, 2 Re its spectral linewidth (FWHM of the
// intensity line), Im its frequency shift.
struct CollectiveMode {
  cplx eigenvalue;
  Eigen::VectorXcd vector;
  double shift = 0.0;

  double decay_rate() const { return eigenvalue.real(); }
  double linewidth() const { return 2.0 * eigenvalue.real(); }
};

// Sorted by descending decay rate. Shifts are measured from the mean
// imaginary part of the diagonal.
std::vector<CollectiveMode> collective_modes(const Eigen::MatrixXcd& matrix);
std::vector<CollectiveMode> collective_modes(const CouplingMatrices& couplings);

// Row-major, one "re,im" pair per cell.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& matrix);

}  // namespace wgqed
