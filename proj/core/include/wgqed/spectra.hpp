#pragma once

// Frequency-domain solver. For each detuning dk the Fourier amplitudes
// chi_j(dk - dk_j) = integral_0^inf alpha_j(t) exp(i (dk - dk_j) v_g t) dt solve
//
//   M(dk) chi = A,   M_pq = V_pq exp(i k z_pq) - i (dk - dk_p) v_g delta_pq,  k = k_a + dk,
//
// with A_l = alpha_l(0) - i sqrt(Gamma_l L / 2 v_g) beta0(dk) exp(i k z_l). The
// reflected, transmitted and directional emission amplitudes follow as
// weighted sums of chi.

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wgqed/coupling.hpp"
#include "wgqed/model.hpp"

namespace wgqed {

Eigen::MatrixXcd m_matrix(const Scenario& scenario, const CouplingMatrices& couplings, double dk);
Eigen::MatrixXcd m_matrix(const Scenario& scenario, double dk);

// Throws NumericalError if M(dk) is singular to working precision.
Eigen::VectorXcd solve_chi(const Scenario& scenario, const CouplingMatrices& couplings, double dk);
Eigen::VectorXcd solve_chi(const Scenario& scenario, double dk);

enum class Channel { Reflection, Transmission, Left, Right, Input };
enum class SpectrumKind { Scattering, Decay };

const char* channel_name(Channel channel);

// Spectra on a detuning grid.
//
// Scattering grids store Reflection and Transmission as ratios beta/beta0
// (computed as transfer functions, so they are defined even where beta0
// underflows) plus the Input amplitude beta0. Decay grids store the complex
// Left (beta_-) and Right (beta_+) amplitudes; their intensity is the
// density |beta|^2 / 2 pi with L = 1.
struct SpectrumGrid {
  SpectrumKind kind = SpectrumKind::Scattering;
  std::vector<double> dk;
  std::map<Channel, std::vector<cplx>> channels;
  // Grid points where M(dk) was numerically singular and the solve was taken
  // at dk + regularization_offset instead.
  std::vector<std::size_t> regularized;

  std::size_t size() const { return dk.size(); }
  bool has(Channel c) const { return channels.contains(c); }
  const std::vector<cplx>& channel(Channel c) const;
  // |ratio|^2 for scattering channels, |beta|^2 / 2 pi for decay channels and the input.
  std::vector<double> intensity(Channel c) const;
  std::string normalization() const;
};

inline constexpr double kRegularizationOffset = 1e-5;

struct SpectraOptions {
  unsigned threads = 1;
  // Overrides build_couplings(scenario); used for controlled perturbations.
  std::optional<CouplingMatrices> couplings;
};

// Requires a photon input and no initial excitation.
SpectrumGrid scattering_spectra(const Scenario& scenario, std::span<const double> grid,
                                const SpectraOptions& options = {});
// Requires an initial excitation and no photon input.
SpectrumGrid decay_spectra(const Scenario& scenario, std::span<const double> grid,
                           const SpectraOptions& options = {});

// Complex poles of the spectra in the k_a-phase approximation: eigenvalues mu
// of G + i diag(dk_j). A line sits at dk = Im mu with FWHM 2 Re mu.
std::vector<cplx> spectral_poles(const Scenario& scenario);

std::vector<double> uniform_grid(double center, double half_span, std::size_t points);

struct DefaultGridOptions {
  std::size_t points = 8001;
  double refinement = 10.0;       // density factor inside refinement windows
  double window_linewidths = 6.0; // window width in units of the narrowest linewidth
  std::optional<double> half_span;
};

// Span dk_c +- max(5 Delta_0, 2 max|Im mu| + 10 Gamma), refined around every
// pole (mirrored about dk_c so the grid stays symmetric). Window spacing is
// the coarse step / refinement, or narrowest linewidth / 20 if that is finer.
std::vector<double> default_grid(const Scenario& scenario, const DefaultGridOptions& options = {});

struct BranchingResult {
  double fraction = 0.0;
  double edge_ratio = 0.0;  // edge density / peak density
  bool truncated = false;   // edge_ratio > 1e-4
};

// (1 / 2 pi) integral (|beta_-|^2 + |beta_+|^2) d dk on a decay grid (trapezoid).
BranchingResult waveguide_branching(const SpectrumGrid& grid);

// Columns: dk, |bR/b0|^2, |bT/b0|^2 and re/im of every stored channel
// (decay grids: dk, density_left, density_right, re/im of each channel).
void write_spectrum_csv(std::ostream& out, const SpectrumGrid& grid);

}  // namespace wgqed
