#pragma once

// Domain model for a chain of two-level emitters side-coupled to a 1D waveguide.
//
// Units: every rate is a multiple of the reference waveguide decay rate
// (Gamma_ref = 1), the group velocity is 1, so time is in 1/Gamma_ref and
// length in v_g/Gamma_ref. Wavevector offsets are therefore numerically equal
// to frequency detunings. The waveguide quantization length is fixed to 1 and
// never appears in exported quantities.

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "wgqed/types.hpp"

namespace wgqed {

struct UnitSystem {
  static constexpr double gamma_ref = 1.0;
  static constexpr double group_velocity = 1.0;

  // Resonance wavelength in length units (v_g / Gamma_ref). Sets k_a = 2 pi / lambda_a.
  double lambda_a = 1e-6;

  double k_a() const noexcept { return kTwoPi / lambda_a; }
};

struct EmitterParams {
  double z = 0.0;         // position along the waveguide
  double gamma_wg = 1.0;  // decay rate into guided modes
  double gamma_nw = 0.0;  // decay rate into non-guided (free-space) modes
  double dk = 0.0;        // transition wavevector offset k_j - k_a
};

// An emitter described by its absolute transition wavevector.
struct AbsoluteEmitter {
  double z = 0.0;
  double gamma_wg = 1.0;
  double gamma_nw = 0.0;
  double k = 0.0;
};

// Collinear emitter chain. Emitters are sorted by position; the wavevector
// offsets average to zero so k_a is the mean transition wavevector.
class EmitterArray {
 public:
  EmitterArray(std::vector<EmitterParams> emitters, double phi = kPi / 2, UnitSystem units = {});

  // Recenters on the mean wavevector; lambda_a is derived from it.
  static EmitterArray from_wavevectors(std::span<const AbsoluteEmitter> emitters,
                                       double phi = kPi / 2);

  std::size_t size() const noexcept { return emitters_.size(); }
  const EmitterParams& operator[](std::size_t j) const { return emitters_[j]; }
  std::span<const EmitterParams> emitters() const noexcept { return emitters_; }
  double phi() const noexcept { return phi_; }
  const UnitSystem& units() const noexcept { return units_; }
  double k_a() const noexcept { return units_.k_a(); }
  double lambda_a() const noexcept { return units_.lambda_a; }

  // |z_j - z_l|; the chain lies on the waveguide axis so r_jl = z_jl.
  double separation(std::size_t j, std::size_t l) const;
  double k_of(std::size_t j) const { return k_a() + emitters_[j].dk; }

 private:
  std::vector<EmitterParams> emitters_;
  double phi_;
  UnitSystem units_;
};

// Evenly spaced chain. spacing is given in units of lambda_a; the detuning
// ladder is dk_j = detuning_step * ((n - 1) / 2 - j), so neighbours differ by
// detuning_step (Delta omega_{j,j+1}) and the mean is zero.
struct ChainSpec {
  std::size_t count = 2;
  double spacing_lambda = 0.5;
  double gamma_wg = 1.0;
  double gamma_nw = 0.0;
  double detuning_step = 0.0;
  double z0 = 0.0;
  double phi = kPi / 2;
  double lambda_a = 1e-6;
};

EmitterArray make_chain(const ChainSpec& spec);

struct GaussianPulse {
  double width = 1.0;      // Delta_0 in inverse-length units
  double center_dk = 0.0;  // pulse-center detuning from k_a

  // Frequency FWHM of |beta0|^2 is sqrt(2 ln 2) * width * v_g.
  double fwhm() const;
};

// Normalized single-photon Gaussian spectrum beta0(dk) with L = 1.
cplx gaussian_spectrum(const GaussianPulse& pulse, double dk);

// An arbitrary input spectrum sampled on an ascending grid. Linear
// interpolation inside the table, zero outside.
struct TabulatedSpectrum {
  std::vector<double> dk;
  std::vector<cplx> amplitude;

  cplx at(double k) const;
  // (1 / 2 pi) * integral |beta0|^2, trapezoid rule; 1 for a single photon.
  double norm() const;
};

TabulatedSpectrum tabulate(const GaussianPulse& pulse, double half_span_widths, std::size_t points);

using PhotonInput = std::variant<std::monostate, GaussianPulse, TabulatedSpectrum>;

enum class Retardation {
  Markovian,  // intra-array delays dropped, propagation phases kept
  Full,       // delays z_jl / v_g retained
};

struct Scenario {
  EmitterArray array;
  PhotonInput input{};
  std::vector<cplx> initial_excitation{};  // empty means all emitters in the ground state
  bool include_nw_coupling = true;
  Retardation retardation = Retardation::Markovian;

  std::size_t size() const noexcept { return array.size(); }
  bool has_pulse() const noexcept { return !std::holds_alternative<std::monostate>(input); }
  cplx initial(std::size_t j) const {
    return j < initial_excitation.size() ? initial_excitation[j] : cplx{};
  }
  bool has_initial_excitation() const;
  double initial_norm() const;

  // beta0(dk) of whatever input is configured; zero without a pulse.
  cplx input_spectrum(double dk) const;
  // Center of the input spectrum (dk_c), 0 without a pulse.
  double input_center() const;
  // Spectral width scale of the input (Delta_0, or the table half range); 0 without a pulse.
  double input_width() const;

  // Throws ValidationError listing every violated invariant.
  void validate() const;
};

// Physical (SI-like) representation used for unit round trips.
struct PhysicalScale {
  double gamma_ref = 1.0;       // reference rate [1/s]
  double group_velocity = 1.0;  // [m/s]

  double length() const { return group_velocity / gamma_ref; }
  double time() const { return 1.0 / gamma_ref; }
};

struct PhysicalEmitter {
  double z_m;
  double gamma_wg_per_s;
  double gamma_nw_per_s;
  double dk_per_m;
};

struct PhysicalScenario {
  PhysicalScale scale;
  double lambda_m;
  double phi;
  std::vector<PhysicalEmitter> emitters;
  std::optional<GaussianPulse> pulse_per_m;  // width and center in 1/m
  std::vector<cplx> initial_excitation;
  bool include_nw_coupling = true;
  Retardation retardation = Retardation::Markovian;
};

PhysicalScenario to_physical(const Scenario& scenario, const PhysicalScale& scale);
// The rebuilt scenario uses scale.gamma_ref as its rate unit.
Scenario from_physical(const PhysicalScenario& physical);

}  // namespace wgqed
