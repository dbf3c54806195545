#pragma once

// Closed-form one- and two-emitter spectra, written out by hand (no matrix
// algebra) so they can serve as independent references for the general solver.
// All amplitudes use L = v_g = 1 and k = k_a + dk.

#include "wgqed/model.hpp"

namespace wgqed::closed_form {

struct Pair {
  cplx first;   // reflection ratio or left-going amplitude
  cplx second;  // transmission ratio or right-going amplitude
};

// chi = a0 / (V_11 - i (dk - dk_1)) for one emitter driven by the total source a0.
cplx single_chi(double gamma_wg, double gamma_nw, double dk_emitter, double dk, cplx a0);

// One emitter at z: beta_R / beta0 and beta_T / beta0.
Pair single_scattering(double gamma_wg, double gamma_nw, double z, double dk_emitter, double k_a,
                       double dk);

// Two emitters with equal Gamma and gamma, positions z1 < z1 + z12 and
// off-diagonal coupling v12 = V^(w)_12 + V^(nw)_12 (no propagation phase).
struct TwoEmitters {
  double gamma_wg = 1.0;
  double gamma_nw = 0.0;
  double z1 = 0.0;
  double z12 = 0.5;
  double k_a = 1.0;
  double dk1 = 0.0;
  double dk2 = 0.0;
  cplx v12{};

  double v11() const { return 0.5 * (gamma_wg + gamma_nw); }
};

// Extracts the parameters from a two-emitter array; throws ValidationError
// unless the emitters share Gamma and gamma.
TwoEmitters two_emitters(const EmitterArray& array, bool include_nw);

// Identical emitters, alpha_1(0) = 1: (beta_-, beta_+).
Pair identical_decay(const TwoEmitters& p, double dk);
// Identical emitters, photon input: (beta_R, beta_T) / beta0.
Pair identical_scattering(const TwoEmitters& p, double dk);
// Detuned emitters, photon input: (beta_R, beta_T) / beta0 from the M entries.
Pair detuned_scattering(const TwoEmitters& p, double dk);

}  // namespace wgqed::closed_form
