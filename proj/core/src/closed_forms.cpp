#include "wgqed/closed_forms.hpp"

#include <cmath>

#include "wgqed/coupling.hpp"

namespace wgqed::closed_form {

cplx single_chi(double gamma_wg, double gamma_nw, double dk_emitter, double dk, cplx a0) {
  return a0 / (0.5 * (gamma_wg + gamma_nw) - kI * (dk - dk_emitter));
}

Pair single_scattering(double gamma_wg, double gamma_nw, double z, double dk_emitter, double k_a,
                       double dk) {
  const double k = k_a + dk;
  const cplx denom = 0.5 * (gamma_wg + gamma_nw) - kI * (dk - dk_emitter);
  const cplx g = 0.5 * gamma_wg / denom;
  return {-g * std::polar(1.0, 2.0 * k * z), 1.0 - g};
}

TwoEmitters two_emitters(const EmitterArray& array, bool include_nw) {
  if (array.size() != 2) throw ValidationError("closed form: needs exactly two emitters");
  const auto& a = array[0];
  const auto& b = array[1];
  if (a.gamma_wg != b.gamma_wg || a.gamma_nw != b.gamma_nw)
    throw ValidationError("closed form: emitters must share gamma_wg and gamma_nw");
  TwoEmitters p;
  p.gamma_wg = a.gamma_wg;
  p.gamma_nw = a.gamma_nw;
  p.z1 = a.z;
  p.z12 = b.z - a.z;
  p.k_a = array.k_a();
  p.dk1 = a.dk;
  p.dk2 = b.dk;
  p.v12 = 0.5 * p.gamma_wg;
  if (include_nw) p.v12 += nonwaveguide_coupling(p.gamma_nw, p.gamma_nw, p.k_a * p.z12, array.phi());
  return p;
}

Pair identical_decay(const TwoEmitters& p, double dk) {
  const double k = p.k_a + dk;
  const cplx a = p.v11() - kI * dk;
  const cplx e2 = std::polar(1.0, 2.0 * k * p.z12);
  const cplx denom = a * a - p.v12 * p.v12 * e2;
  const cplx pre = -kI * std::sqrt(0.5 * p.gamma_wg);
  return {pre * std::polar(1.0, k * p.z1) * (a - p.v12 * e2) / denom,
          pre * std::polar(1.0, -k * p.z1) * (a - p.v12) / denom};
}

Pair identical_scattering(const TwoEmitters& p, double dk) {
  const double k = p.k_a + dk;
  const cplx a = p.v11() - kI * dk;
  const cplx e2 = std::polar(1.0, 2.0 * k * p.z12);
  const cplx denom = a * a - p.v12 * p.v12 * e2;
  const double g = 0.5 * p.gamma_wg;
  const cplx r = -g * std::polar(1.0, 2.0 * k * p.z1) * (a * (1.0 + e2) - 2.0 * p.v12 * e2) / denom;
  const cplx t = 1.0 - g * (2.0 * a - p.v12 * (1.0 + e2)) / denom;
  return {r, t};
}

Pair detuned_scattering(const TwoEmitters& p, double dk) {
  const double k = p.k_a + dk;
  const cplx m11 = p.v11() - kI * (dk - p.dk1);
  const cplx m22 = p.v11() - kI * (dk - p.dk2);
  const cplx e1 = std::polar(1.0, k * p.z12);
  const cplx m12 = p.v12 * e1;
  const cplx denom = m11 * m22 - m12 * m12;
  const double g = 0.5 * p.gamma_wg;
  const cplx r = g * std::polar(1.0, 2.0 * k * p.z1) * (2.0 * m12 * e1 - m11 * e1 * e1 - m22) / denom;
  const cplx t = 1.0 - g * (m11 + m22 - 2.0 * m12 * std::cos(k * p.z12)) / denom;
  return {r, t};
}

}  // namespace wgqed::closed_form
