#include "wgqed/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace wgqed {

namespace {

std::string emitter_tag(std::size_t j) { return "emitters[" + std::to_string(j) + "]"; }

}  // namespace

EmitterArray::EmitterArray(std::vector<EmitterParams> emitters, double phi, UnitSystem units)
    : emitters_(std::move(emitters)), phi_(phi), units_(units) {
  std::vector<std::string> issues;
  if (emitters_.empty()) issues.emplace_back("emitters: at least one emitter is required");
  if (!(units_.lambda_a > 0.0) || !std::isfinite(units_.lambda_a))
    issues.emplace_back("lambda_a: must be positive and finite");
  if (!std::isfinite(phi_)) issues.emplace_back("phi: must be finite");

  double max_dk = 0.0;
  double sum_dk = 0.0;
  for (std::size_t j = 0; j < emitters_.size(); ++j) {
    const auto& e = emitters_[j];
    if (!std::isfinite(e.z)) issues.push_back(emitter_tag(j) + ".z: must be finite");
    if (!(e.gamma_wg > 0.0) || !std::isfinite(e.gamma_wg))
      issues.push_back(emitter_tag(j) + ".gamma_wg: must be > 0");
    if (!(e.gamma_nw >= 0.0) || !std::isfinite(e.gamma_nw))
      issues.push_back(emitter_tag(j) + ".gamma_nw: must be >= 0");
    if (!std::isfinite(e.dk)) issues.push_back(emitter_tag(j) + ".dk: must be finite");
    if (j > 0 && e.z < emitters_[j - 1].z)
      issues.push_back(emitter_tag(j) + ".z: emitters must be sorted by ascending position");
    max_dk = std::max(max_dk, std::abs(e.dk));
    sum_dk += e.dk;
  }
  if (!emitters_.empty()) {
    const double mean = sum_dk / static_cast<double>(emitters_.size());
    if (std::abs(mean) > 1e-9 * std::max(1.0, max_dk))
      issues.push_back("emitters[].dk: offsets must average to zero (mean is " +
                       std::to_string(mean) + "); build from absolute wavevectors to recenter");
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

EmitterArray EmitterArray::from_wavevectors(std::span<const AbsoluteEmitter> emitters, double phi) {
  if (emitters.empty()) throw ValidationError("emitters: at least one emitter is required");
  double k_mean = 0.0;
  for (const auto& e : emitters) k_mean += e.k;
  k_mean /= static_cast<double>(emitters.size());
  if (!(k_mean > 0.0)) throw ValidationError("emitters[].k: mean wavevector must be positive");

  std::vector<EmitterParams> params;
  params.reserve(emitters.size());
  for (const auto& e : emitters) params.push_back({e.z, e.gamma_wg, e.gamma_nw, e.k - k_mean});
  // Subtracting the mean leaves a rounding residue; remove it exactly.
  const double residue =
      std::accumulate(params.begin(), params.end(), 0.0,
                      [](double acc, const EmitterParams& p) { return acc + p.dk; }) /
      static_cast<double>(params.size());
  for (auto& p : params) p.dk -= residue;
  return EmitterArray(std::move(params), phi, UnitSystem{kTwoPi / k_mean});
}

double EmitterArray::separation(std::size_t j, std::size_t l) const {
  return std::abs(emitters_[j].z - emitters_[l].z);
}

EmitterArray make_chain(const ChainSpec& spec) {
  std::vector<EmitterParams> params(spec.count);
  const double centre = (static_cast<double>(spec.count) - 1.0) / 2.0;
  for (std::size_t j = 0; j < spec.count; ++j) {
    params[j].z = spec.z0 + static_cast<double>(j) * spec.spacing_lambda * spec.lambda_a;
    params[j].gamma_wg = spec.gamma_wg;
    params[j].gamma_nw = spec.gamma_nw;
    params[j].dk = spec.detuning_step * (centre - static_cast<double>(j));
  }
  return EmitterArray(std::move(params), spec.phi, UnitSystem{spec.lambda_a});
}

double GaussianPulse::fwhm() const {
  return std::sqrt(2.0 * std::log(2.0)) * width * UnitSystem::group_velocity;
}

cplx gaussian_spectrum(const GaussianPulse& pulse, double dk) {
  const double x = (dk - pulse.center_dk) / pulse.width;
  return {std::pow(8.0 * kPi, 0.25) / std::sqrt(pulse.width) * std::exp(-x * x), 0.0};
}

cplx TabulatedSpectrum::at(double k) const {
  if (dk.size() < 2 || k < dk.front() || k > dk.back()) return {};
  const auto it = std::upper_bound(dk.begin(), dk.end(), k);
  const std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - dk.begin()), dk.size() - 1);
  const std::size_t lo = hi - 1;
  const double w = (k - dk[lo]) / (dk[hi] - dk[lo]);
  return (1.0 - w) * amplitude[lo] + w * amplitude[hi];
}

double TabulatedSpectrum::norm() const {
  double sum = 0.0;
  for (std::size_t i = 1; i < dk.size(); ++i)
    sum += 0.5 * (std::norm(amplitude[i]) + std::norm(amplitude[i - 1])) * (dk[i] - dk[i - 1]);
  return sum / kTwoPi;
}

TabulatedSpectrum tabulate(const GaussianPulse& pulse, double half_span_widths, std::size_t points) {
  TabulatedSpectrum table;
  table.dk.resize(points);
  table.amplitude.resize(points);
  const double lo = pulse.center_dk - half_span_widths * pulse.width;
  const double step = 2.0 * half_span_widths * pulse.width / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    table.dk[i] = lo + step * static_cast<double>(i);
    table.amplitude[i] = gaussian_spectrum(pulse, table.dk[i]);
  }
  return table;
}

bool Scenario::has_initial_excitation() const {
  return std::any_of(initial_excitation.begin(), initial_excitation.end(),
                     [](cplx a) { return a != cplx{}; });
}

double Scenario::initial_norm() const {
  double sum = 0.0;
  for (const auto& a : initial_excitation) sum += std::norm(a);
  return sum;
}

cplx Scenario::input_spectrum(double dk) const {
  if (const auto* g = std::get_if<GaussianPulse>(&input)) return gaussian_spectrum(*g, dk);
  if (const auto* t = std::get_if<TabulatedSpectrum>(&input)) return t->at(dk);
  return {};
}

double Scenario::input_center() const {
  if (const auto* g = std::get_if<GaussianPulse>(&input)) return g->center_dk;
  if (const auto* t = std::get_if<TabulatedSpectrum>(&input))
    return t->dk.empty() ? 0.0 : 0.5 * (t->dk.front() + t->dk.back());
  return 0.0;
}

double Scenario::input_width() const {
  if (const auto* g = std::get_if<GaussianPulse>(&input)) return g->width;
  if (const auto* t = std::get_if<TabulatedSpectrum>(&input))
    return t->dk.empty() ? 0.0 : 0.5 * (t->dk.back() - t->dk.front());
  return 0.0;
}

void Scenario::validate() const {
  std::vector<std::string> issues;
  if (initial_excitation.size() > array.size())
    issues.emplace_back("initial_excitation: more entries than emitters");
  for (std::size_t j = 0; j < initial_excitation.size(); ++j)
    if (!std::isfinite(initial_excitation[j].real()) || !std::isfinite(initial_excitation[j].imag()))
      issues.push_back("initial_excitation[" + std::to_string(j) + "]: must be finite");
  if (initial_norm() > 1.0 + 1e-12)
    issues.emplace_back("initial_excitation: sum of |alpha_j(0)|^2 exceeds 1");

  if (const auto* g = std::get_if<GaussianPulse>(&input)) {
    if (!(g->width > 0.0) || !std::isfinite(g->width)) issues.emplace_back("pulse.width: must be > 0");
    if (!std::isfinite(g->center_dk)) issues.emplace_back("pulse.center_dk: must be finite");
  } else if (const auto* t = std::get_if<TabulatedSpectrum>(&input)) {
    if (t->dk.size() < 2 || t->dk.size() != t->amplitude.size())
      issues.emplace_back("spectrum: needs >= 2 points and matching dk/amplitude lengths");
    else if (!std::is_sorted(t->dk.begin(), t->dk.end()) ||
             std::adjacent_find(t->dk.begin(), t->dk.end()) != t->dk.end())
      issues.emplace_back("spectrum.dk: must be strictly ascending");
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

PhysicalScenario to_physical(const Scenario& scenario, const PhysicalScale& scale) {
  PhysicalScenario out;
  out.scale = scale;
  out.lambda_m = scenario.array.lambda_a() * scale.length();
  out.phi = scenario.array.phi();
  for (const auto& e : scenario.array.emitters())
    out.emitters.push_back({e.z * scale.length(), e.gamma_wg * scale.gamma_ref,
                            e.gamma_nw * scale.gamma_ref, e.dk / scale.length()});
  if (const auto* g = std::get_if<GaussianPulse>(&scenario.input))
    out.pulse_per_m = GaussianPulse{g->width / scale.length(), g->center_dk / scale.length()};
  out.initial_excitation = scenario.initial_excitation;
  out.include_nw_coupling = scenario.include_nw_coupling;
  out.retardation = scenario.retardation;
  return out;
}

Scenario from_physical(const PhysicalScenario& physical) {
  const double length = physical.scale.length();
  const double rate = physical.scale.gamma_ref;
  std::vector<EmitterParams> params;
  for (const auto& e : physical.emitters)
    params.push_back({e.z_m / length, e.gamma_wg_per_s / rate, e.gamma_nw_per_s / rate,
                      e.dk_per_m * length});
  Scenario s{EmitterArray(std::move(params), physical.phi, UnitSystem{physical.lambda_m / length})};
  if (physical.pulse_per_m)
    s.input = GaussianPulse{physical.pulse_per_m->width * length, physical.pulse_per_m->center_dk * length};
  s.initial_excitation = physical.initial_excitation;
  s.include_nw_coupling = physical.include_nw_coupling;
  s.retardation = physical.retardation;
  return s;
}

}  // namespace wgqed
