#include "wgqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "wgqed/coupling.hpp"
#include "wgqed/csv.hpp"

namespace wgqed {

namespace {

constexpr double kMaxDefaultTime = 1e4;
constexpr double kStabilityLimit = 2.5;

cplx tabulated_drive(const TabulatedSpectrum& table, const EmitterArray& array, std::size_t j,
                     double t) {
  const auto& e = array[j];
  const double s = e.z - t * UnitSystem::group_velocity;
  cplx integral{};
  for (std::size_t i = 1; i < table.dk.size(); ++i) {
    const cplx f0 = table.amplitude[i - 1] * std::polar(1.0, table.dk[i - 1] * s);
    const cplx f1 = table.amplitude[i] * std::polar(1.0, table.dk[i] * s);
    integral += 0.5 * (f0 + f1) * (table.dk[i] - table.dk[i - 1]);
  }
  const double prefactor = std::sqrt(e.gamma_wg * UnitSystem::group_velocity / 2.0) / kTwoPi;
  const double phase = array.k_a() * e.z + e.dk * UnitSystem::group_velocity * t;
  return -kI * prefactor * std::polar(1.0, phase) * integral;
}

// Cubic Hermite interpolation on a uniform grid t_n = n h, zero before t = 0.
class History {
 public:
  History(std::size_t emitters, double step) : step_(step), values_(emitters), slopes_(emitters) {}

  void push(std::size_t j, cplx value, cplx slope) {
    values_[j].push_back(value);
    slopes_[j].push_back(slope);
  }

  cplx at(std::size_t j, double t) const {
    if (t < 0.0) return {};
    const auto& v = values_[j];
    const auto& d = slopes_[j];
    const double pos = t / step_;
    auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= v.size()) {
      if (i < v.size() && pos - static_cast<double>(i) < 1e-9) return v[i];
      throw NumericalError("delayed lookup beyond stored history at t = " + std::to_string(t));
    }
    const double s = pos - static_cast<double>(i);
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * v[i] + (s3 - 2 * s2 + s) * step_ * d[i] +
           (-2 * s3 + 3 * s2) * v[i + 1] + (s3 - s2) * step_ * d[i + 1];
  }

 private:
  double step_;
  std::vector<std::vector<cplx>> values_;
  std::vector<std::vector<cplx>> slopes_;
};

}  // namespace

cplx drive(const Scenario& scenario, std::size_t j, double t) {
  const auto& array = scenario.array;
  if (const auto* g = std::get_if<GaussianPulse>(&scenario.input)) {
    const auto& e = array[j];
    const double v = UnitSystem::group_velocity;
    const double envelope = std::exp(-0.25 * g->width * g->width * (e.z - v * t) * (e.z - v * t));
    const double amplitude = std::pow(8.0 * kPi, -0.25) * std::sqrt(e.gamma_wg * g->width * v);
    // Carrier k0 = k_a + dk_c; the emitter rotates at its own offset dk_j.
    const double phase = (array.k_a() + g->center_dk) * e.z + (e.dk - g->center_dk) * v * t;
    return -kI * amplitude * envelope * std::polar(1.0, phase);
  }
  if (const auto* table = std::get_if<TabulatedSpectrum>(&scenario.input))
    return tabulated_drive(*table, array, j, t);
  throw MissingDriveError("drive: scenario has no input photon");
}

double AmplitudeTrajectory::population(std::size_t n) const {
  double sum = 0.0;
  for (const auto& a : alpha) sum += std::norm(a[n]);
  return sum;
}

double default_t_max(const Scenario& scenario) {
  // poles of the detuned system: G + i diag(dk_j)
  Eigen::MatrixXcd g = build_couplings(scenario).effective;
  for (std::size_t j = 0; j < scenario.size(); ++j)
    g(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) += kI * scenario.array[j].dk * UnitSystem::group_velocity;
  const auto modes = collective_modes(g);
  double slowest = std::numeric_limits<double>::infinity();
  for (const auto& m : modes) slowest = std::min(slowest, m.linewidth());
  double t = slowest > 10.0 / kMaxDefaultTime ? 10.0 / slowest : kMaxDefaultTime;
  if (scenario.has_pulse()) {
    double z_max = 0.0;
    for (const auto& e : scenario.array.emitters()) z_max = std::max(z_max, e.z);
    const double width = scenario.input_width();
    t += z_max / UnitSystem::group_velocity + (width > 0.0 ? 8.0 / width : 0.0);
  }
  return std::min(t, kMaxDefaultTime);
}

AmplitudeTrajectory evolve(const Scenario& scenario, const EvolveOptions& options) {
  scenario.validate();
  const auto& array = scenario.array;
  const std::size_t n = array.size();
  const double h = options.step;
  const double t_max = options.t_max > 0.0 ? options.t_max : default_t_max(scenario);
  if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("evolve: step must be positive");
  if (!std::isfinite(t_max)) throw ValidationError("evolve: t_max must be finite");
  if (options.output_stride == 0) throw ValidationError("evolve: output_stride must be >= 1");

  const bool full = scenario.retardation == Retardation::Full;
  const bool driven = scenario.has_pulse();
  const auto couplings = build_couplings(scenario);
  const Eigen::MatrixXcd total = couplings.total();

  // coeff(j, l) = V_jl exp(i k_l z_jl); delay(j, l) = z_jl / v_g.
  Eigen::MatrixXcd coeff(n, n);
  Eigen::MatrixXd delay = Eigen::MatrixXd::Zero(n, n);
  double min_delay = std::numeric_limits<double>::infinity();
  double max_row = 0.0;
  double max_detuning = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double row = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      const double z = array.separation(j, l);
      coeff(j, l) = total(j, l) * (j == l ? cplx{1.0} : std::polar(1.0, array.k_of(l) * z));
      delay(j, l) = z / UnitSystem::group_velocity;
      if (j != l) min_delay = std::min(min_delay, delay(j, l));
      row += std::abs(coeff(j, l));
      max_detuning = std::max(max_detuning, std::abs(array[j].dk - array[l].dk));
    }
    max_row = std::max(max_row, row);
  }
  const double rate_scale = max_row + max_detuning * UnitSystem::group_velocity +
                            (driven ? scenario.input_width() * UnitSystem::group_velocity : 0.0);
  if (h * rate_scale > kStabilityLimit)
    throw ValidationError("evolve: step " + std::to_string(h) + " too large for rate scale " +
                          std::to_string(rate_scale) + " (need step * rate <= " +
                          std::to_string(kStabilityLimit) + ")");
  if (full && n > 1 && h > min_delay / 4.0)
    throw ValidationError("evolve: full retardation needs step <= min_delay / 4 = " +
                          std::to_string(min_delay / 4.0));

  const auto steps = static_cast<std::size_t>(std::llround(t_max / h));
  if (steps == 0) throw ValidationError("evolve: t_max shorter than one step");

  History history(n, h);
  std::vector<cplx> rot(n);

  auto rhs = [&](double t, const std::vector<cplx>& x, std::vector<cplx>& out) {
    for (std::size_t l = 0; l < n; ++l)
      rot[l] = std::polar(1.0, array[l].dk * UnitSystem::group_velocity * t);
    for (std::size_t j = 0; j < n; ++j) {
      cplx sum{};
      for (std::size_t l = 0; l < n; ++l) {
        const cplx value = (!full || l == j) ? x[l] : history.at(l, t - delay(j, l));
        sum += coeff(j, l) * std::conj(rot[l]) * value;
      }
      out[j] = (driven ? drive(scenario, j, t) : cplx{}) - rot[j] * sum;
    }
  };

  AmplitudeTrajectory traj;
  traj.integration_step = h;
  traj.sample_step = h * static_cast<double>(options.output_stride);
  traj.alpha.assign(n, {});
  if (options.record_drive && driven) traj.drive.assign(n, {});
  const std::size_t kept = steps / options.output_stride + 1;
  traj.times.reserve(kept);
  for (auto& a : traj.alpha) a.reserve(kept);

  std::vector<cplx> state(n);
  for (std::size_t j = 0; j < n; ++j) state[j] = scenario.initial(j);
  std::vector<cplx> k1(n), k2(n), k3(n), k4(n), tmp(n);

  auto record = [&](std::size_t step, double t) {
    if (step % options.output_stride != 0) return;
    traj.times.push_back(t);
    for (std::size_t j = 0; j < n; ++j) {
      traj.alpha[j].push_back(state[j]);
      if (!traj.drive.empty()) traj.drive[j].push_back(drive(scenario, j, t));
    }
  };

  for (std::size_t s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) * h;
    rhs(t, state, k1);
    if (full)
      for (std::size_t j = 0; j < n; ++j) history.push(j, state[j], k1[j]);
    record(s, t);

    for (std::size_t j = 0; j < n; ++j) tmp[j] = state[j] + 0.5 * h * k1[j];
    rhs(t + 0.5 * h, tmp, k2);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = state[j] + 0.5 * h * k2[j];
    rhs(t + 0.5 * h, tmp, k3);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = state[j] + h * k3[j];
    rhs(t + h, tmp, k4);
    for (std::size_t j = 0; j < n; ++j) {
      state[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
      if (!std::isfinite(state[j].real()) || !std::isfinite(state[j].imag()))
        throw NumericalError("evolve: non-finite amplitude for emitter " + std::to_string(j) +
                             " at t = " + std::to_string(t + h));
    }
  }
  record(steps, static_cast<double>(steps) * h);
  return traj;
}

std::vector<std::vector<double>> excitation_probabilities(const AmplitudeTrajectory& trajectory) {
  std::vector<std::vector<double>> out(trajectory.emitters());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j].reserve(trajectory.samples());
    for (const auto& a : trajectory.alpha[j]) out[j].push_back(std::norm(a));
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, const AmplitudeTrajectory& trajectory) {
  const std::size_t n = trajectory.emitters();
  out << 't';
  for (std::size_t j = 1; j <= n; ++j) out << ",re_alpha_" << j << ",im_alpha_" << j;
  for (std::size_t j = 1; j <= n; ++j) out << ",abs2_alpha_" << j;
  out << '\n';
  for (std::size_t s = 0; s < trajectory.samples(); ++s) {
    out << csv::number(trajectory.times[s]);
    for (std::size_t j = 0; j < n; ++j)
      out << ',' << csv::number(trajectory.alpha[j][s].real()) << ','
          << csv::number(trajectory.alpha[j][s].imag());
    for (std::size_t j = 0; j < n; ++j) out << ',' << csv::number(std::norm(trajectory.alpha[j][s]));
    out << '\n';
  }
}

}  // namespace wgqed
