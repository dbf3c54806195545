#include "wgqed/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "json.hpp"
#include "wgqed/csv.hpp"
#include "wgqed/parallel.hpp"

namespace wgqed {

namespace {

constexpr double kCanonicalHalfSpan = 20.0;
constexpr std::size_t kCanonicalPoints = 16001;

void require_same_grid(const SpectrumGrid& a, const SpectrumGrid& b) {
  if (a.size() != b.size()) throw GridError("spectrum_difference: grids have different sizes");
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({1.0, std::abs(a.dk[i]), std::abs(b.dk[i])});
    if (std::abs(a.dk[i] - b.dk[i]) > 1e-12 * scale)
      throw GridError("spectrum_difference: grids differ at index " + std::to_string(i));
  }
}

void optional_number(std::ostream& out, const std::optional<double>& v) {
  if (v) out << csv::number(*v);
}

}  // namespace

SpectrumDifference spectrum_difference(const SpectrumGrid& with, const SpectrumGrid& without) {
  require_same_grid(with, without);
  const auto r1 = with.intensity(Channel::Reflection);
  const auto r2 = without.intensity(Channel::Reflection);
  const auto t1 = with.intensity(Channel::Transmission);
  const auto t2 = without.intensity(Channel::Transmission);
  double rn = 0.0, rd = 0.0, tn = 0.0, td = 0.0;
  for (std::size_t i = 0; i < with.size(); ++i) {
    rn += std::abs(r1[i] - r2[i]);
    rd += r1[i] + r2[i];
    tn += std::abs(t1[i] - t2[i]);
    td += 2.0 - t1[i] - t2[i];
  }
  SpectrumDifference d;
  d.reflection_term = rd > 0.0 ? rn / rd : 0.0;
  d.transmission_term = td > 0.0 ? tn / td : 0.0;
  d.value = 0.5 * (d.reflection_term + d.transmission_term);
  d.points = with.size();
  if (!with.dk.empty()) {
    d.dk_min = with.dk.front();
    d.dk_max = with.dk.back();
  }
  return d;
}

std::vector<double> canonical_difference_grid(const Scenario& scenario) {
  return uniform_grid(scenario.input_center(), kCanonicalHalfSpan, kCanonicalPoints);
}

SpectrumDifference nw_spectrum_difference(const Scenario& scenario, std::span<const double> grid,
                                          unsigned threads) {
  Scenario with = scenario;
  with.include_nw_coupling = true;
  Scenario without = scenario;
  without.include_nw_coupling = false;
  SpectraOptions options;
  options.threads = threads;
  return spectrum_difference(scattering_spectra(with, grid, options), scattering_spectra(without, grid, options));
}

std::vector<Peak> PeakCatalogue::dominant() const {
  std::vector<Peak> sorted = peaks;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Peak& a, const Peak& b) {
    if (a.height != b.height) return a.height > b.height;
    return std::abs(a.position) > std::abs(b.position);
  });
  if (sorted.size() > 2) sorted.resize(2);
  return sorted;
}

PeakCatalogue find_peaks(std::span<const double> dk, std::span<const double> y, const PeakOptions& options) {
  if (dk.size() != y.size()) throw GridError("find_peaks: grid and intensity sizes differ");
  PeakCatalogue cat;
  const std::size_t n = y.size();
  if (n < 3) return cat;
  const double top = *std::max_element(y.begin(), y.end());
  if (!(top > 0.0)) return cat;

  auto crossing = [&](std::size_t a, std::size_t b, double level) {
    const double f = (level - y[a]) / (y[b] - y[a]);
    return dk[a] + f * (dk[b] - dk[a]);
  };

  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1]) || y[i] < options.threshold * top) continue;
    const double half = 0.5 * y[i];

    std::optional<double> left;
    for (std::size_t j = i; j > 0; --j) {
      if (y[j - 1] > y[i]) break;
      if (y[j - 1] <= half) {
        left = crossing(j - 1, j, half);
        break;
      }
    }
    std::optional<double> right;
    for (std::size_t j = i; j + 1 < n; ++j) {
      if (y[j + 1] > y[i]) break;
      if (y[j + 1] <= half) {
        right = crossing(j, j + 1, half);
        break;
      }
    }

    Peak p;
    p.index = i;
    p.position = dk[i];
    p.height = y[i];
    if (left && right)
      p.fwhm = *right - *left;
    else if (left)
      p.fwhm = 2.0 * (dk[i] - *left);
    else if (right)
      p.fwhm = 2.0 * (*right - dk[i]);
    else {
      cat.warnings.push_back("peak at " + csv::number(dk[i]) + " has no half-maximum crossing; skipped");
      continue;
    }
    const double step = 0.5 * (dk[i + 1] - dk[i - 1]);
    if (p.fwhm < options.min_steps_per_fwhm * step)
      cat.warnings.push_back("peak at " + csv::number(dk[i]) + " is under-resolved (fwhm " +
                             csv::number(p.fwhm) + ", step " + csv::number(step) + ")");
    cat.peaks.push_back(p);
  }

  const auto top_two = cat.dominant();
  if (top_two.size() == 2) {
    cat.separation = std::abs(top_two[0].position - top_two[1].position);
    cat.linewidth_difference = std::abs(top_two[0].fwhm - top_two[1].fwhm);
  }
  return cat;
}

PeakCatalogue find_peaks(const SpectrumGrid& grid, Channel channel, const PeakOptions& options) {
  const auto y = grid.intensity(channel);
  return find_peaks(grid.dk, y, options);
}

std::vector<TransitionRow> coupling_transition_sweep(const Scenario& base, std::span<const double> detunings,
                                                     const SweepOptions& options) {
  std::vector<TransitionRow> rows(detunings.size());
  parallel_for(detunings.size(), options.threads, [&](std::size_t i) {
    const Scenario s = with_parameter(base, SweepParameter::Dw12, detunings[i]);
    const auto grid = default_grid(s, options.grid);
    const auto cat = find_peaks(scattering_spectra(s, grid), options.channel, options.peaks);
    rows[i] = {detunings[i], cat.peaks.size(), cat.separation, cat.linewidth_difference};
  });
  return rows;
}

SweepParameter parse_sweep_parameter(const std::string& name) {
  if (name == "r12") return SweepParameter::R12;
  if (name == "dw12") return SweepParameter::Dw12;
  if (name == "gamma_nw") return SweepParameter::GammaNw;
  if (name == "delta0") return SweepParameter::Delta0;
  throw ValidationError("unknown sweep parameter '" + name + "' (expected r12, dw12, gamma_nw or delta0)");
}

const char* sweep_parameter_name(SweepParameter p) {
  switch (p) {
    case SweepParameter::R12: return "r12";
    case SweepParameter::Dw12: return "dw12";
    case SweepParameter::GammaNw: return "gamma_nw";
    case SweepParameter::Delta0: return "delta0";
  }
  return "unknown";
}

Scenario with_parameter(const Scenario& base, SweepParameter p, double value) {
  if (!std::isfinite(value)) throw ValidationError("sweep value must be finite");
  std::vector<EmitterParams> emitters(base.array.emitters().begin(), base.array.emitters().end());
  Scenario out = base;
  switch (p) {
    case SweepParameter::R12:
      if (emitters.size() != 2) throw ValidationError("r12 sweep needs exactly two emitters");
      if (!(value > 0.0)) throw ValidationError("r12 must be positive");
      emitters[1].z = emitters[0].z + value * base.array.lambda_a();
      break;
    case SweepParameter::Dw12:
      if (emitters.size() != 2) throw ValidationError("dw12 sweep needs exactly two emitters");
      emitters[0].dk = 0.5 * value / UnitSystem::group_velocity;
      emitters[1].dk = -0.5 * value / UnitSystem::group_velocity;
      break;
    case SweepParameter::GammaNw:
      if (value < 0.0) throw ValidationError("gamma_nw must be non-negative");
      for (auto& e : emitters) e.gamma_nw = value;
      break;
    case SweepParameter::Delta0: {
      auto* g = std::get_if<GaussianPulse>(&out.input);
      if (!g) throw ValidationError("delta0 sweep needs a Gaussian pulse");
      if (!(value > 0.0)) throw ValidationError("delta0 must be positive");
      g->width = value;
      return out;
    }
  }
  out.array = EmitterArray(std::move(emitters), base.array.phi(), base.array.units());
  return out;
}

std::vector<SweepRow> run_sweep(const Scenario& base, SweepParameter p, std::span<const double> values,
                                const SweepOptions& options) {
  if (!base.has_pulse()) throw MissingDriveError("sweep: scenario needs an input photon");
  std::vector<SweepRow> rows(values.size());
  parallel_for(values.size(), options.threads, [&](std::size_t i) {
    const Scenario s = with_parameter(base, p, values[i]);
    SweepRow row;
    row.value = values[i];
    row.delta_sd = nw_spectrum_difference(s, canonical_difference_grid(s)).value;
    const auto cat = find_peaks(scattering_spectra(s, default_grid(s, options.grid)), options.channel, options.peaks);
    row.peak_count = cat.peaks.size();
    row.separation = cat.separation;
    row.linewidth_difference = cat.linewidth_difference;
    rows[i] = row;
  });
  return rows;
}

void write_sweep_csv(std::ostream& out, SweepParameter p, const std::vector<SweepRow>& rows) {
  out << sweep_parameter_name(p) << ",delta_sd,peak_count,separation,linewidth_difference\n";
  for (const auto& r : rows) {
    out << csv::number(r.value) << ',' << csv::number(r.delta_sd) << ',' << r.peak_count << ',';
    optional_number(out, r.separation);
    out << ',';
    optional_number(out, r.linewidth_difference);
    out << '\n';
  }
}

void write_transition_csv(std::ostream& out, const std::vector<TransitionRow>& rows) {
  out << "dw12,peak_count,separation,linewidth_difference\n";
  for (const auto& r : rows) {
    out << csv::number(r.detuning) << ',' << r.peak_count << ',';
    optional_number(out, r.separation);
    out << ',';
    optional_number(out, r.linewidth_difference);
    out << '\n';
  }
}

std::vector<double> linear_space(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

std::vector<double> log_space(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > 0.0)) throw ValidationError("log_space: bounds must be positive");
  auto out = linear_space(std::log(lo), std::log(hi), count);
  for (auto& v : out) v = std::exp(v);
  if (count > 1) {
    out.front() = lo;
    out.back() = hi;
  }
  return out;
}

std::optional<double> find_crossing(std::span<const double> x, std::span<const double> y, double level,
                                    bool log_x) {
  if (x.size() != y.size()) throw GridError("find_crossing: size mismatch");
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = y[i] - level;
    const double b = y[i + 1] - level;
    if (a == 0.0) return x[i];
    if ((a < 0.0) == (b < 0.0) && b != 0.0) continue;
    const double f = a / (a - b);
    if (log_x) return std::exp(std::log(x[i]) + f * (std::log(x[i + 1]) - std::log(x[i])));
    return x[i] + f * (x[i + 1] - x[i]);
  }
  return std::nullopt;
}

AuditReport conservation_audit(const Scenario& scenario, const AmplitudeTrajectory& trajectory,
                               const SpectrumGrid& grid) {
  AuditReport r;
  if (trajectory.samples() > 0) {
    r.initial_population = trajectory.population(0);
    r.survivors = trajectory.population(trajectory.samples() - 1);
  }
  if (grid.kind == SpectrumKind::Decay) {
    r.decay = true;
    const auto b = waveguide_branching(grid);
    r.guided = b.fraction;
    r.truncated = b.truncated;
    r.nonguided = r.initial_population - r.survivors - r.guided;
    if (b.truncated) r.flags.push_back("decay grid truncates the emission tails");
    if (r.nonguided < -1e-3) r.flags.push_back("guided emission exceeds the initial population");
    return r;
  }
  const auto refl = grid.intensity(Channel::Reflection);
  const auto trans = grid.intensity(Channel::Transmission);
  for (std::size_t i = 0; i < grid.size(); ++i)
    r.unitarity_residual = std::max(r.unitarity_residual, std::abs(refl[i] + trans[i] - 1.0));
  const bool lossless = std::all_of(scenario.array.emitters().begin(), scenario.array.emitters().end(),
                                    [](const EmitterParams& e) { return e.gamma_nw == 0.0; });
  if (lossless && r.unitarity_residual > 1e-9) r.flags.push_back("unitarity residual above 1e-9");
  return r;
}

void write_audit_json(std::ostream& out, const AuditReport& report) {
  nlohmann::ordered_json j;
  j["kind"] = report.decay ? "decay" : "scattering";
  if (report.decay) {
    j["initial_population"] = report.initial_population;
    j["survivors"] = report.survivors;
    j["guided"] = report.guided;
    j["nonguided"] = report.nonguided;
    j["truncated"] = report.truncated;
  } else {
    j["unitarity_residual"] = report.unitarity_residual;
  }
  j["flags"] = report.flags;
  out << j.dump(2) << '\n';
}

}  // namespace wgqed
