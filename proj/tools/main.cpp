// wgqed: command-line front end.
//
//   wgqed simulate --config fig2c.json --out run/
//   wgqed spectrum --config fig6a.json --out run/ --peaks
//   wgqed sweep    --config fig4.json --param r12 --range 0.005 2 40 --log
//   wgqed verify   [--perturb-coupling 1e-3] [--report report.json]
//
// Exit codes: 0 ok, 1 validation, 2 numerical, 3 I/O, 4 verification failed.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "checks.hpp"
#include "json.hpp"
#include "wgqed/analysis.hpp"
#include "wgqed/coupling.hpp"
#include "wgqed/dynamics.hpp"
#include "wgqed/scenario_io.hpp"
#include "wgqed/spectra.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kValidation = 1, kNumerical = 2, kIo = 3, kVerifyFailed = 4 };

struct Globals {
  std::string config;
  std::string out = ".";
  unsigned threads = 1;
  std::optional<double> grid_span;
  std::optional<std::size_t> grid_points;
  bool no_nw = false;
  bool markovian = false;
  bool retarded = false;
  bool peaks = false;
};

// Settings a config may carry in its "simulation", "grid" and "sweep" sections.
struct ConfigExtras {
  json simulation = json::object();
  json grid = json::object();
  json sweep = json::object();
};

ConfigExtras read_extras(const std::string& text) {
  ConfigExtras x;
  const auto root = json::parse(text, nullptr, false);
  if (root.is_discarded() || !root.is_object()) return x;
  for (auto [key, slot] : {std::pair{"simulation", &x.simulation}, {"grid", &x.grid}, {"sweep", &x.sweep}}) {
    if (!root.contains(key)) continue;
    if (!root[key].is_object()) throw wgqed::ValidationError(std::string(key) + ": expected an object");
    *slot = root[key];
  }
  return x;
}

template <typename T>
T setting(const json& section, const char* key, T fallback) {
  if (!section.contains(key)) return fallback;
  try {
    return section[key].get<T>();
  } catch (const json::exception&) {
    throw wgqed::ValidationError(std::string(key) + ": wrong type");
  }
}

struct Loaded {
  wgqed::Scenario scenario;
  ConfigExtras extras;
};

Loaded load(const Globals& g) {
  if (g.config.empty()) throw wgqed::ValidationError("--config is required");
  const std::string text = wgqed::read_text_file(g.config);
  Loaded l{wgqed::parse_scenario(text), read_extras(text)};
  if (g.no_nw) l.scenario.include_nw_coupling = false;
  if (g.markovian && g.retarded) throw wgqed::ValidationError("--markovian and --retarded are exclusive");
  if (g.markovian) l.scenario.retardation = wgqed::Retardation::Markovian;
  if (g.retarded) l.scenario.retardation = wgqed::Retardation::Full;
  return l;
}

fs::path prepare_out(const Globals& g) {
  const fs::path dir(g.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw wgqed::IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw wgqed::IoError("cannot write " + path.string());
  f << content;
  if (!f) throw wgqed::IoError("write failed for " + path.string());
}

json manifest(const std::string& command, const Loaded& l, const Globals& g, json parameters,
              const std::vector<fs::path>& outputs, double seconds, const std::string& normalization = {}) {
  json m;
  m["tool"] = "wgqed";
  m["version"] = kVersion;
  m["command"] = command;
  m["config"] = g.config;
  m["scenario_hash"] = wgqed::scenario_hash(l.scenario);
  m["include_nw_coupling"] = l.scenario.include_nw_coupling;
  m["retardation"] = l.scenario.retardation == wgqed::Retardation::Full ? "full" : "markovian";
  m["parameters"] = std::move(parameters);
  if (!normalization.empty()) m["normalization"] = normalization;
  m["threads"] = g.threads;
  m["wall_clock_seconds"] = seconds;
  m["outputs"] = json::array();
  for (const auto& p : outputs) m["outputs"].push_back(p.filename().string());
  return m;
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_simulate(const Globals& g, std::optional<double> t_max, std::optional<double> step,
                 std::optional<std::size_t> stride) {
  const auto start = std::chrono::steady_clock::now();
  const auto l = load(g);
  wgqed::EvolveOptions opt;
  opt.t_max = t_max.value_or(setting(l.extras.simulation, "t_max", 0.0));
  opt.step = step.value_or(setting(l.extras.simulation, "step", opt.step));
  opt.output_stride = stride.value_or(setting<std::size_t>(l.extras.simulation, "output_stride", 10));
  const auto traj = wgqed::evolve(l.scenario, opt);

  const auto dir = prepare_out(g);
  std::ostringstream csv;
  wgqed::write_trajectory_csv(csv, traj);
  const auto csv_path = dir / "trajectory.csv";
  write_file(csv_path, csv.str());

  double slowest = std::numeric_limits<double>::infinity();
  for (const auto& mu : wgqed::spectral_poles(l.scenario)) slowest = std::min(slowest, mu.real());
  const double survival = traj.population(traj.samples() - 1);

  json params;
  params["t_max"] = traj.t_end();
  params["step"] = traj.integration_step;
  params["output_stride"] = opt.output_stride;
  const auto manifest_path = dir / "simulate_manifest.json";
  write_file(manifest_path,
             manifest("simulate", l, g, params, {csv_path, manifest_path}, elapsed(start)).dump(2) + "\n");

  std::printf("final survival probability %.6g at t = %.6g\n", survival, traj.t_end());
  std::printf("slowest mode decay rate %.6g (linewidth %.6g)\n", slowest, 2.0 * slowest);
  std::printf("wrote %s\n", csv_path.string().c_str());
  return kOk;
}

wgqed::Channel parse_channel(const std::string& name) {
  using wgqed::Channel;
  if (name == "reflection") return Channel::Reflection;
  if (name == "transmission") return Channel::Transmission;
  if (name == "left") return Channel::Left;
  if (name == "right") return Channel::Right;
  throw wgqed::ValidationError("unknown channel '" + name + "' (reflection, transmission, left, right)");
}

wgqed::DefaultGridOptions grid_options(const Globals& g, const ConfigExtras& x) {
  wgqed::DefaultGridOptions o;
  o.points = g.grid_points.value_or(setting<std::size_t>(x.grid, "points", o.points));
  if (g.grid_span)
    o.half_span = *g.grid_span;
  else if (x.grid.contains("half_span"))
    o.half_span = setting(x.grid, "half_span", 0.0);
  o.refinement = setting(x.grid, "refinement", o.refinement);
  if (o.points < 2) throw wgqed::ValidationError("--grid-points must be >= 2");
  if (o.half_span && !(*o.half_span > 0.0)) throw wgqed::ValidationError("--grid-span must be positive");
  return o;
}

json peaks_json(const wgqed::PeakCatalogue& cat, wgqed::Channel channel) {
  json j;
  j["channel"] = wgqed::channel_name(channel);
  j["peaks"] = json::array();
  for (const auto& p : cat.peaks)
    j["peaks"].push_back({{"position", p.position}, {"height", p.height}, {"fwhm", p.fwhm}});
  j["separation"] = cat.separation ? json(*cat.separation) : json(nullptr);
  j["linewidth_difference"] = cat.linewidth_difference ? json(*cat.linewidth_difference) : json(nullptr);
  j["warnings"] = cat.warnings;
  return j;
}

int cmd_spectrum(const Globals& g, const std::string& channel_flag) {
  const auto start = std::chrono::steady_clock::now();
  const auto l = load(g);
  const auto gopt = grid_options(g, l.extras);
  const auto grid = wgqed::default_grid(l.scenario, gopt);
  wgqed::SpectraOptions sopt;
  sopt.threads = g.threads;
  const bool scattering = l.scenario.has_pulse();
  const auto spec = scattering ? wgqed::scattering_spectra(l.scenario, grid, sopt)
                               : wgqed::decay_spectra(l.scenario, grid, sopt);

  const auto dir = prepare_out(g);
  std::ostringstream csv;
  wgqed::write_spectrum_csv(csv, spec);
  const auto csv_path = dir / "spectrum.csv";
  write_file(csv_path, csv.str());
  std::vector<fs::path> outputs{csv_path};

  if (g.peaks) {
    const auto channel = channel_flag.empty()
                             ? (scattering ? wgqed::Channel::Reflection : wgqed::Channel::Left)
                             : parse_channel(channel_flag);
    const auto cat = wgqed::find_peaks(spec, channel);
    const auto peaks_path = dir / "peaks.json";
    write_file(peaks_path, peaks_json(cat, channel).dump(2) + "\n");
    outputs.push_back(peaks_path);
    std::printf("%zu %s peaks\n", cat.peaks.size(), wgqed::channel_name(channel));
    for (const auto& p : cat.peaks)
      std::printf("  dk = %+.6f  height = %.6g  fwhm = %.6g\n", p.position, p.height, p.fwhm);
    for (const auto& w : cat.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  }

  json params;
  params["grid_points"] = grid.size();
  params["grid_min"] = grid.front();
  params["grid_max"] = grid.back();
  params["grid_refinement"] = gopt.refinement;
  params["regularized_points"] = spec.regularized.size();
  const auto manifest_path = dir / "spectrum_manifest.json";
  outputs.push_back(manifest_path);
  write_file(manifest_path,
             manifest("spectrum", l, g, params, outputs, elapsed(start), spec.normalization()).dump(2) + "\n");
  if (!spec.regularized.empty())
    std::fprintf(stderr, "warning: %zu grid points hit a singular M(dk) and were offset by %g\n",
                 spec.regularized.size(), wgqed::kRegularizationOffset);
  std::printf("wrote %s (%zu points, %s)\n", csv_path.string().c_str(), grid.size(), spec.normalization().c_str());
  return kOk;
}

int cmd_sweep(const Globals& g, std::string param, std::vector<double> range, bool log_spacing) {
  const auto start = std::chrono::steady_clock::now();
  const auto l = load(g);
  if (param.empty()) param = setting<std::string>(l.extras.sweep, "param", "");
  if (param.empty()) throw wgqed::ValidationError("--param is required");
  if (range.empty()) range = setting<std::vector<double>>(l.extras.sweep, "range", {});
  if (!log_spacing) log_spacing = setting(l.extras.sweep, "log", false);
  if (range.size() != 3) throw wgqed::ValidationError("--range needs LO HI COUNT");
  for (const double v : range)
    if (!std::isfinite(v)) throw wgqed::ValidationError("--range values must be finite");
  if (range[2] < 1 || range[2] != std::floor(range[2])) throw wgqed::ValidationError("--range COUNT must be a positive integer");

  const auto p = wgqed::parse_sweep_parameter(param);
  const auto count = static_cast<std::size_t>(range[2]);
  const auto values = log_spacing ? wgqed::log_space(range[0], range[1], count)
                                  : wgqed::linear_space(range[0], range[1], count);
  wgqed::SweepOptions so;
  so.threads = g.threads;
  so.grid = grid_options(g, l.extras);
  const auto rows = wgqed::run_sweep(l.scenario, p, values, so);

  const auto dir = prepare_out(g);
  std::ostringstream csv;
  wgqed::write_sweep_csv(csv, p, rows);
  const auto csv_path = dir / "sweep.csv";
  write_file(csv_path, csv.str());

  json params;
  params["param"] = wgqed::sweep_parameter_name(p);
  params["range"] = range;
  params["log"] = log_spacing;
  const auto manifest_path = dir / "sweep_manifest.json";
  write_file(manifest_path, manifest("sweep", l, g, params, {csv_path, manifest_path}, elapsed(start)).dump(2) + "\n");

  std::vector<double> x, y;
  for (const auto& r : rows) {
    x.push_back(r.value);
    y.push_back(r.delta_sd);
  }
  if (const auto c = wgqed::find_crossing(x, y, 0.5, log_spacing)) std::printf("delta_sd crosses 0.5 at %s = %.6g\n", param.c_str(), *c);
  std::printf("wrote %s (%zu rows)\n", csv_path.string().c_str(), rows.size());
  return kOk;
}

int cmd_verify(const Globals& g, double perturbation, const std::string& report, std::vector<int> only) {
  wgqed::checks::CheckOptions opt;
  opt.threads = g.threads;
  opt.coupling_perturbation = perturbation;
  std::vector<wgqed::checks::CheckResult> results;
  if (only.empty())
    for (int id = 1; id <= wgqed::checks::kCheckCount; ++id) only.push_back(id);
  bool ok = true;
  for (const int id : only) {
    results.push_back(wgqed::checks::run_check(id, opt));
    std::printf("%s\n", wgqed::checks::summary_line(results.back()).c_str());
    std::fflush(stdout);
    ok = ok && results.back().passed();
  }
  if (!report.empty()) {
    std::ostringstream out;
    wgqed::checks::write_report_json(out, results);
    write_file(report, out.str());
  }
  std::printf("%s\n", ok ? "all checks passed" : "some checks FAILED");
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-photon transport through emitter arrays in a 1D waveguide"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Globals g;
  app.add_option("--config", g.config, "scenario JSON file");
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads")->capture_default_str()->check(CLI::Range(1u, 1024u));
  app.add_option("--grid-span", g.grid_span, "half span of the detuning grid");
  app.add_option("--grid-points", g.grid_points, "base number of grid points");
  app.add_flag("--no-nw", g.no_nw, "drop the off-diagonal non-waveguide coupling");
  app.add_flag("--markovian", g.markovian, "drop intra-array delays");
  app.add_flag("--retarded", g.retarded, "keep intra-array delays");
  app.add_flag("--peaks", g.peaks, "write a peak catalogue");

  auto* simulate = app.add_subcommand("simulate", "time-domain emitter amplitudes");
  std::optional<double> t_max, step;
  std::optional<std::size_t> stride;
  simulate->add_option("--t-max", t_max, "end time (default from the slowest mode)");
  simulate->add_option("--step", step, "RK4 step");
  simulate->add_option("--stride", stride, "keep every n-th step");

  auto* spectrum = app.add_subcommand("spectrum", "reflection/transmission or emission spectra");
  std::string channel;
  spectrum->add_option("--channel", channel, "channel for --peaks");

  auto* sweep = app.add_subcommand("sweep", "parameter sweep table");
  std::string param;
  std::vector<double> range;
  bool log_spacing = false;
  sweep->add_option("--param", param, "r12, dw12, gamma_nw or delta0");
  sweep->add_option("--range", range, "LO HI COUNT")->expected(3);
  sweep->add_flag("--log", log_spacing, "logarithmic spacing");

  auto* verify = app.add_subcommand("verify", "run the acceptance checks");
  double perturbation = 0.0;
  std::string report;
  std::vector<int> only;
  verify->add_option("--perturb-coupling", perturbation, "relative error injected into the waveguide coupling");
  verify->add_option("--report", report, "JSON report path");
  verify->add_option("--only", only, "check ids to run");

  for (auto* sub : {simulate, spectrum, sweep, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    if (*simulate) return cmd_simulate(g, t_max, step, stride);
    if (*spectrum) return cmd_spectrum(g, channel);
    if (*sweep) return cmd_sweep(g, param, range, log_spacing);
    if (*verify) return cmd_verify(g, perturbation, report, only);
  } catch (const wgqed::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kValidation;
  } catch (const wgqed::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kNumerical;
  } catch (const wgqed::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kIo;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kValidation;
  }
  return kOk;
}
