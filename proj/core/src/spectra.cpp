#include "wgqed/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "wgqed/csv.hpp"
#include "wgqed/parallel.hpp"

namespace wgqed {

namespace {

constexpr double kSingularRcond = 1e-13;

// Per-point solve with the phase factors shared by the output sums.
struct PointSolver {
  const Scenario& scenario;
  const CouplingMatrices& couplings;
  Eigen::MatrixXcd total;
  std::vector<double> sqrt_half_gamma;

  PointSolver(const Scenario& s, const CouplingMatrices& c) : scenario(s), couplings(c), total(c.total()) {
    for (const auto& e : s.array.emitters()) sqrt_half_gamma.push_back(std::sqrt(e.gamma_wg / 2.0));
  }

  Eigen::MatrixXcd matrix(double dk) const {
    const auto& array = scenario.array;
    const auto n = static_cast<Eigen::Index>(array.size());
    const double k = array.k_a() + dk;
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index p = 0; p < n; ++p) {
      const auto up = static_cast<std::size_t>(p);
      m(p, p) = total(p, p) - kI * (dk - array[up].dk) * UnitSystem::group_velocity;
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const cplx phase = std::polar(1.0, k * array.separation(up, static_cast<std::size_t>(q)));
        m(p, q) = total(p, q) * phase;
        m(q, p) = total(q, p) * phase;
      }
    }
    return m;
  }

  // Returns nullopt when M(dk) is singular to working precision.
  std::optional<Eigen::VectorXcd> solve(double dk, const Eigen::VectorXcd& rhs) const {
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(matrix(dk));
    if (!(lu.rcond() > kSingularRcond)) return std::nullopt;
    return lu.solve(rhs);
  }

  // exp(+- i k z_j) for every emitter.
  Eigen::VectorXcd phases(double dk, double sign) const {
    const auto& array = scenario.array;
    const double k = array.k_a() + dk;
    Eigen::VectorXcd out(static_cast<Eigen::Index>(array.size()));
    for (std::size_t j = 0; j < array.size(); ++j)
      out(static_cast<Eigen::Index>(j)) = std::polar(1.0, sign * k * array[j].z);
    return out;
  }

  // -i sum_j sqrt(Gamma_j / 2) phase_j chi_j
  cplx emit(const Eigen::VectorXcd& phase, const Eigen::VectorXcd& chi) const {
    cplx sum{};
    for (Eigen::Index j = 0; j < chi.size(); ++j)
      sum += sqrt_half_gamma[static_cast<std::size_t>(j)] * phase(j) * chi(j);
    return -kI * sum;
  }
};

const CouplingMatrices& pick_couplings(const Scenario& scenario, const SpectraOptions& options,
                                       std::optional<CouplingMatrices>& storage) {
  if (options.couplings) return *options.couplings;
  storage = build_couplings(scenario);
  return *storage;
}

// Evaluates fn at grid[i]; falls back to grid[i] + offset where M is singular.
template <typename Fn>
void sweep_grid(std::span<const double> grid, unsigned threads, std::vector<char>& regularized, Fn&& fn) {
  regularized.assign(grid.size(), 0);
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    if (fn(i, grid[i])) return;
    regularized[i] = 1;
    if (!fn(i, grid[i] + kRegularizationOffset))
      throw NumericalError("M(dk) singular at dk = " + csv::number(grid[i]) + " and its neighbourhood");
  });
}

std::vector<std::size_t> flagged(const std::vector<char>& marks) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < marks.size(); ++i)
    if (marks[i]) out.push_back(i);
  return out;
}

}  // namespace

Eigen::MatrixXcd m_matrix(const Scenario& scenario, const CouplingMatrices& couplings, double dk) {
  return PointSolver(scenario, couplings).matrix(dk);
}

Eigen::MatrixXcd m_matrix(const Scenario& scenario, double dk) {
  return m_matrix(scenario, build_couplings(scenario), dk);
}

Eigen::VectorXcd solve_chi(const Scenario& scenario, const CouplingMatrices& couplings, double dk) {
  const PointSolver solver(scenario, couplings);
  const auto n = static_cast<Eigen::Index>(scenario.size());
  const cplx beta0 = scenario.input_spectrum(dk);
  const Eigen::VectorXcd phase = solver.phases(dk, +1.0);
  Eigen::VectorXcd rhs(n);
  for (Eigen::Index l = 0; l < n; ++l) {
    const auto ul = static_cast<std::size_t>(l);
    rhs(l) = scenario.initial(ul) - kI * solver.sqrt_half_gamma[ul] * beta0 * phase(l);
  }
  auto chi = solver.solve(dk, rhs);
  if (!chi) {
    std::ostringstream echo;
    write_matrix_csv(echo, solver.matrix(dk));
    throw NumericalError("solve_chi: M(dk) is singular at dk = " + csv::number(dk) + ":\n" + echo.str());
  }
  return *chi;
}

Eigen::VectorXcd solve_chi(const Scenario& scenario, double dk) {
  return solve_chi(scenario, build_couplings(scenario), dk);
}

const char* channel_name(Channel channel) {
  switch (channel) {
    case Channel::Reflection: return "reflection";
    case Channel::Transmission: return "transmission";
    case Channel::Left: return "left";
    case Channel::Right: return "right";
    case Channel::Input: return "input";
  }
  return "unknown";
}

const std::vector<cplx>& SpectrumGrid::channel(Channel c) const {
  const auto it = channels.find(c);
  if (it == channels.end())
    throw GridError(std::string("spectrum grid has no ") + channel_name(c) + " channel");
  return it->second;
}

std::vector<double> SpectrumGrid::intensity(Channel c) const {
  const auto& values = channel(c);
  const bool ratio = kind == SpectrumKind::Scattering && c != Channel::Input;
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = ratio ? std::norm(values[i]) : std::norm(values[i]) / kTwoPi;
  return out;
}

std::string SpectrumGrid::normalization() const {
  return kind == SpectrumKind::Scattering ? "ratio_to_input" : "density_over_2pi";
}

SpectrumGrid scattering_spectra(const Scenario& scenario, std::span<const double> grid,
                                const SpectraOptions& options) {
  scenario.validate();
  if (!scenario.has_pulse()) throw MissingDriveError("scattering_spectra: scenario has no input photon");
  if (scenario.has_initial_excitation())
    throw ValidationError("scattering_spectra: initial excitation must be zero");

  std::optional<CouplingMatrices> storage;
  const PointSolver solver(scenario, pick_couplings(scenario, options, storage));
  const auto n = static_cast<Eigen::Index>(scenario.size());

  SpectrumGrid out;
  out.kind = SpectrumKind::Scattering;
  out.dk.assign(grid.begin(), grid.end());
  auto& refl = out.channels[Channel::Reflection];
  auto& trans = out.channels[Channel::Transmission];
  auto& input = out.channels[Channel::Input];
  refl.resize(grid.size());
  trans.resize(grid.size());
  input.resize(grid.size());

  std::vector<char> marks;
  sweep_grid(grid, options.threads, marks, [&](std::size_t i, double dk) {
    const Eigen::VectorXcd forward = solver.phases(dk, +1.0);
    Eigen::VectorXcd rhs(n);
    for (Eigen::Index l = 0; l < n; ++l)
      rhs(l) = -kI * solver.sqrt_half_gamma[static_cast<std::size_t>(l)] * forward(l);
    const auto chi = solver.solve(dk, rhs);
    if (!chi) return false;
    refl[i] = solver.emit(forward, *chi);
    trans[i] = 1.0 + solver.emit(forward.conjugate(), *chi);
    input[i] = scenario.input_spectrum(grid[i]);
    return true;
  });
  out.regularized = flagged(marks);
  return out;
}

SpectrumGrid decay_spectra(const Scenario& scenario, std::span<const double> grid,
                           const SpectraOptions& options) {
  scenario.validate();
  if (scenario.has_pulse()) throw ValidationError("decay_spectra: scenario must not have an input photon");
  if (!scenario.has_initial_excitation())
    throw ValidationError("decay_spectra: all initial amplitudes are zero (empty scenario)");

  std::optional<CouplingMatrices> storage;
  const PointSolver solver(scenario, pick_couplings(scenario, options, storage));
  const auto n = static_cast<Eigen::Index>(scenario.size());
  Eigen::VectorXcd rhs(n);
  for (Eigen::Index l = 0; l < n; ++l) rhs(l) = scenario.initial(static_cast<std::size_t>(l));

  SpectrumGrid out;
  out.kind = SpectrumKind::Decay;
  out.dk.assign(grid.begin(), grid.end());
  auto& left = out.channels[Channel::Left];
  auto& right = out.channels[Channel::Right];
  left.resize(grid.size());
  right.resize(grid.size());

  std::vector<char> marks;
  sweep_grid(grid, options.threads, marks, [&](std::size_t i, double dk) {
    const auto chi = solver.solve(dk, rhs);
    if (!chi) return false;
    const Eigen::VectorXcd forward = solver.phases(dk, +1.0);
    left[i] = solver.emit(forward, *chi);
    right[i] = solver.emit(forward.conjugate(), *chi);
    return true;
  });
  out.regularized = flagged(marks);
  return out;
}

std::vector<cplx> spectral_poles(const Scenario& scenario) {
  const auto couplings = build_couplings(scenario);
  Eigen::MatrixXcd g = couplings.effective;
  for (std::size_t j = 0; j < scenario.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    g(i, i) += kI * scenario.array[j].dk * UnitSystem::group_velocity;
  }
  std::vector<cplx> poles;
  for (const auto& m : collective_modes(g)) poles.push_back(m.eigenvalue);
  return poles;
}

std::vector<double> uniform_grid(double center, double half_span, std::size_t points) {
  if (points < 2 || !(half_span > 0.0)) throw GridError("uniform_grid: need >= 2 points and a positive span");
  std::vector<double> out(points);
  const double step = 2.0 * half_span / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    out[i] = center - half_span + step * static_cast<double>(i);
  out[(points - 1) / 2] = (points % 2 == 1) ? center : out[(points - 1) / 2];
  return out;
}

std::vector<double> default_grid(const Scenario& scenario, const DefaultGridOptions& options) {
  const double center = scenario.input_center();
  const auto poles = spectral_poles(scenario);
  double reach = 0.0;
  double narrowest = std::numeric_limits<double>::infinity();
  for (const auto& p : poles) {
    reach = std::max(reach, std::abs(p.imag() - center));
    if (2.0 * p.real() > 1e-6) narrowest = std::min(narrowest, 2.0 * p.real());
  }
  double half = 2.0 * reach + 10.0 * UnitSystem::gamma_ref;
  if (scenario.has_pulse()) half = std::max(half, 5.0 * scenario.input_width());
  if (options.half_span) half = *options.half_span;

  std::vector<double> base = uniform_grid(center, half, options.points);
  if (!std::isfinite(narrowest) || options.refinement <= 1.0) return base;

  const double coarse = 2.0 * half / static_cast<double>(options.points - 1);
  // spacing inside the windows never exceeds a twentieth of the narrowest linewidth
  const double fine = std::min(coarse / options.refinement, narrowest / 20.0);
  const double width = options.window_linewidths * narrowest;

  std::vector<std::pair<double, double>> windows;
  for (const auto& p : poles) {
    for (const double c : {p.imag(), 2.0 * center - p.imag()}) {
      const double lo = std::max(center - half, c - width / 2.0);
      const double hi = std::min(center + half, c + width / 2.0);
      if (hi - lo > fine) windows.emplace_back(lo, hi);
    }
  }
  std::sort(windows.begin(), windows.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& w : windows) {
    if (!merged.empty() && w.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, w.second);
    else
      merged.push_back(w);
  }

  std::vector<double> out;
  out.reserve(base.size());
  auto inside = [&](double x) {
    return std::any_of(merged.begin(), merged.end(),
                       [x](const auto& w) { return x > w.first && x < w.second; });
  };
  for (const double x : base)
    if (!inside(x)) out.push_back(x);
  for (const auto& [lo, hi] : merged) {
    const auto m = static_cast<std::size_t>(std::ceil((hi - lo) / fine));
    const double step = (hi - lo) / static_cast<double>(m);
    for (std::size_t i = 0; i <= m; ++i) out.push_back(lo + step * static_cast<double>(i));
  }
  std::sort(out.begin(), out.end());
  const double tol = 1e-9 * fine;
  out.erase(std::unique(out.begin(), out.end(), [tol](double a, double b) { return b - a < tol; }),
            out.end());
  return out;
}

BranchingResult waveguide_branching(const SpectrumGrid& grid) {
  if (grid.kind != SpectrumKind::Decay) throw GridError("waveguide_branching: needs a decay spectrum");
  const auto left = grid.intensity(Channel::Left);
  const auto right = grid.intensity(Channel::Right);
  if (grid.size() < 2) throw GridError("waveguide_branching: grid needs >= 2 points");
  BranchingResult r;
  double peak = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = left[i] + right[i];
    peak = std::max(peak, d);
    if (i > 0) r.fraction += 0.5 * (d + left[i - 1] + right[i - 1]) * (grid.dk[i] - grid.dk[i - 1]);
  }
  const double edge = std::max(left.front() + right.front(), left.back() + right.back());
  r.edge_ratio = peak > 0.0 ? edge / peak : 0.0;
  r.truncated = r.edge_ratio > 1e-4;
  return r;
}

void write_spectrum_csv(std::ostream& out, const SpectrumGrid& grid) {
  const bool scattering = grid.kind == SpectrumKind::Scattering;
  const std::vector<Channel> order =
      scattering ? std::vector<Channel>{Channel::Reflection, Channel::Transmission, Channel::Input}
                 : std::vector<Channel>{Channel::Left, Channel::Right};
  out << (scattering ? "dk,abs2_bR_over_b0,abs2_bT_over_b0" : "dk,density_left,density_right");
  for (const auto c : order) out << ",re_" << channel_name(c) << ",im_" << channel_name(c);
  out << '\n';
  const auto first = grid.intensity(order[0]);
  const auto second = grid.intensity(order[1]);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << csv::number(grid.dk[i]) << ',' << csv::number(first[i]) << ',' << csv::number(second[i]);
    for (const auto c : order) {
      const cplx v = grid.channel(c)[i];
      out << ',' << csv::number(v.real()) << ',' << csv::number(v.imag());
    }
    out << '\n';
  }
}

}  // namespace wgqed
