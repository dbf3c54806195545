#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wgqed/dynamics.hpp"
#include "wgqed/model.hpp"
#include "wgqed/spectra.hpp"

namespace wgqed {

// Normalized spectrum difference between two scattering grids:
//   1/2 [ sum|R1 - R2| / sum(R1 + R2) + sum|T1 - T2| / sum(2 - T1 - T2) ]
// with R, T the reflectance and transmittance ratios, summed over grid points.
// A term whose denominator vanishes counts as 0.
struct SpectrumDifference {
  double value = 0.0;
  double reflection_term = 0.0;
  double transmission_term = 0.0;
  std::size_t points = 0;
  double dk_min = 0.0;
  double dk_max = 0.0;
};

SpectrumDifference spectrum_difference(const SpectrumGrid& with, const SpectrumGrid& without);

// dk_c +- 20 Gamma with 16001 uniform points.
std::vector<double> canonical_difference_grid(const Scenario& scenario);

// Delta_SD between the scenario with and without off-diagonal V^(nw).
SpectrumDifference nw_spectrum_difference(const Scenario& scenario, std::span<const double> grid,
                                          unsigned threads = 1);

struct Peak {
  std::size_t index = 0;
  double position = 0.0;
  double height = 0.0;
  double fwhm = 0.0;
};

struct PeakCatalogue {
  std::vector<Peak> peaks;  // ascending position
  std::optional<double> separation;
  std::optional<double> linewidth_difference;
  std::vector<std::string> warnings;

  // The two dominant peaks: highest first, ties to the larger |position|.
  std::vector<Peak> dominant() const;
};

struct PeakOptions {
  double threshold = 1e-3;         // relative to the global maximum
  double min_steps_per_fwhm = 5.0; // below this a resolution warning is issued
};

// Local maxima of the channel intensity. Widths come from linearly
// interpolated half-maximum crossings; maxima on the grid edge are skipped.
PeakCatalogue find_peaks(std::span<const double> dk, std::span<const double> intensity,
                         const PeakOptions& options = {});
PeakCatalogue find_peaks(const SpectrumGrid& grid, Channel channel, const PeakOptions& options = {});

struct SweepOptions {
  unsigned threads = 1;
  DefaultGridOptions grid;
  PeakOptions peaks;
  Channel channel = Channel::Reflection;
};

struct TransitionRow {
  double detuning = 0.0;  // Delta omega_12
  std::size_t peak_count = 0;
  std::optional<double> separation;
  std::optional<double> linewidth_difference;
};

// For each Delta omega_12 sets dk_1 = +dw / 2, dk_2 = -dw / 2 on a two-emitter
// scenario and catalogues the reflection peaks on the default grid.
std::vector<TransitionRow> coupling_transition_sweep(const Scenario& base, std::span<const double> detunings,
                                                     const SweepOptions& options = {});

enum class SweepParameter { R12, Dw12, GammaNw, Delta0 };

SweepParameter parse_sweep_parameter(const std::string& name);
const char* sweep_parameter_name(SweepParameter p);

// Copy of base with one parameter replaced. r12 is in units of lambda_a and
// moves the second emitter; dw12 detunes the pair symmetrically.
Scenario with_parameter(const Scenario& base, SweepParameter p, double value);

struct SweepRow {
  double value = 0.0;
  double delta_sd = 0.0;
  std::size_t peak_count = 0;
  std::optional<double> separation;
  std::optional<double> linewidth_difference;
};

// One row per value, in input order. Delta_SD uses the canonical grid, the
// peak catalogue the default grid.
std::vector<SweepRow> run_sweep(const Scenario& base, SweepParameter p, std::span<const double> values,
                                const SweepOptions& options = {});

void write_sweep_csv(std::ostream& out, SweepParameter p, const std::vector<SweepRow>& rows);
void write_transition_csv(std::ostream& out, const std::vector<TransitionRow>& rows);

std::vector<double> linear_space(double lo, double hi, std::size_t count);
std::vector<double> log_space(double lo, double hi, std::size_t count);

// First x where y crosses `level`, interpolated linearly in y against x (or log x).
std::optional<double> find_crossing(std::span<const double> x, std::span<const double> y, double level,
                                    bool log_x = false);

struct AuditReport {
  bool decay = false;
  double initial_population = 0.0;
  double survivors = 0.0;         // sum_j |alpha_j(t_end)|^2
  double guided = 0.0;            // integrated waveguide emission
  double nonguided = 0.0;         // initial - survivors - guided
  double unitarity_residual = 0.0;
  bool truncated = false;
  std::vector<std::string> flags;
};

// Decay grids: population bookkeeping. Scattering grids: max |R + T - 1|,
// flagged above 1e-9 when no emitter has non-guided loss.
AuditReport conservation_audit(const Scenario& scenario, const AmplitudeTrajectory& trajectory,
                               const SpectrumGrid& grid);
void write_audit_json(std::ostream& out, const AuditReport& report);

}  // namespace wgqed
