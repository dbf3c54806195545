#include <cmath>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "wgqed/coupling.hpp"
#include "wgqed/dynamics.hpp"

using namespace wgqed;
using wgqed::test::Gen;

namespace {

// exp(-A t) x0 for a 2x2 matrix via its closed form.
std::array<cplx, 2> expm2(const std::array<cplx, 4>& A, double t, std::array<cplx, 2> x0) {
  const cplx a = A[0], b = A[1], c = A[2], d = A[3];
  const cplx half_tr = 0.5 * (a + d);
  const cplx s = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  const cplx ch = std::cosh(s * t);
  const cplx sh_over_s = std::abs(s) < 1e-12 ? cplx{t} : std::sinh(s * t) / s;
  const cplx e = std::exp(-half_tr * t);
  // exp(-A t) = e [cosh(s t) I - sinh(s t)/s (A - half_tr I)]
  return {e * (ch * x0[0] - sh_over_s * ((a - half_tr) * x0[0] + b * x0[1])),
          e * (ch * x0[1] - sh_over_s * (c * x0[0] + (d - half_tr) * x0[1]))};
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("single emitter decays exponentially") {
  const auto s = test::excited(EmitterArray({{0.0, 1.0, 0.2, 0.0}}));
  const auto tr = evolve(s, {5.0, 1e-3});
  double worst = 0.0;
  for (std::size_t n = 0; n < tr.samples(); ++n) {
    const double exact = std::exp(-1.2 * tr.times[n]);
    worst = std::max(worst, std::abs(std::norm(tr.alpha[0][n]) - exact) / exact);
  }
  CHECK(worst < 1e-6);
  CHECK(tr.t_end() == doctest::Approx(5.0));
  const auto p = excitation_probabilities(evolve(s, {1.0 / 1.2, 1e-3 / 1.2}));
  CHECK(p[0].back() == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
}

TEST_CASE("dark state trapping at half-wavelength spacing") {
  const auto s = test::excited(test::pair_array(0.5, 0.0, 0.0, 0.0));
  const auto tr = evolve(s, {40.0, 1e-3, 100});
  for (std::size_t n = 0; n < tr.samples(); ++n) {
    const double t = tr.times[n];
    CHECK(std::abs(std::abs(tr.alpha[0][n]) - 0.5 * (1 + std::exp(-t))) < 1e-8);
    CHECK(std::abs(std::abs(tr.alpha[1][n]) - 0.5 * (1 - std::exp(-t))) < 1e-8);
  }
  const auto p = excitation_probabilities(tr);
  CHECK(p[0].back() == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(p[1].back() == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("detuned pairs follow the rotating-frame solution") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    CAPTURE(seed);
    Gen g(seed);
    const double a = g.uniform(0.05, 1.5);
    const double gam = g.uniform(0.0, 0.4);
    const double dw = g.uniform(-3.0, 3.0);
    const auto array = test::pair_array(a, gam, dw, 0.0);
    Scenario s{array, {}, {g.phasor() * 0.8, g.phasor() * 0.6}, g.coin()};
    const auto tr = evolve(s, {6.0, 1e-3, 50});
    const auto total = build_couplings(s).total();
    std::array<cplx, 4> A;
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t l = 0; l < 2; ++l)
        A[2 * j + l] = total(j, l) * (j == l ? cplx{1.0} : std::polar(1.0, array.k_of(l) * array.separation(j, l))) +
                       (j == l ? kI * array[j].dk : cplx{});
    double worst = 0.0;
    for (std::size_t n = 0; n < tr.samples(); ++n) {
      const double t = tr.times[n];
      const auto beta = expm2(A, t, {s.initial(0), s.initial(1)});
      for (std::size_t j = 0; j < 2; ++j)
        worst = std::max(worst, std::abs(tr.alpha[j][n] - std::polar(1.0, array[j].dk * t) * beta[j]));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("close pair exchanges excitation") {
  const auto s = test::excited(test::pair_array(0.05, 0.2, 0.0, 0.0));
  const auto modes = collective_modes(build_couplings(s));
  const double beat = 2.0 * std::abs(modes[0].eigenvalue.imag());
  CHECK(beat == doctest::Approx(9.54).epsilon(0.005 / 9.54));
  const auto tr = evolve(s, {60.0, 1e-3, 10});
  const auto p = excitation_probabilities(tr);
  // After the superradiant part is gone the amplitude envelope decays at the
  // subradiant rate.
  const double t1 = 20.0, t2 = 50.0;
  const auto n1 = static_cast<std::size_t>(t1 / tr.sample_step);
  const auto n2 = static_cast<std::size_t>(t2 / tr.sample_step);
  const double rate = 0.5 * std::log(tr.population(n1) / tr.population(n2)) / (t2 - t1);
  CHECK(rate == doctest::Approx(modes[1].decay_rate()).epsilon(1e-3));
  CHECK(std::abs(rate - 0.03) <= 0.005);
  // While both modes are alive the excitation sloshes back and forth.
  std::size_t swaps = 0;
  for (std::size_t n = 1; tr.times[n] < 8.0; ++n)
    if ((p[0][n] - p[1][n]) * (p[0][n - 1] - p[1][n - 1]) < 0) ++swaps;
  CHECK(swaps >= 20);
}

TEST_CASE("gaussian drive") {
  const double width = 2.0;
  const double z = 20.0 / width;
  Scenario s{EmitterArray({{z, 1.5, 0.0, 0.0}}), GaussianPulse{width, 0.0}};
  const double peak = std::pow(8 * kPi, -0.25) * std::sqrt(1.5 * width);
  CHECK(std::abs(drive(s, 0, z)) == doctest::Approx(peak).epsilon(1e-14));
  CHECK(std::abs(drive(s, 0, 0.0)) < 1e-8 * peak);
  // Photon flux delivered past the emitter: integral |b|^2 dt = Gamma / 2.
  std::vector<double> t(20001), y(20001);
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = 2.0 * z * static_cast<double>(i) / 20000.0;
    y[i] = std::norm(drive(s, 0, t[i]));
  }
  CHECK(test::trapezoid(t, y) == doctest::Approx(0.75).epsilon(1e-9));
  CHECK_THROWS_AS(drive(Scenario{EmitterArray({{0.0, 1.0, 0.0, 0.0}})}, 0, 0.0), MissingDriveError);
}

TEST_CASE("tabulated drive reproduces the closed form") {
  const GaussianPulse pulse{3.0, 0.5};
  const auto array = test::pair_array(0.3, 0.0, 1.0, 4.0);
  const Scenario closed{array, pulse};
  const Scenario table{array, tabulate(pulse, 8.0, 4001)};
  double peak = 0.0, worst = 0.0;
  for (double t = 0.0; t <= 8.0; t += 0.01)
    for (std::size_t j = 0; j < 2; ++j) {
      peak = std::max(peak, std::abs(drive(closed, j, t)));
      worst = std::max(worst, std::abs(drive(closed, j, t) - drive(table, j, t)));
    }
  CHECK(worst < 1e-6 * peak);
}

TEST_CASE("driven population never exceeds the delivered photon") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CAPTURE(seed);
    Gen g(seed);
    const auto array = g.array(4);
    const double width = g.uniform(0.5, 5.0);
    Scenario s{array, GaussianPulse{width, g.uniform(-1.0, 1.0)}};
    const auto tr = evolve(s, {12.0 / width + 4.0, 1e-3, 20});
    for (std::size_t n = 0; n < tr.samples(); ++n) CHECK(tr.population(n) <= 1.0 + 1e-6);
  }
}

TEST_CASE("halving the step changes nothing visible") {
  Scenario s{test::pair_array(0.05, 0.2, 0.0, 2.0), GaussianPulse{1.0, 0.0}};
  const auto coarse = evolve(s, {10.0, 1e-3, 2});
  const auto fine = evolve(s, {10.0, 5e-4, 4});
  REQUIRE(coarse.samples() == fine.samples());
  double worst = 0.0;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t n = 0; n < coarse.samples(); ++n)
      worst = std::max(worst, std::abs(std::abs(coarse.alpha[j][n]) - std::abs(fine.alpha[j][n])));
  CHECK(worst < 1e-6);
}

TEST_CASE("common wavevector shift is a global frame change") {
  const double c = 5.0;
  std::vector<AbsoluteEmitter> base{{0.0, 1.0, 0.1, kTwoPi / 1e-6 + 0.4}, {0.3e-6, 1.0, 0.1, kTwoPi / 1e-6 - 0.4}};
  auto shifted = base;
  for (auto& e : shifted) e.k += c;
  const Scenario a = test::excited(EmitterArray::from_wavevectors(base));
  const Scenario b = test::excited(EmitterArray::from_wavevectors(shifted));
  const auto pa = excitation_probabilities(evolve(a, {8.0, 1e-3, 10}));
  const auto pb = excitation_probabilities(evolve(b, {8.0, 1e-3, 10}));
  double worst = 0.0;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t n = 0; n < pa[j].size(); ++n) worst = std::max(worst, std::abs(pa[j][n] - pb[j][n]));
  // The only change is k_a z_12, shifted by c z_12 ~ 1.5e-6 rad.
  CHECK(worst < 1e-5);
}

namespace {

double retardation_gap(double a, double lambda, double t_max) {
  Scenario s = test::excited(test::pair_array(a, 0.2, 0.0, 0.0, lambda));
  const auto markov = evolve(s, {t_max, 1e-5, 100});
  s.retardation = Retardation::Full;
  const auto full = evolve(s, {t_max, 1e-5, 100});
  double worst = 0.0;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t n = 0; n < markov.samples(); ++n)
      worst = std::max(worst, std::abs(std::abs(markov.alpha[j][n]) - std::abs(full.alpha[j][n])));
  return worst;
}

}  // namespace

// The delay z/v_g shifts each collective pole by about G12 mu tau, so the gap
// grows linearly in the delay and in time.
TEST_CASE("full retardation approaches markovian as the delay shrinks") {
  for (double a : {0.05, 0.5}) {
    CAPTURE(a);
    const double coarse = retardation_gap(a, 2e-3, 10.0);
    const double fine = retardation_gap(a, 1e-3, 10.0);
    CHECK(fine < 1e-2);
    CHECK(coarse / fine == doctest::Approx(2.0).epsilon(0.1));
  }
  // Early on the gap is the causal lag of the partner's response, |G12| tau.
  const double g12 = std::abs(build_couplings(test::pair_array(0.5, 0.2, 0.0, 0.0, 1e-3)).effective(0, 1));
  CHECK(retardation_gap(0.5, 1e-3, 1.0) <= 1.1 * g12 * 0.5e-3);
}

TEST_CASE("full retardation is causal") {
  Scenario s = test::excited(test::pair_array(2.5, 0.0, 0.0, 0.0, 1.0));
  s.retardation = Retardation::Full;
  const auto tr = evolve(s, {5.0, 1e-3, 1});
  for (std::size_t n = 0; n < tr.samples(); ++n) {
    if (tr.times[n] < 2.5 - 1e-9) {
      CHECK(tr.alpha[1][n] == cplx{});
    }
  }
  CHECK(std::abs(tr.alpha[1].back()) > 0.1);
  // Until the echo returns, emitter 1 decays as if alone.
  const auto n = static_cast<std::size_t>(std::llround(4.9 / 1e-3));
  CHECK(std::abs(tr.alpha[0][n]) == doctest::Approx(std::exp(-0.5 * 4.9)).epsilon(1e-8));
}

TEST_CASE("configuration errors") {
  const auto s = test::excited(test::pair_array(0.5, 0.0));
  CHECK_THROWS_AS(evolve(s, {1.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(evolve(s, {10.0, 5.0}), ValidationError);
  CHECK_THROWS_AS(evolve(s, {1e-4, 1e-3}), ValidationError);
  CHECK_THROWS_AS(evolve(s, {1.0, 1e-3, 0}), ValidationError);
  Scenario full = s;
  full.retardation = Retardation::Full;
  CHECK_THROWS_AS(evolve(full, {1.0, 1e-3}), ValidationError);
}

TEST_CASE("default horizon covers the slowest detuned mode") {
  const auto s = test::excited(test::pair_array(0.05, 0.2, 0.0, 0.0));
  const auto modes = collective_modes(build_couplings(s));
  CHECK(default_t_max(s) == doctest::Approx(10.0 / modes.back().linewidth()).epsilon(1e-9));
  // The perfectly dark pair is capped.
  CHECK(default_t_max(test::excited(test::pair_array(0.5, 0.0, 0.0, 0.0))) <= 1e4 + 1e-9);
  // A pulse adds its transit time.
  const Scenario driven{EmitterArray({{20.0, 1.0, 0.0, 0.0}}), GaussianPulse{1.0, 0.0}};
  CHECK(default_t_max(driven) == doctest::Approx(10.0 + 20.0 + 8.0));
}

TEST_CASE("trajectory csv and stride") {
  const auto s = test::excited(test::pair_array(0.5, 0.0));
  const auto tr = evolve(s, {1.0, 1e-3, 100});
  CHECK(tr.samples() == 11);
  CHECK(tr.sample_step == doctest::Approx(0.1));
  std::ostringstream out;
  write_trajectory_csv(out, tr);
  const std::string text = out.str();
  CHECK(text.substr(0, text.find('\n')) ==
        "t,re_alpha_1,im_alpha_1,re_alpha_2,im_alpha_2,abs2_alpha_1,abs2_alpha_2");
  CHECK(std::count(text.begin(), text.end(), '\n') == 12);
}

}
