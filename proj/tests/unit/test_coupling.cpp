#include <cmath>
#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "wgqed/coupling.hpp"

using namespace wgqed;
using wgqed::test::Gen;

namespace {

// Dissipative part of the free-space dipole exchange, the familiar collective
// decay rate divided by two. Re(V exp(ix)) must reproduce it.
double free_space_half_rate(double g, double x, double phi) {
  const double s = std::sin(phi) * std::sin(phi);
  const double n = 1.0 - 3.0 * std::cos(phi) * std::cos(phi);
  return 0.75 * g * (s * std::sin(x) / x + n * (std::cos(x) / (x * x) - std::sin(x) / (x * x * x)));
}

}  // namespace

TEST_SUITE("coupling") {

TEST_CASE("golden non-waveguide couplings") {
  const cplx far = nonwaveguide_coupling(0.2, 0.2, kTwoPi * 0.5, kPi / 2);
  CHECK(far.real() == doctest::Approx(0.015).epsilon(0.0005 / 0.015));
  CHECK(far.imag() == doctest::Approx(-0.043).epsilon(0.0005 / 0.043));
  const cplx near = nonwaveguide_coupling(0.2, 0.2, kTwoPi * 0.05, kPi / 2);
  CHECK(std::abs(near.real() - 1.52) < 0.005);
  CHECK(std::abs(near.imag() - 4.36) < 0.005);
}

TEST_CASE("vanishing prefactor") {
  for (double x : {1e-3, 0.5, 7.0, 1e3})
    for (double phi : {0.0, 0.4, kPi / 2}) CHECK(nonwaveguide_coupling(0.0, 0.7, x, phi) == cplx{});
}

TEST_CASE("magic angle leaves only the radiative term") {
  const double phi = std::acos(1.0 / std::sqrt(3.0));
  for (double x : {0.01, 0.3, 2.0, 40.0}) {
    const cplx v = nonwaveguide_coupling(0.3, 0.5, x, phi);
    const double expected = -0.75 * std::sqrt(0.15) * (2.0 / 3.0) / x;
    CHECK(std::abs(v.real()) < 1e-12 * std::abs(expected) + 1e-12);
    CHECK(v.imag() == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("dissipative part matches the free-space collective rate") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Gen g(seed);
    const double x = std::exp(g.uniform(std::log(0.05), std::log(50.0)));
    const double phi = g.uniform(0.0, kPi);
    const double gam = g.uniform(0.01, 1.0);
    CAPTURE(x);
    CAPTURE(phi);
    const cplx v = nonwaveguide_coupling(gam, gam, x, phi) * std::polar(1.0, x);
    CHECK(v.real() == doctest::Approx(free_space_half_rate(gam, x, phi)).epsilon(1e-9).scale(gam));
  }
}

TEST_CASE("short-distance dissipative limit is the single-emitter rate") {
  for (double phi : {0.0, 0.3, 1.0, kPi / 2}) {
    const cplx v = nonwaveguide_coupling(0.4, 0.4, 1e-3, phi) * std::polar(1.0, 1e-3);
    CHECK(v.real() == doctest::Approx(0.2).epsilon(1e-5));
  }
}

TEST_CASE("near and far field magnitudes") {
  const double g = 0.3;
  const double x_near = 1e-3;
  CHECK(std::abs(nonwaveguide_coupling(g, g, x_near, kPi / 2)) ==
        doctest::Approx(0.75 * g / (x_near * x_near * x_near)).epsilon(0.01));
  const double x_far = 1e3;
  CHECK(std::abs(nonwaveguide_coupling(g, g, x_far, kPi / 2)) ==
        doctest::Approx(0.75 * g / x_far).epsilon(0.01));
}

TEST_CASE("coincident emitters are rejected") {
  CHECK_THROWS_AS(nonwaveguide_coupling(0.2, 0.2, 0.0, kPi / 2), SingularSeparationError);
  const EmitterArray a({{0.0, 1.0, 0.1, 0.0}, {0.0, 1.0, 0.1, 0.0}});
  CHECK_THROWS_AS(build_couplings(a), SingularSeparationError);
}

TEST_CASE("single emitter effective matrix") {
  const auto c = build_couplings(EmitterArray({{0.0, 1.0, 0.2, 0.0}}));
  REQUIRE(c.size() == 1);
  CHECK(c.effective(0, 0) == cplx{0.6, 0.0});
  const auto modes = collective_modes(c);
  REQUIRE(modes.size() == 1);
  CHECK(modes[0].eigenvalue.real() == doctest::Approx(0.6));
  CHECK(modes[0].linewidth() == doctest::Approx(1.2));
  CHECK(modes[0].shift == doctest::Approx(0.0));
}

TEST_CASE("half-wavelength pair without losses") {
  const auto c = build_couplings(test::pair_array(0.5, 0.0, 0.0, 0.0));
  CHECK(std::abs(c.effective(0, 1) - cplx{-0.5, 0.0}) < 1e-12);
  CHECK(c.nonwaveguide(0, 1) == cplx{});
  const auto modes = collective_modes(c);
  CHECK(modes[0].eigenvalue.real() == doctest::Approx(1.0));
  CHECK(std::abs(modes[1].eigenvalue) < 1e-12);
}

TEST_CASE("close pair effective coupling") {
  const auto a = test::pair_array(0.05, 0.2, 0.0, 0.0);
  const auto c = build_couplings(a);
  const double x = kTwoPi * 0.05;
  const cplx vnw = 0.15 * (cplx{0.0, -1.0 / x} + cplx{1.0 / (x * x), 1.0 / (x * x * x)});
  const cplx expected = (0.5 + vnw) * std::polar(1.0, x);
  CHECK(std::abs(c.effective(0, 1) - expected) < 1e-12);
  CHECK(std::abs(c.effective(0, 1) - cplx{0.574, 4.770}) < 0.002);
  CHECK(c.effective(0, 1) == c.effective(1, 0));

  const auto without = build_couplings(a, false);
  CHECK(without.nonwaveguide(0, 1) == cplx{});
  CHECK(without.nonwaveguide(0, 0) == cplx{0.1, 0.0});
  CHECK(without.effective(0, 0) == cplx{0.6, 0.0});
}

TEST_CASE("two-emitter modes are V11 +- G12") {
  for (double a : {0.05, 0.13, 0.5, 1.7}) {
    CAPTURE(a);
    const auto c = build_couplings(test::pair_array(a, 0.1, 0.0, 0.0));
    const auto modes = collective_modes(c);
    const cplx g12 = c.effective(0, 1);
    const cplx plus = 0.55 + g12, minus = 0.55 - g12;
    const cplx hi = plus.real() >= minus.real() ? plus : minus;
    const cplx lo = plus.real() >= minus.real() ? minus : plus;
    CHECK(std::abs(modes[0].eigenvalue - hi) < 1e-12);
    CHECK(std::abs(modes[1].eigenvalue - lo) < 1e-12);
    for (const auto& m : modes) {
      CHECK(std::abs(std::abs(m.vector(0)) - std::sqrt(0.5)) < 1e-9);
      CHECK(std::abs(std::abs(m.vector(1)) - std::sqrt(0.5)) < 1e-9);
    }
  }
}

// The quoted rates are the real parts of the eigenvalues, matched to half a
// unit of the last quoted digit.
TEST_CASE("quoted collective rates") {
  const auto far = collective_modes(build_couplings(test::pair_array(0.5, 0.2, 0.0, 0.0), false));
  CHECK(far[0].decay_rate() == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(far[1].decay_rate() == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(std::abs(far[0].shift) < 1e-12);

  const auto near = collective_modes(build_couplings(test::pair_array(0.05, 0.2, 0.0, 0.0)));
  CHECK(std::abs(near[0].decay_rate() - 1.17) <= 0.005);
  CHECK(std::abs(near[1].decay_rate() - 0.03) <= 0.005);
  CHECK(std::abs(std::abs(near[0].shift) - 4.77) <= 0.005);

  const auto c = build_couplings(test::pair_array(0.05, 0.1, 0.0, 0.0));
  CHECK(std::abs(c.effective(0, 1).real() - 0.52) <= 0.005);
  CHECK(std::abs(c.effective(0, 1).imag() - 2.46) <= 0.005);
  const auto m = collective_modes(c);
  CHECK(std::abs(m[0].decay_rate() - 1.07) <= 0.005);
  CHECK(std::abs(m[1].decay_rate() - 0.03) <= 0.005);
}

TEST_CASE("random arrays: symmetry, trace, passivity, eigenpairs") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CAPTURE(seed);
    Gen g(seed);
    const auto a = g.array(8);
    const auto c = build_couplings(a, g.coin());
    const auto& G = c.effective;
    CHECK((G - G.transpose()).norm() < 1e-12 * G.norm());
    const auto modes = collective_modes(c);
    cplx sum{};
    double trace = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) trace += 0.5 * (a[j].gamma_wg + a[j].gamma_nw);
    for (std::size_t m = 0; m < modes.size(); ++m) {
      sum += modes[m].eigenvalue;
      // The dissipative part of G is a sum of positive semidefinite rate matrices.
      CHECK(modes[m].decay_rate() > -1e-9);
      CHECK((G * modes[m].vector - modes[m].eigenvalue * modes[m].vector).norm() < 1e-9 * (1.0 + G.norm()));
      if (m > 0) CHECK(modes[m - 1].decay_rate() >= modes[m].decay_rate());
    }
    CHECK(std::abs(sum - trace) < 1e-10 * (1.0 + G.norm()));
  }
}

TEST_CASE("matrix csv layout") {
  Eigen::MatrixXcd m(2, 2);
  m << cplx{1, 2}, cplx{3, 4}, cplx{5, 6}, cplx{7, 8};
  std::ostringstream out;
  write_matrix_csv(out, m);
  const std::string text = out.str();
  const std::string first = text.substr(0, text.find('\n'));
  CHECK(std::count(first.begin(), first.end(), ',') == 3);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

}
