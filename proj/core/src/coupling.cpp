#include "wgqed/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "wgqed/csv.hpp"

namespace wgqed {

cplx nonwaveguide_coupling(double gamma_j, double gamma_l, double x, double phi) {
  if (!(x > 0.0))
    throw SingularSeparationError("non-waveguide coupling: coincident emitters (k_a r = " +
                                  std::to_string(x) + ")");
  const double prefactor = 0.75 * std::sqrt(gamma_j * gamma_l);
  if (prefactor == 0.0) return {};
  const double s2 = std::sin(phi) * std::sin(phi);
  const double near = 1.0 - 3.0 * std::cos(phi) * std::cos(phi);
  const double x2 = x * x;
  const double x3 = x2 * x;
  return prefactor * cplx{near / x2, -s2 / x + near / x3};
}

CouplingMatrices build_couplings(const EmitterArray& array, bool include_nw) {
  const auto n = static_cast<Eigen::Index>(array.size());
  CouplingMatrices c;
  c.waveguide = Eigen::MatrixXd::Zero(n, n);
  c.nonwaveguide = Eigen::MatrixXcd::Zero(n, n);
  c.phase = Eigen::MatrixXcd::Ones(n, n);
  c.effective = Eigen::MatrixXcd::Zero(n, n);

  const double k_a = array.k_a();
  for (Eigen::Index p = 0; p < n; ++p) {
    const auto& ep = array[static_cast<std::size_t>(p)];
    c.waveguide(p, p) = ep.gamma_wg / 2.0;
    c.nonwaveguide(p, p) = ep.gamma_nw / 2.0;
    for (Eigen::Index q = p + 1; q < n; ++q) {
      const auto& eq = array[static_cast<std::size_t>(q)];
      const double r = array.separation(static_cast<std::size_t>(p), static_cast<std::size_t>(q));
      if (!(r > 0.0))
        throw SingularSeparationError("emitters " + std::to_string(p) + " and " + std::to_string(q) +
                                      " share the same position");
      const double vw = std::sqrt(ep.gamma_wg * eq.gamma_wg) / 2.0;
      c.waveguide(p, q) = c.waveguide(q, p) = vw;
      const cplx vnw =
          include_nw ? nonwaveguide_coupling(ep.gamma_nw, eq.gamma_nw, k_a * r, array.phi()) : cplx{};
      c.nonwaveguide(p, q) = c.nonwaveguide(q, p) = vnw;
      c.phase(p, q) = c.phase(q, p) = std::polar(1.0, k_a * r);
    }
  }
  c.effective = c.total().cwiseProduct(c.phase);
  return c;
}

CouplingMatrices build_couplings(const Scenario& scenario) {
  return build_couplings(scenario.array, scenario.include_nw_coupling);
}

std::vector<CollectiveMode> collective_modes(const Eigen::MatrixXcd& matrix) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(matrix, true);
  if (solver.info() != Eigen::Success) {
    std::ostringstream echo;
    write_matrix_csv(echo, matrix);
    throw NumericalError("eigen-decomposition did not converge for matrix:\n" + echo.str());
  }
  const double mean_diag_imag = matrix.diagonal().imag().mean();
  std::vector<CollectiveMode> modes;
  modes.reserve(static_cast<std::size_t>(matrix.rows()));
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    CollectiveMode m;
    m.eigenvalue = solver.eigenvalues()(i);
    m.vector = solver.eigenvectors().col(i).normalized();
    m.shift = m.eigenvalue.imag() - mean_diag_imag;
    modes.push_back(std::move(m));
  }
  std::stable_sort(modes.begin(), modes.end(), [](const CollectiveMode& a, const CollectiveMode& b) {
    return a.eigenvalue.real() > b.eigenvalue.real();
  });
  return modes;
}

std::vector<CollectiveMode> collective_modes(const CouplingMatrices& couplings) {
  return collective_modes(couplings.effective);
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& matrix) {
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j > 0) out << ',';
      out << csv::number(matrix(i, j).real()) << ',' << csv::number(matrix(i, j).imag());
    }
    out << '\n';
  }
}

}  // namespace wgqed
