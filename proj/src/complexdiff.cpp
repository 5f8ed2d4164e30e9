#include "levidf/complexdiff.hpp"

#include <cassert>
#include <stdexcept>
#include <string>

namespace levidf {

WirtingerJet wirtinger(const Jet& jet, Eigen::Index n) {
  if (jet.dim() != 2 * n)
    throw std::invalid_argument("wirtinger: jet dimension " + std::to_string(jet.dim()) +
                                " does not match 2n = " + std::to_string(2 * n));
  WirtingerJet w;
  w.value = jet.value;
  w.dz.resize(n);
  w.levi.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    w.dz[j] = 0.5 * std::complex<double>(jet.grad[2 * j], -jet.grad[2 * j + 1]);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double xx = jet.hess(2 * j, 2 * k);
      const double yy = jet.hess(2 * j + 1, 2 * k + 1);
      const double xy = jet.hess(2 * j, 2 * k + 1);
      const double yx = jet.hess(2 * j + 1, 2 * k);
      w.levi(j, k) = 0.25 * std::complex<double>(xx + yy, xy - yx);
    }
  }
  return w;
}

double max_asymmetry(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

NonHermitianError::NonHermitianError(double asym)
    : std::runtime_error("matrix is not Hermitian (max asymmetry " + std::to_string(asym) +
                         ")"),
      max_asymmetry(asym) {}

HermitianForm::HermitianForm(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1)
    throw std::invalid_argument("HermitianForm: matrix must be square with dim >= 1");
  assert(max_asymmetry(entries_) == 0.0);
}

HermitianForm HermitianForm::from_matrix(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw std::invalid_argument("HermitianForm: matrix must be square with dim >= 1");
  const double asym = max_asymmetry(m);
  if (asym > tol) throw NonHermitianError(asym);
  Eigen::MatrixXcd h = 0.5 * (m + m.adjoint().eval());
  for (Eigen::Index i = 0; i < h.rows(); ++i) h(i, i) = std::complex<double>(h(i, i).real(), 0.0);
  return HermitianForm(std::move(h));
}

double min_eigenvalue(const Eigen::MatrixXcd& hermitian) {
  const Eigen::Index k = hermitian.rows();
  // Realify: H = S + iK maps to [[S, -K], [K, S]], symmetric with the same
  // spectrum (each eigenvalue doubled).
  Eigen::MatrixXd r(2 * k, 2 * k);
  r.topLeftCorner(k, k) = hermitian.real();
  r.bottomRightCorner(k, k) = hermitian.real();
  r.topRightCorner(k, k) = -hermitian.imag();
  r.bottomLeftCorner(k, k) = hermitian.imag();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(r, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("min_eigenvalue: eigensolver failed to converge");
  return solver.eigenvalues()(0);
}

double min_eigenvalue(const HermitianForm& form) { return min_eigenvalue(form.entries()); }

double eps_pos(const Eigen::MatrixXcd& hermitian) {
  double radius = 0.0;  // Gershgorin bound
  for (Eigen::Index i = 0; i < hermitian.rows(); ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < hermitian.cols(); ++j) row += std::abs(hermitian(i, j));
    radius = std::max(radius, row);
  }
  return 1e-9 * (1.0 + radius);
}

bool schur_positive(const HermitianForm& h) {
  const Eigen::Index k = h.dim();
  if (k < 2) throw std::invalid_argument("schur_positive: requires dim >= 2");
  const Eigen::MatrixXcd& m = h.entries();
  const Eigen::MatrixXcd a = m.topLeftCorner(k - 1, k - 1);
  const Eigen::VectorXcd b = m.col(k - 1).head(k - 1);
  const double c = m(k - 1, k - 1).real();
  if (c <= 0.0) return false;
  const Eigen::MatrixXcd schur = c * a - b * b.adjoint();
  return min_eigenvalue(schur) > 0.0;
}

}  // namespace levidf
