#pragma once

#include "levidf/jet.hpp"

#include <Eigen/Dense>

#include <complex>

namespace levidf {

/// Wirtinger first/second derivative data of a real-valued function of n
/// complex variables: dz_j = df/dz_j and levi[j][k] = d^2 f / dz_j dz̄_k.
struct WirtingerJet {
  double value = 0.0;
  Eigen::VectorXcd dz;
  Eigen::MatrixXcd levi;  // Hermitian (exactly, by construction)
};

/// Converts a real jet over (x_1, y_1, ..., x_n, y_n) to Wirtinger data via
/// dz_j = (g_x - i g_y)/2 and levi[j][k] = ((H_xx + H_yy) + i(H_xy - H_yx))/4.
/// Throws if the jet dimension is not 2n.
WirtingerJet wirtinger(const Jet& jet, Eigen::Index n);

/// k x k complex Hermitian matrix with positivity queries.
class HermitianForm {
 public:
  /// Takes ownership of entries assumed exactly Hermitian (as produced by
  /// wirtinger() and the curvature pipeline). Checked in debug builds only.
  explicit HermitianForm(Eigen::MatrixXcd entries);

  /// For external input: rejects matrices whose asymmetry exceeds `tol`
  /// (throwing NonHermitianError), then symmetrizes exactly.
  static HermitianForm from_matrix(const Eigen::MatrixXcd& m, double tol = 1e-12);

  Eigen::Index dim() const { return entries_.rows(); }
  const Eigen::MatrixXcd& entries() const { return entries_; }

 private:
  Eigen::MatrixXcd entries_;
};

class NonHermitianError : public std::runtime_error {
 public:
  explicit NonHermitianError(double max_asymmetry);
  double max_asymmetry;
};

double max_asymmetry(const Eigen::MatrixXcd& m);

/// Smallest eigenvalue, to absolute accuracy 1e-10. Reference route: the
/// realified 2k x 2k symmetric eigenproblem, which needs only a real
/// symmetric solver.
double min_eigenvalue(const HermitianForm& form);
double min_eigenvalue(const Eigen::MatrixXcd& hermitian);

/// Numerical strict-positivity margin: 1e-9 * (1 + spectral radius estimate).
/// A relative margin keeps the threshold meaningful for forms whose scale
/// blows up near the boundary.
double eps_pos(const Eigen::MatrixXcd& hermitian);

/// Block test of positive definiteness: with A the leading (k-1) x (k-1)
/// block, b the last column head and c the corner, H > 0 iff c > 0 and
/// c*A - b*b^H > 0. Requires dim >= 2.
bool schur_positive(const HermitianForm& h);

}  // namespace levidf
