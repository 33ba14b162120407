#include "hermgen/linalg.hpp"

#include <cmath>
#include <string>

#include "hermgen/errors.hpp"

namespace hermgen {

bool is_symmetric(const Eigen::MatrixXd& a, double tol) {
  if (a.rows() != a.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::abs(a(i, j) - a(j, i)) > tol) return false;
    }
  }
  return true;
}

Eigen::MatrixXd psd_cholesky(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw ParameterError("psd_cholesky: matrix is not square");
  const Eigen::Index n = a.rows();
  const double scale = n > 0 ? std::max(1.0, a.diagonal().cwiseAbs().maxCoeff()) : 1.0;
  const double tol = kPsdTol * scale;
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = a(j, j) - l.row(j).head(j).squaredNorm();
    if (pivot < -tol) {
      throw ParameterError("psd_cholesky: matrix is not positive semidefinite (pivot " +
                           std::to_string(pivot) + " at " + std::to_string(j) + ")");
    }
    if (pivot <= tol) continue;  // rank-deficient column
    const double root = std::sqrt(pivot);
    l(j, j) = root;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / root;
    }
  }
  return l;
}

PsdSqrt psd_sqrt(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  if (eig.info() != Eigen::Success) throw NumericalError("psd_sqrt: eigendecomposition failed");
  Eigen::VectorXd values = eig.eigenvalues();
  double clipped = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] < 0.0) {
      clipped += -values[i];
      values[i] = 0.0;
    }
  }
  PsdSqrt out;
  out.root = eig.eigenvectors() * values.cwiseSqrt().asDiagonal() *
             eig.eigenvectors().transpose();
  out.clipped_mass = clipped;
  out.trace = a.trace();
  return out;
}

}  // namespace hermgen
