#pragma once

#include <Eigen/Dense>

namespace hermgen {

inline constexpr double kSymmetryTol = 1e-10;
inline constexpr double kPsdTol = 1e-8;

// Lower-triangular L with L L^T = A for symmetric positive semidefinite A.
// Pivots within kPsdTol (scaled by the largest diagonal) of zero are treated
// as exact zeros; a pivot below that throws ParameterError.
Eigen::MatrixXd psd_cholesky(const Eigen::MatrixXd& a);

struct PsdSqrt {
  Eigen::MatrixXd root;   // root * root^T == clipped A
  double clipped_mass;    // sum of |negative eigenvalues| removed
  double trace;
};

// Symmetric square root via eigendecomposition, negative eigenvalues clipped to 0.
PsdSqrt psd_sqrt(const Eigen::MatrixXd& a);

bool is_symmetric(const Eigen::MatrixXd& a, double tol = kSymmetryTol);

}  // namespace hermgen
