#pragma once

#include <Eigen/Dense>

#include "hermgen/hermite.hpp"

namespace hermgen {

using Index = Eigen::Index;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Parameters of x = W sigma_l(F z + b), z ~ N(mu, Sigma).
//   W: d x k, F: k x p, b: k, mu: p, Sigma: p x p symmetric PSD.
struct GenModelParams {
  Eigen::MatrixXd W;
  Eigen::MatrixXd F;
  Eigen::VectorXd b;
  Eigen::VectorXd mu;
  Eigen::MatrixXd Sigma;
  HermiteSeries series;

  Index d() const noexcept { return W.rows(); }
  Index k() const noexcept { return F.rows(); }
  Index p() const noexcept { return F.cols(); }

  // Throws ParameterError on shape mismatch, non-finite entries, or a Sigma
  // that is asymmetric beyond 1e-10 or has an eigenvalue below -1e-8.
  void validate() const;

  // W = F = Sigma = I of the given size, b = mu = 0.
  static GenModelParams identity(Index dim, HermiteSeries series);
};

}  // namespace hermgen
