#include "hermgen/params.hpp"

#include <string>

#include "hermgen/errors.hpp"
#include "hermgen/linalg.hpp"

namespace hermgen {

namespace {

std::string shape(const Eigen::MatrixXd& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

void GenModelParams::validate() const {
  if (W.size() == 0 || F.size() == 0) throw ParameterError("W and F must be non-empty");
  if (W.cols() != F.rows()) {
    throw ParameterError("W is " + shape(W) + " but F is " + shape(F) +
                         " (W columns must equal F rows)");
  }
  if (b.size() != F.rows()) {
    throw ParameterError("b has length " + std::to_string(b.size()) + ", expected k = " +
                         std::to_string(F.rows()));
  }
  if (mu.size() != F.cols()) {
    throw ParameterError("mu has length " + std::to_string(mu.size()) + ", expected p = " +
                         std::to_string(F.cols()));
  }
  if (Sigma.rows() != F.cols() || Sigma.cols() != F.cols()) {
    throw ParameterError("Sigma is " + shape(Sigma) + ", expected p x p with p = " +
                         std::to_string(F.cols()));
  }
  if (!W.allFinite() || !F.allFinite() || !b.allFinite() || !mu.allFinite() ||
      !Sigma.allFinite()) {
    throw ParameterError("model parameters contain non-finite entries");
  }
  if (!is_symmetric(Sigma)) throw ParameterError("Sigma is not symmetric");
  const double min_eig =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Sigma, Eigen::EigenvaluesOnly)
          .eigenvalues()
          .minCoeff();
  if (min_eig < -kPsdTol) {
    throw ParameterError("Sigma is not positive semidefinite (min eigenvalue " +
                         std::to_string(min_eig) + ")");
  }
}

GenModelParams GenModelParams::identity(Index dim, HermiteSeries series) {
  GenModelParams p;
  p.W = Eigen::MatrixXd::Identity(dim, dim);
  p.F = Eigen::MatrixXd::Identity(dim, dim);
  p.b = Eigen::VectorXd::Zero(dim);
  p.mu = Eigen::VectorXd::Zero(dim);
  p.Sigma = Eigen::MatrixXd::Identity(dim, dim);
  p.series = std::move(series);
  return p;
}

}  // namespace hermgen
