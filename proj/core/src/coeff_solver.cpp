#include "hermgen/coeff_solver.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "hermgen/rng.hpp"

namespace hermgen {

namespace {

constexpr int kMaxHalvings = 30;
constexpr double kRestartScale = 0.3;
constexpr double kFdStep = 1e-6;

Eigen::VectorXd residual(const Eigen::VectorXd& c, const Eigen::VectorXd& targets) {
  const CumulantVector g =
      series_cumulants(HermiteSeries(std::vector<double>(c.data(), c.data() + c.size())),
                       static_cast<int>(targets.size()));
  return Eigen::Map<const Eigen::VectorXd>(g.values.data(), g.order()) - targets;
}

Eigen::MatrixXd jacobian(const Eigen::VectorXd& c, const Eigen::VectorXd& targets) {
  const Index n = c.size();
  Eigen::MatrixXd jac(targets.size(), n);
  for (Index i = 0; i < n; ++i) {
    const double h = kFdStep * std::max(1.0, std::abs(c[i]));
    Eigen::VectorXd plus = c, minus = c;
    plus[i] += h;
    minus[i] -= h;
    jac.col(i) = (residual(plus, targets) - residual(minus, targets)) / (2.0 * h);
  }
  return jac;
}

Eigen::VectorXd newton_direction(const Eigen::MatrixXd& jac, const Eigen::VectorXd& r) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac);
  if (qr.isInvertible()) return qr.solve(-r);
  return jac.completeOrthogonalDecomposition().solve(-r);
}

HermiteSeries canonical(Eigen::VectorXd c) {
  if (c.size() > 1 && c[1] < 0.0) {
    for (Index i = 1; i < c.size(); i += 2) c[i] = -c[i];
  }
  return HermiteSeries(std::vector<double>(c.data(), c.data() + c.size()));
}

double certify(const HermiteSeries& s, const CumulantVector& targets) {
  const CumulantVector g = series_cumulants(s, targets.order());
  double worst = 0.0;
  for (int i = 0; i < targets.order(); ++i) {
    const double e = std::abs(g[i] - targets[i]);
    if (!std::isfinite(e)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, e);
  }
  return worst;
}

}  // namespace

SolveReport solve_coefficients(const CumulantVector& targets, int degree,
                               const SolveOptions& options) {
  if (degree < 0) throw ParameterError("solve_coefficients: degree must be >= 0");
  if (targets.order() != degree + 1) {
    throw ParameterError("solve_coefficients: expected " + std::to_string(degree + 1) +
                         " target cumulants for degree " + std::to_string(degree) + ", got " +
                         std::to_string(targets.order()));
  }
  for (double v : targets.values) {
    if (!std::isfinite(v)) throw ParameterError("solve_coefficients: non-finite target");
  }
  if (targets.order() >= 2 && targets[1] < 0.0) {
    throw ParameterError("solve_coefficients: target variance must be >= 0");
  }
  if (!(options.tol > 0.0)) throw ParameterError("solve_coefficients: tol must be positive");
  if (options.max_restarts < 0) {
    throw ParameterError("solve_coefficients: max_restarts must be >= 0");
  }

  const Eigen::VectorXd kappa =
      Eigen::Map<const Eigen::VectorXd>(targets.values.data(), targets.order());
  Eigen::VectorXd start = Eigen::VectorXd::Zero(degree + 1);
  start[0] = kappa[0];
  if (degree >= 1) start[1] = std::sqrt(kappa[1]);

  SolveReport best;
  best.residual_norm = std::numeric_limits<double>::infinity();
  int total_iterations = 0;

  for (int attempt = 0; attempt <= options.max_restarts; ++attempt) {
    Eigen::VectorXd c = start;
    if (attempt > 0) {
      NormalSource noise(options.seed, "coeff-solver-restart", static_cast<std::uint64_t>(attempt));
      for (Index i = 0; i < c.size(); ++i) c[i] += kRestartScale * noise();
    }

    Eigen::VectorXd r = residual(c, kappa);
    for (int it = 0; it < options.max_newton_iterations; ++it) {
      if (!r.allFinite() || r.cwiseAbs().maxCoeff() <= options.tol) break;
      ++total_iterations;
      const Eigen::VectorXd delta = newton_direction(jacobian(c, kappa), r);
      if (!delta.allFinite()) break;

      const double merit = r.squaredNorm();
      double lambda = 1.0;
      bool accepted = false;
      for (int h = 0; h <= kMaxHalvings; ++h, lambda *= 0.5) {
        const Eigen::VectorXd trial = c + lambda * delta;
        const Eigen::VectorXd trial_r = residual(trial, kappa);
        if (trial_r.allFinite() && trial_r.squaredNorm() < merit) {
          c = trial;
          r = trial_r;
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
    }

    if (!c.allFinite()) continue;
    HermiteSeries candidate = canonical(c);
    const double certified = certify(candidate, targets);
    if (certified < best.residual_norm) {
      best.series = candidate;
      best.residual_norm = certified;
      best.restarts_used = attempt;
    }
    if (certified <= options.tol) {
      best.iterations = total_iterations;
      return best;
    }
  }

  best.iterations = total_iterations;
  throw SolveError("solve_coefficients: no attempt reached tolerance (best residual " +
                       std::to_string(best.residual_norm) + " after " +
                       std::to_string(options.max_restarts) + " restarts)",
                   best);
}

}  // namespace hermgen
