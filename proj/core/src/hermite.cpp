#include "hermgen/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "hermgen/errors.hpp"

namespace hermgen {

HermiteSeries::HermiteSeries(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw ParameterError("HermiteSeries needs at least one coefficient");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (!std::isfinite(coeffs_[i])) {
      throw ParameterError("HermiteSeries coefficient c" + std::to_string(i) +
                           " is not finite");
    }
  }
}

double HermiteSeries::operator()(double z) const noexcept { return series_eval(*this, z); }

bool HermiteSeries::is_affine() const noexcept {
  return std::all_of(coeffs_.begin() + std::min<std::ptrdiff_t>(2, coeffs_.size()),
                     coeffs_.end(), [](double c) { return c == 0.0; });
}

double he_eval(int n, double z) {
  if (n < 0) throw ParameterError("Hermite index must be non-negative");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = z;
  for (int k = 1; k < n; ++k) {
    const double next = z * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double series_eval(const HermiteSeries& s, double z) noexcept {
  const auto c = s.coeffs();
  double acc = c[0];
  if (c.size() == 1) return acc;
  double prev = 1.0;
  double cur = z;
  acc += c[1] * cur;
  for (std::size_t k = 1; k + 1 < c.size(); ++k) {
    const double next = z * cur - static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
    acc += c[k + 1] * cur;
  }
  return acc;
}

void series_eval(const HermiteSeries& s, std::span<const double> z, std::span<double> out) {
  if (z.size() != out.size()) throw ParameterError("series_eval: input/output size mismatch");
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = series_eval(s, z[i]);
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

namespace {

// Scaled orthonormal Hermite functions psi_k(x) = He_k(x) exp(-x^2/4) / sqrt(k!).
// Stays O(1) near the largest roots where He_n itself overflows.
struct HermiteFunctions {
  double psi_n;
  double psi_nm1;
};

HermiteFunctions hermite_functions(int n, double x) {
  double prev = 0.0;
  double cur = std::exp(-0.25 * x * x);
  for (int k = 0; k < n; ++k) {
    const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                        std::sqrt(static_cast<double>(k + 1));
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

constexpr double kNewtonTol = 1e-14;
constexpr int kNewtonMaxIter = 100;

}  // namespace

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw ParameterError("gauss_hermite: node count must be >= 1");

  const int half = n / 2;
  std::vector<double> pos_nodes(half);
  std::vector<double> pos_weights(half);

  // Initial guesses are the eigenvalues of the symmetric Jacobi matrix of the
  // recurrence (zero diagonal, off-diagonal sqrt(k)); Newton then polishes
  // each positive root of He_n to full precision.
  std::vector<double> guesses(half);
  if (half > 0) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
      throw ConvergenceError("gauss_hermite: Jacobi eigenvalue iteration failed", 0);
    }
    // Ascending eigenvalues; take the positive half, largest first.
    for (int i = 0; i < half; ++i) guesses[i] = std::abs(eig.eigenvalues()[n - 1 - i]);
  }
  for (int i = 0; i < half; ++i) {
    double x = guesses[i];
    bool converged = false;
    HermiteFunctions hf{};
    for (int iter = 0; iter < kNewtonMaxIter; ++iter) {
      hf = hermite_functions(n, x);
      // d/dx He_n = n He_{n-1}; the common exp(-x^2/4) factor cancels in the ratio.
      const double deriv = std::sqrt(static_cast<double>(n)) * hf.psi_nm1;
      const double step = hf.psi_n / deriv;
      x -= step;
      if (!std::isfinite(x)) break;
      if (std::abs(step) <= kNewtonTol * std::max(1.0, std::abs(x))) {
        converged = true;
        break;
      }
    }
    if (converged && i > 0 && !(x < pos_nodes[i - 1])) converged = false;
    if (!converged || !(x > 0.0)) {
      throw ConvergenceError("gauss_hermite: Newton iteration failed for node " +
                                 std::to_string(i) + " of " + std::to_string(n),
                             i);
    }
    hf = hermite_functions(n, x);
    pos_nodes[i] = x;
    // w = n! / (n^2 He_{n-1}(x)^2) = exp(-x^2/2) / (n psi_{n-1}(x)^2).
    pos_weights[i] = std::exp(-0.5 * x * x) / (n * hf.psi_nm1 * hf.psi_nm1);
  }

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < half; ++i) {
    rule.nodes[i] = -pos_nodes[i];
    rule.weights[i] = pos_weights[i];
    rule.nodes[n - 1 - i] = pos_nodes[i];
    rule.weights[n - 1 - i] = pos_weights[i];
  }
  if (n % 2 == 1) {
    const HermiteFunctions hf = hermite_functions(n, 0.0);
    rule.nodes[half] = 0.0;
    rule.weights[half] = 1.0 / (n * hf.psi_nm1 * hf.psi_nm1);
  }

  // Sum the small tail weights first, then renormalize to exactly one.
  double total = 0.0;
  for (int i = 0; i < half; ++i) total += 2.0 * rule.weights[i];
  if (n % 2 == 1) total += rule.weights[half];
  for (double& w : rule.weights) w /= total;
  return rule;
}

HermiteSeries expand_activation(const std::function<double(double)>& sigma, int degree,
                                int quad_order) {
  if (degree < 0) throw ParameterError("expand_activation: degree must be >= 0");
  if (quad_order < degree + 1) {
    throw ParameterError("expand_activation: quadrature order " + std::to_string(quad_order) +
                         " is below degree + 1 = " + std::to_string(degree + 1));
  }
  return expand_activation(sigma, degree, gauss_hermite(quad_order));
}

HermiteSeries expand_activation(const std::function<double(double)>& sigma, int degree,
                                const QuadratureRule& rule) {
  if (degree < 0) throw ParameterError("expand_activation: degree must be >= 0");
  if (static_cast<int>(rule.size()) < degree + 1) {
    throw ParameterError("expand_activation: quadrature rule has fewer than degree + 1 nodes");
  }
  const std::size_t n = rule.size();
  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = sigma(rule.nodes[k]);
    if (!std::isfinite(values[k])) {
      throw NumericalError("expand_activation: activation is not finite at node " +
                           std::to_string(rule.nodes[k]));
    }
  }

  // Accumulate symmetric node pairs together so that odd (even) activations
  // give exactly zero even (odd) coefficients.
  std::vector<double> coeffs(degree + 1, 0.0);
  const std::size_t half = n / 2;
  for (int i = 0; i <= degree; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < half; ++k) {
      const std::size_t mirror = n - 1 - k;
      const double he_right = he_eval(i, rule.nodes[mirror]);
      const double he_left = (i % 2 == 0) ? he_right : -he_right;
      acc += rule.weights[k] * (values[k] * he_left + values[mirror] * he_right);
    }
    if (n % 2 == 1) acc += rule.weights[half] * values[half] * he_eval(i, 0.0);
    coeffs[i] = acc / factorial(i);
  }
  return HermiteSeries(std::move(coeffs));
}

std::function<double(double)> named_activation(std::string_view name) {
  if (name == "identity" || name == "linear") return [](double z) { return z; };
  if (name == "tanh") return [](double z) { return std::tanh(z); };
  if (name == "relu") return [](double z) { return z > 0.0 ? z : 0.0; };
  if (name == "sigmoid") return [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
  if (name == "erf") return [](double z) { return std::erf(z); };
  if (name == "sin") return [](double z) { return std::sin(z); };
  throw ParameterError("unknown activation '" + std::string(name) + "'");
}

}  // namespace hermgen
