#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace hermgen {

inline constexpr int kDefaultQuadOrder = 200;

// Truncated expansion sigma(z) = sum_i c_i He_i(z) in probabilist's Hermite
// polynomials. Always holds degree() + 1 finite coefficients.
class HermiteSeries {
 public:
  HermiteSeries() : coeffs_{0.0} {}
  // Throws ParameterError on an empty or non-finite coefficient list.
  explicit HermiteSeries(std::vector<double> coeffs);
  HermiteSeries(std::initializer_list<double> coeffs)
      : HermiteSeries(std::vector<double>(coeffs)) {}

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double operator[](int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }

  double operator()(double z) const noexcept;

  // True when every coefficient of index >= 2 is zero, i.e. sigma is affine.
  bool is_affine() const noexcept;

  friend bool operator==(const HermiteSeries&, const HermiteSeries&) = default;

 private:
  std::vector<double> coeffs_;
};

// He_n(z) by the three-term recurrence He_{n+1} = z He_n - n He_{n-1}.
double he_eval(int n, double z);

double series_eval(const HermiteSeries& s, double z) noexcept;
void series_eval(const HermiteSeries& s, std::span<const double> z,
                 std::span<double> out);

// Gauss-Hermite rule with probability weights under N(0, 1).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

// n-node rule, exact for polynomials of degree <= 2n - 1. Nodes are the roots
// of He_n: Jacobi-matrix eigenvalues polished by Newton iteration on the
// scaled recurrence. The rule is exactly symmetric and its weights sum to one.
QuadratureRule gauss_hermite(int n);

// c_i = E[sigma(Z) He_i(Z)] / i! for i = 0..degree.
HermiteSeries expand_activation(const std::function<double(double)>& sigma,
                                int degree, int quad_order = kDefaultQuadOrder);
HermiteSeries expand_activation(const std::function<double(double)>& sigma,
                                int degree, const QuadratureRule& rule);

// Named scalar activations: identity, tanh, relu, sigmoid, erf, sin.
std::function<double(double)> named_activation(std::string_view name);

double factorial(int n);

}  // namespace hermgen
