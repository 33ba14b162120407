#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hermgen/hermite.hpp"
#include "hermgen/params.hpp"

namespace hermgen {

// Cumulants kappa_1..kappa_m (values[0] is the mean).
struct CumulantVector {
  std::vector<double> values;

  int order() const noexcept { return static_cast<int>(values.size()); }
  double operator[](int i) const { return values.at(static_cast<std::size_t>(i)); }
};

struct MomentSummary {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

// E[sigma_l(shift + scale Z)^r], Z ~ N(0, 1), integrated exactly by a
// Gauss-Hermite rule of ceil((r l + 1) / 2) nodes.
double series_moment(const HermiteSeries& s, int r, double mean_shift = 0.0,
                     double scale = 1.0);

// kappa_1..kappa_m of sigma_l(Z): raw moments of sigma_l(Z) - c_0 fed through
// the moment-to-cumulant recursion, then kappa_1 shifted back by c_0.
CumulantVector series_cumulants(const HermiteSeries& s, int m);

// kappa_n = m_n - sum_{j=1}^{n-1} C(n-1, j-1) kappa_j m_{n-j}; raw[0] = m_1.
CumulantVector cumulants_from_moments(std::span<const double> raw);

// Unbiased k-statistics k_1..k_m for m in [1, 4]. Requires data.size() > m.
CumulantVector sample_cumulants(std::span<const double> data, int m);

// Asymptotic standard error of k_r for a Gaussian-like sample of size n with
// variance var: sqrt(r! var^r / n).
double kstat_standard_error(int r, double var, std::size_t n);

// Exact mean and covariance of x = W sigma_l(F z + b). Marginals are
// integrated with a 1-D rule and pairs with a tensor rule over the Cholesky
// factor of the pair's 2x2 covariance, both with l + 1 nodes per axis.
MomentSummary model_mean_cov(const GenModelParams& params);

// Cov(sigma_l(u_i), sigma_l(u_j)) for a jointly Gaussian pair with the given
// means, variances and covariance.
double pair_covariance(const HermiteSeries& s, double mean_i, double var_i, double mean_j,
                       double var_j, double cov_ij);

}  // namespace hermgen
