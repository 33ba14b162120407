#include "hermgen/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hermgen/errors.hpp"

namespace hermgen {

namespace {

int exact_order(int degree_of_integrand) {
  return std::max(1, (degree_of_integrand + 2) / 2);
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct PairFactor {
  double l11;
  double l21;
  double l22;
};

PairFactor factor_pair(double var_i, double var_j, double cov_ij) {
  PairFactor f{};
  f.l11 = std::sqrt(std::max(0.0, var_i));
  if (f.l11 > 0.0) {
    f.l21 = cov_ij / f.l11;
    f.l22 = std::sqrt(std::max(0.0, var_j - f.l21 * f.l21));
  } else {
    f.l21 = 0.0;
    f.l22 = std::sqrt(std::max(0.0, var_j));
  }
  return f;
}

double pair_cross_moment(const HermiteSeries& s, const QuadratureRule& rule, double mean_i,
                         double mean_j, const PairFactor& f) {
  double acc = 0.0;
  for (std::size_t a = 0; a < rule.size(); ++a) {
    const double xa = rule.nodes[a];
    const double outer = series_eval(s, mean_i + f.l11 * xa);
    double inner;
    if (f.l22 == 0.0) {
      inner = series_eval(s, mean_j + f.l21 * xa);  // rank-1 pair
    } else {
      inner = 0.0;
      for (std::size_t b = 0; b < rule.size(); ++b) {
        inner += rule.weights[b] * series_eval(s, mean_j + f.l21 * xa + f.l22 * rule.nodes[b]);
      }
    }
    acc += rule.weights[a] * outer * inner;
  }
  return acc;
}

}  // namespace

double series_moment(const HermiteSeries& s, int r, double mean_shift, double scale) {
  if (r < 1) throw ParameterError("series_moment: order must be >= 1");
  const QuadratureRule rule = gauss_hermite(exact_order(r * s.degree()));
  return rule.integrate(
      [&](double x) { return std::pow(series_eval(s, mean_shift + scale * x), r); });
}

CumulantVector cumulants_from_moments(std::span<const double> raw) {
  const int m = static_cast<int>(raw.size());
  CumulantVector out;
  out.values.resize(m);
  for (int n = 1; n <= m; ++n) {
    double k = raw[n - 1];
    for (int j = 1; j < n; ++j) {
      k -= binomial(n - 1, j - 1) * out.values[j - 1] * raw[n - j - 1];
    }
    out.values[n - 1] = k;
  }
  return out;
}

CumulantVector series_cumulants(const HermiteSeries& s, int m) {
  if (m < 1) throw ParameterError("series_cumulants: order must be >= 1");
  const QuadratureRule rule = gauss_hermite(exact_order(m * s.degree()));
  const double c0 = s[0];
  std::vector<double> centred(m, 0.0);
  for (std::size_t t = 0; t < rule.size(); ++t) {
    const double v = series_eval(s, rule.nodes[t]) - c0;
    double pw = 1.0;
    for (int r = 0; r < m; ++r) {
      pw *= v;
      centred[r] += rule.weights[t] * pw;
    }
  }
  CumulantVector out = cumulants_from_moments(centred);
  out.values[0] += c0;
  return out;
}

CumulantVector sample_cumulants(std::span<const double> data, int m) {
  if (m < 1 || m > 4) throw ParameterError("sample_cumulants: order must be in [1, 4]");
  const std::size_t size = data.size();
  if (size <= static_cast<std::size_t>(m)) {
    throw InsufficientSampleError("sample_cumulants: need more than " + std::to_string(m) +
                                  " samples, got " + std::to_string(size));
  }
  const double n = static_cast<double>(size);
  double mean = 0.0;
  for (double v : data) mean += v;
  mean /= n;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : data) {
    const double dv = v - mean;
    const double d2 = dv * dv;
    m2 += d2;
    m3 += d2 * dv;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;

  CumulantVector out;
  out.values.push_back(mean);
  if (m >= 2) out.values.push_back(n * m2 / (n - 1.0));
  if (m >= 3) out.values.push_back(n * n * m3 / ((n - 1.0) * (n - 2.0)));
  if (m >= 4) {
    out.values.push_back(n * n * ((n + 1.0) * m4 - 3.0 * (n - 1.0) * m2 * m2) /
                         ((n - 1.0) * (n - 2.0) * (n - 3.0)));
  }
  return out;
}

double kstat_standard_error(int r, double var, std::size_t n) {
  return std::sqrt(factorial(r) * std::pow(var, r) / static_cast<double>(n));
}

double pair_covariance(const HermiteSeries& s, double mean_i, double var_i, double mean_j,
                       double var_j, double cov_ij) {
  const QuadratureRule rule = gauss_hermite(s.degree() + 1);
  const double ei =
      rule.integrate([&](double x) { return series_eval(s, mean_i + std::sqrt(var_i) * x); });
  const double ej =
      rule.integrate([&](double x) { return series_eval(s, mean_j + std::sqrt(var_j) * x); });
  return pair_cross_moment(s, rule, mean_i, mean_j, factor_pair(var_i, var_j, cov_ij)) - ei * ej;
}

MomentSummary model_mean_cov(const GenModelParams& params) {
  params.validate();
  const HermiteSeries& s = params.series;
  const Index k = params.k();
  const QuadratureRule rule = gauss_hermite(s.degree() + 1);

  const Eigen::VectorXd u_mean = params.F * params.mu + params.b;
  const Eigen::MatrixXd u_cov = params.F * params.Sigma * params.F.transpose();

  Eigen::VectorXd theta_mean(k);
  Eigen::VectorXd theta_second(k);
  for (Index i = 0; i < k; ++i) {
    const double sd = std::sqrt(std::max(0.0, u_cov(i, i)));
    double first = 0.0, second = 0.0;
    for (std::size_t t = 0; t < rule.size(); ++t) {
      const double v = series_eval(s, u_mean[i] + sd * rule.nodes[t]);
      first += rule.weights[t] * v;
      second += rule.weights[t] * v * v;
    }
    theta_mean[i] = first;
    theta_second[i] = second;
  }

  Eigen::MatrixXd theta_cov = Eigen::MatrixXd::Zero(k, k);
  const bool affine = s.is_affine();
  for (Index i = 0; i < k; ++i) {
    theta_cov(i, i) = std::max(0.0, theta_second[i] - theta_mean[i] * theta_mean[i]);
    for (Index j = 0; j < i; ++j) {
      const double c = u_cov(i, j);
      if (c == 0.0) continue;  // independent Gaussian coordinates
      double value;
      if (affine) {
        value = s.degree() >= 1 ? s[1] * s[1] * c : 0.0;
      } else {
        const PairFactor f = factor_pair(u_cov(i, i), u_cov(j, j), c);
        value = pair_cross_moment(s, rule, u_mean[i], u_mean[j], f) -
                theta_mean[i] * theta_mean[j];
      }
      theta_cov(i, j) = value;
      theta_cov(j, i) = value;
    }
  }

  MomentSummary out;
  out.mean = params.W * theta_mean;
  Eigen::MatrixXd cov = params.W * theta_cov * params.W.transpose();
  out.cov = 0.5 * (cov + cov.transpose());
  return out;
}

}  // namespace hermgen
