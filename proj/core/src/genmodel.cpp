#include "hermgen/genmodel.hpp"

#include <numeric>
#include <random>
#include <string>

#include "hermgen/errors.hpp"
#include "hermgen/linalg.hpp"

namespace hermgen {

namespace {

constexpr double kMaxClippedFraction = 1e-6;

// Role tags for substream derivation.
constexpr const char* kRoleLatent = "latent";
constexpr const char* kRoleEquivalent = "gauss-equiv";
constexpr const char* kRoleStandard = "standard-gaussian";
constexpr const char* kRoleNegative = "dataset-negative";
constexpr const char* kRolePositive = "dataset-positive";
constexpr const char* kRoleShuffle = "dataset-shuffle";

bool exact_identity(const Eigen::MatrixXd& m) {
  return m.rows() == m.cols() && m == Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

void check_count(Index n) {
  if (n < 1) throw ParameterError("sample count must be >= 1, got " + std::to_string(n));
}

template <class RowFn>
RowMatrix draw_rows(Index n, Index dim, std::uint64_t seed, const char* role, RowFn&& fn) {
  check_count(n);
  RowMatrix out(n, dim);
  Eigen::VectorXd row(dim);
  for (Index i = 0; i < n; ++i) {
    NormalSource normal(seed, role, static_cast<std::uint64_t>(i));
    fn(normal, row);
    out.row(i) = row.transpose();
  }
  return out;
}

Dataset assemble(const RowMatrix& negative, const RowMatrix& positive,
                 const std::vector<Index>& order) {
  const Index n = negative.rows();
  Dataset ds;
  ds.features.resize(2 * n, negative.cols());
  ds.labels.resize(2 * n);
  for (Index r = 0; r < 2 * n; ++r) {
    const Index src = order[r];
    if (src < n) {
      ds.features.row(r) = negative.row(src);
      ds.labels[r] = -1;
    } else {
      ds.features.row(r) = positive.row(src - n);
      ds.labels[r] = +1;
    }
  }
  return ds;
}

}  // namespace

ModelSampler::ModelSampler(const GenModelParams& params)
    : ModelSampler(params, [s = params.series](double z) { return series_eval(s, z); }) {}

ModelSampler::ModelSampler(const GenModelParams& params,
                           std::function<double(double)> activation)
    : params_(params), activation_(std::move(activation)) {
  params_.validate();
  latent_root_ = psd_cholesky(params_.Sigma);
  w_identity_ = exact_identity(params_.W);
  f_identity_ = exact_identity(params_.F);
  sigma_identity_ = exact_identity(params_.Sigma);
}

void ModelSampler::sample_latent(NormalSource& normal, Eigen::Ref<Eigen::VectorXd> z) const {
  const Index p = params_.p();
  Eigen::VectorXd eps(p);
  normal.fill({eps.data(), static_cast<std::size_t>(p)});
  if (sigma_identity_) {
    z = params_.mu + eps;
  } else {
    z = params_.mu + latent_root_.triangularView<Eigen::Lower>() * eps;
  }
}

void ModelSampler::sample(NormalSource& normal, Eigen::Ref<Eigen::VectorXd> x) const {
  Eigen::VectorXd z(params_.p());
  sample_latent(normal, z);
  Eigen::VectorXd u = f_identity_ ? Eigen::VectorXd(z + params_.b)
                                  : Eigen::VectorXd(params_.F * z + params_.b);
  for (Index i = 0; i < u.size(); ++i) u[i] = activation_(u[i]);
  if (w_identity_) {
    x = u;
  } else {
    x.noalias() = params_.W * u;
  }
}

GaussianSampler::GaussianSampler(MomentSummary moments) : moments_(std::move(moments)) {
  if (moments_.cov.rows() != moments_.mean.size() || moments_.cov.cols() != moments_.mean.size()) {
    throw ParameterError("GaussianSampler: mean/covariance shape mismatch");
  }
  if (!is_symmetric(moments_.cov)) throw ParameterError("GaussianSampler: covariance is not symmetric");
  const PsdSqrt root = psd_sqrt(moments_.cov);
  if (root.clipped_mass > kMaxClippedFraction * std::max(root.trace, 0.0) &&
      root.clipped_mass > kPsdTol) {
    throw ParameterError("GaussianSampler: covariance has negative eigenvalue mass " +
                         std::to_string(root.clipped_mass) + " (trace " +
                         std::to_string(root.trace) + ")");
  }
  root_ = root.root;
}

void GaussianSampler::sample(NormalSource& normal, Eigen::Ref<Eigen::VectorXd> x) const {
  Eigen::VectorXd eps(d());
  normal.fill({eps.data(), static_cast<std::size_t>(d())});
  x.noalias() = root_ * eps;
  x += moments_.mean;
}

RowMatrix sample_latent(const GenModelParams& params, Index n, std::uint64_t seed) {
  const ModelSampler sampler(params);
  return draw_rows(n, params.p(), seed, kRoleLatent,
                   [&](NormalSource& g, Eigen::VectorXd& row) { sampler.sample_latent(g, row); });
}

RowMatrix generate(const GenModelParams& params, Index n, std::uint64_t seed) {
  const ModelSampler sampler(params);
  return draw_rows(n, params.d(), seed, kRoleLatent,
                   [&](NormalSource& g, Eigen::VectorXd& row) { sampler.sample(g, row); });
}

RowMatrix generate_direct(const GenModelParams& params,
                          const std::function<double(double)>& activation, Index n,
                          std::uint64_t seed) {
  const ModelSampler sampler(params, activation);
  return draw_rows(n, params.d(), seed, kRoleLatent,
                   [&](NormalSource& g, Eigen::VectorXd& row) { sampler.sample(g, row); });
}

RowMatrix gaussian_equivalent(const GaussianSampler& sampler, Index n, std::uint64_t seed) {
  return draw_rows(n, sampler.d(), seed, kRoleEquivalent,
                   [&](NormalSource& g, Eigen::VectorXd& row) { sampler.sample(g, row); });
}

RowMatrix gaussian_equivalent(const GenModelParams& params, Index n, std::uint64_t seed) {
  check_count(n);
  return gaussian_equivalent(GaussianSampler(model_mean_cov(params)), n, seed);
}

RowMatrix standard_gaussian(Index d, Index n, std::uint64_t seed) {
  return draw_rows(n, d, seed, kRoleStandard, [&](NormalSource& g, Eigen::VectorXd& row) {
    g.fill({row.data(), static_cast<std::size_t>(row.size())});
  });
}

std::vector<Index> shuffled_indices(Index n, Xoshiro256& engine) {
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  for (Index i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<Index> pick(0, i);
    std::swap(order[i], order[pick(engine)]);
  }
  return order;
}

Dataset build_train_dataset(const GenModelParams& params, Index n_per_class,
                            std::uint64_t seed) {
  check_count(n_per_class);
  const RowMatrix negative =
      standard_gaussian(params.d(), n_per_class, derive_seed(seed, kRoleNegative));
  const RowMatrix positive = generate(params, n_per_class, derive_seed(seed, kRolePositive));
  Xoshiro256 engine = substream(seed, kRoleShuffle);
  return assemble(negative, positive, shuffled_indices(2 * n_per_class, engine));
}

std::pair<Dataset, Dataset> build_eval_pair(const GenModelParams& params,
                                            const GaussianSampler& equivalent,
                                            Index n_per_class, std::uint64_t seed) {
  check_count(n_per_class);
  if (equivalent.d() != params.d()) {
    throw ParameterError("build_eval_pair: Gaussian-equivalent dimension mismatch");
  }
  const RowMatrix negative =
      standard_gaussian(params.d(), n_per_class, derive_seed(seed, kRoleNegative));
  const RowMatrix model = generate(params, n_per_class, derive_seed(seed, kRolePositive));
  const RowMatrix matched =
      gaussian_equivalent(equivalent, n_per_class, derive_seed(seed, kRolePositive));
  Xoshiro256 engine = substream(seed, kRoleShuffle);
  const std::vector<Index> order = shuffled_indices(2 * n_per_class, engine);
  return {assemble(negative, model, order), assemble(negative, matched, order)};
}

std::pair<Dataset, Dataset> build_eval_pair(const GenModelParams& params, Index n_per_class,
                                            std::uint64_t seed) {
  return build_eval_pair(params, GaussianSampler(model_mean_cov(params)), n_per_class, seed);
}

}  // namespace hermgen
