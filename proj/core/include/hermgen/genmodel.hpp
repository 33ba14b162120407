#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hermgen/moments.hpp"
#include "hermgen/params.hpp"
#include "hermgen/rng.hpp"

namespace hermgen {

// Labelled samples for the Gaussian (-1) vs. model (+1) task.
struct Dataset {
  RowMatrix features;
  std::vector<int> labels;

  Index size() const noexcept { return features.rows(); }
  Index dim() const noexcept { return features.cols(); }
};

// Draws single samples of x = W sigma(F z + b). Construction validates the
// parameters and factors Sigma once; sampling is then const and thread-safe
// given a caller-owned NormalSource.
class ModelSampler {
 public:
  explicit ModelSampler(const GenModelParams& params);
  // Samples W sigma(F z + b) for an arbitrary activation instead of the series.
  ModelSampler(const GenModelParams& params, std::function<double(double)> activation);

  void sample_latent(NormalSource& normal, Eigen::Ref<Eigen::VectorXd> z) const;
  void sample(NormalSource& normal, Eigen::Ref<Eigen::VectorXd> x) const;

  Index d() const noexcept { return params_.d(); }
  Index p() const noexcept { return params_.p(); }

 private:
  GenModelParams params_;
  std::function<double(double)> activation_;
  Eigen::MatrixXd latent_root_;  // lower-triangular, L L^T = Sigma
  bool w_identity_;
  bool f_identity_;
  bool sigma_identity_;
};

// Draws from N(mean, cov) through the clipped symmetric square root of cov.
class GaussianSampler {
 public:
  // Throws ParameterError if the clipped negative spectrum exceeds 1e-6 of the trace.
  explicit GaussianSampler(MomentSummary moments);

  void sample(NormalSource& normal, Eigen::Ref<Eigen::VectorXd> x) const;
  const MomentSummary& moments() const noexcept { return moments_; }
  Index d() const noexcept { return moments_.mean.size(); }

 private:
  MomentSummary moments_;
  Eigen::MatrixXd root_;
};

// Row i of every sampler below is drawn from substream(seed, role, i), so rows
// are independent of n and of each other.
RowMatrix sample_latent(const GenModelParams& params, Index n, std::uint64_t seed);
RowMatrix generate(const GenModelParams& params, Index n, std::uint64_t seed);
RowMatrix generate_direct(const GenModelParams& params,
                          const std::function<double(double)>& activation, Index n,
                          std::uint64_t seed);
RowMatrix gaussian_equivalent(const GenModelParams& params, Index n, std::uint64_t seed);
RowMatrix gaussian_equivalent(const GaussianSampler& sampler, Index n, std::uint64_t seed);
RowMatrix standard_gaussian(Index d, Index n, std::uint64_t seed);

// N standard Gaussian rows labelled -1 and N generate() rows labelled +1,
// shuffled by a seeded Fisher-Yates pass.
Dataset build_train_dataset(const GenModelParams& params, Index n_per_class,
                            std::uint64_t seed);

// (non-Gaussian, Gaussian-equivalent) evaluation sets sharing class -1 rows
// and the row permutation; only the class +1 law differs.
std::pair<Dataset, Dataset> build_eval_pair(const GenModelParams& params, Index n_per_class,
                                            std::uint64_t seed);
std::pair<Dataset, Dataset> build_eval_pair(const GenModelParams& params,
                                            const GaussianSampler& equivalent,
                                            Index n_per_class, std::uint64_t seed);

// Seeded Fisher-Yates permutation of 0..n-1.
std::vector<Index> shuffled_indices(Index n, Xoshiro256& engine);

}  // namespace hermgen
