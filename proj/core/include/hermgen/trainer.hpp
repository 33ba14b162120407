#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hermgen/genmodel.hpp"
#include "hermgen/params.hpp"

namespace hermgen {

// f(x) = sum_j a_j relu(V_j . x + u_j)
struct TwoLayerNet {
  RowMatrix V;        // h x d
  Eigen::VectorXd u;  // h
  Eigen::VectorXd a;  // h

  Index hidden() const noexcept { return V.rows(); }
  Index input_dim() const noexcept { return V.cols(); }
  Index parameter_count() const noexcept { return V.size() + u.size() + a.size(); }
  bool all_finite() const { return V.allFinite() && u.allFinite() && a.allFinite(); }
};

// Same layout as TwoLayerNet.
using NetGradient = TwoLayerNet;

// V ~ N(0, init_scale^2 / d), a ~ N(0, init_scale^2 / h), u = 0.
TwoLayerNet init_net(Index d, Index h, double init_scale, std::uint64_t seed);

double forward(const TwoLayerNet& net, const Eigen::Ref<const Eigen::VectorXd>& x);

// Gradient of (f(x) - y)^2; the ReLU derivative at 0 is taken as 0.
NetGradient grad_mse(const TwoLayerNet& net, const Eigen::Ref<const Eigen::VectorXd>& x,
                     double y);

// One in-place SGD update on a single sample; returns the pre-update loss.
double sgd_step(TwoLayerNet& net, const Eigen::Ref<const Eigen::VectorXd>& x, double y,
                double rate);

// Mean of (f(x) - y)^2 over a dataset.
double mean_mse(const TwoLayerNet& net, const Dataset& data);

// How TrainConfig::learning_rate maps to the per-step SGD rate.
enum class RateScaling {
  kNone,             // rate = learning_rate
  kInverseInputDim,  // rate = learning_rate / d
};

std::string_view to_string(RateScaling scaling);
RateScaling rate_scaling_from_string(std::string_view name);

struct TrainConfig {
  double learning_rate = 0.1;
  RateScaling rate_scaling = RateScaling::kNone;
  std::int64_t steps = 100000;
  std::vector<std::int64_t> checkpoints;  // strictly increasing, last <= steps
  Index n_test = 2000;                    // per class
  std::vector<std::uint64_t> seeds{1};
  Index hidden = 512;
  double init_scale = 1.0;

  double effective_rate(Index input_dim) const;
  // Throws ParameterError.
  void validate() const;
};

// count log-spaced integer steps from 1 to steps, duplicates removed.
std::vector<std::int64_t> log_checkpoints(std::int64_t steps, int count = 25);

struct TracePoint {
  std::int64_t step;
  double loss_non_gaussian;
  double loss_gauss_equiv;
};

struct TrainTrace {
  std::uint64_t seed = 0;
  double effective_rate = 0.0;
  std::int64_t positive_draws = 0;
  std::int64_t negative_draws = 0;
  std::vector<TracePoint> points;
};

// Online SGD on fresh samples: each step draws y = +-1 with probability 1/2,
// x ~ N(0, I_d) for y = -1 or x from the generative model for y = +1, and
// applies one update. At each checkpoint the mean squared error is measured
// on the fixed evaluation pair from build_eval_pair. Throws TrainingAborted
// on a non-finite loss or parameter.
TrainTrace train_online(const GenModelParams& params, const TrainConfig& cfg,
                        std::uint64_t run_seed);
TrainTrace train_online(const GenModelParams& params, const GaussianSampler& equivalent,
                        const TrainConfig& cfg, std::uint64_t run_seed);

}  // namespace hermgen
