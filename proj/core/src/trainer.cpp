#include "hermgen/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hermgen/errors.hpp"
#include "hermgen/rng.hpp"

namespace hermgen {

namespace {

constexpr const char* kRoleInit = "net-init";
constexpr const char* kRoleLabel = "train-label";
constexpr const char* kRoleSample = "train-sample";
constexpr const char* kRoleEval = "eval";

}  // namespace

TwoLayerNet init_net(Index d, Index h, double init_scale, std::uint64_t seed) {
  if (d < 1 || h < 1) throw ParameterError("init_net: d and h must be >= 1");
  if (!(init_scale >= 0.0)) throw ParameterError("init_net: init_scale must be >= 0");
  TwoLayerNet net;
  net.V.resize(h, d);
  net.u = Eigen::VectorXd::Zero(h);
  net.a.resize(h);
  NormalSource normal(seed, kRoleInit);
  const double v_sd = init_scale / std::sqrt(static_cast<double>(d));
  const double a_sd = init_scale / std::sqrt(static_cast<double>(h));
  for (Index j = 0; j < h; ++j) {
    for (Index i = 0; i < d; ++i) net.V(j, i) = v_sd * normal();
  }
  for (Index j = 0; j < h; ++j) net.a[j] = a_sd * normal();
  return net;
}

double forward(const TwoLayerNet& net, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::VectorXd pre = net.V * x + net.u;
  return net.a.dot(pre.cwiseMax(0.0));
}

NetGradient grad_mse(const TwoLayerNet& net, const Eigen::Ref<const Eigen::VectorXd>& x,
                     double y) {
  const Eigen::VectorXd pre = net.V * x + net.u;
  const Eigen::VectorXd act = pre.cwiseMax(0.0);
  const double r = 2.0 * (net.a.dot(act) - y);
  NetGradient g;
  g.a = r * act;
  g.u = (pre.array() > 0.0).select(r * net.a, 0.0);
  g.V = g.u * x.transpose();
  return g;
}

double sgd_step(TwoLayerNet& net, const Eigen::Ref<const Eigen::VectorXd>& x, double y,
                double rate) {
  const Eigen::VectorXd pre = net.V * x + net.u;
  const Eigen::VectorXd act = pre.cwiseMax(0.0);
  const double err = net.a.dot(act) - y;
  const double r = 2.0 * err;
  const Eigen::VectorXd du = (pre.array() > 0.0).select(r * net.a, 0.0);
  net.a -= rate * r * act;
  net.u -= rate * du;
  net.V.noalias() -= (rate * du) * x.transpose();
  return err * err;
}

double mean_mse(const TwoLayerNet& net, const Dataset& data) {
  if (data.size() == 0) throw ParameterError("mean_mse: empty dataset");
  // Batched forward pass: (n x d) * (d x h).
  Eigen::MatrixXd pre = data.features * net.V.transpose();
  pre.rowwise() += net.u.transpose();
  const Eigen::VectorXd out = pre.cwiseMax(0.0) * net.a;
  double acc = 0.0;
  for (Index i = 0; i < data.size(); ++i) {
    const double e = out[i] - data.labels[i];
    acc += e * e;
  }
  return acc / static_cast<double>(data.size());
}

std::string_view to_string(RateScaling scaling) {
  switch (scaling) {
    case RateScaling::kNone:
      return "none";
    case RateScaling::kInverseInputDim:
      return "inverse-input-dim";
  }
  return "none";
}

RateScaling rate_scaling_from_string(std::string_view name) {
  if (name == "none") return RateScaling::kNone;
  if (name == "inverse-input-dim") return RateScaling::kInverseInputDim;
  throw ParameterError("unknown rate scaling '" + std::string(name) + "'");
}

double TrainConfig::effective_rate(Index input_dim) const {
  if (rate_scaling == RateScaling::kInverseInputDim) {
    return learning_rate / static_cast<double>(input_dim);
  }
  return learning_rate;
}

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ParameterError("learning rate must be finite and >= 0");
  }
  if (steps < 0) throw ParameterError("steps must be >= 0");
  if (checkpoints.empty()) throw ParameterError("at least one checkpoint is required");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 0) throw ParameterError("checkpoints must be >= 0");
    if (i > 0 && checkpoints[i] <= checkpoints[i - 1]) {
      throw ParameterError("checkpoints must be strictly increasing");
    }
  }
  if (checkpoints.back() > steps) throw ParameterError("last checkpoint exceeds steps");
  if (n_test < 1) throw ParameterError("n_test must be >= 1");
  if (seeds.empty()) throw ParameterError("at least one seed is required");
  if (hidden < 1) throw ParameterError("hidden width must be >= 1");
  if (!(init_scale >= 0.0)) throw ParameterError("init_scale must be >= 0");
}

std::vector<std::int64_t> log_checkpoints(std::int64_t steps, int count) {
  if (steps < 1) throw ParameterError("log_checkpoints: steps must be >= 1");
  if (count < 1) throw ParameterError("log_checkpoints: count must be >= 1");
  std::vector<std::int64_t> out;
  const double top = std::log(static_cast<double>(steps));
  for (int i = 0; i < count; ++i) {
    const double frac = count == 1 ? 1.0 : static_cast<double>(i) / (count - 1);
    auto step = static_cast<std::int64_t>(std::llround(std::exp(frac * top)));
    step = std::clamp<std::int64_t>(step, 1, steps);
    if (out.empty() || step > out.back()) out.push_back(step);
  }
  if (out.back() != steps) out.push_back(steps);
  return out;
}

TrainTrace train_online(const GenModelParams& params, const TrainConfig& cfg,
                        std::uint64_t run_seed) {
  return train_online(params, GaussianSampler(model_mean_cov(params)), cfg, run_seed);
}

TrainTrace train_online(const GenModelParams& params, const GaussianSampler& equivalent,
                        const TrainConfig& cfg, std::uint64_t run_seed) {
  cfg.validate();
  const ModelSampler model(params);
  const Index d = params.d();
  const auto [eval_model, eval_equiv] =
      build_eval_pair(params, equivalent, cfg.n_test, derive_seed(run_seed, kRoleEval));

  TrainTrace trace;
  trace.seed = run_seed;
  trace.effective_rate = cfg.effective_rate(d);
  TwoLayerNet net = init_net(d, cfg.hidden, cfg.init_scale, run_seed);

  Xoshiro256 label_engine = substream(run_seed, kRoleLabel);
  Eigen::VectorXd x(d);
  std::size_t next = 0;

  auto record = [&](std::int64_t step) {
    const double ng = mean_mse(net, eval_model);
    const double ge = mean_mse(net, eval_equiv);
    if (!std::isfinite(ng) || !std::isfinite(ge)) {
      throw TrainingAborted("non-finite evaluation loss at step " + std::to_string(step) +
                                " (learning rate too high?)",
                            step);
    }
    trace.points.push_back({step, ng, ge});
  };

  while (next < cfg.checkpoints.size() && cfg.checkpoints[next] == 0) {
    record(0);
    ++next;
  }
  for (std::int64_t t = 1; t <= cfg.steps && next < cfg.checkpoints.size(); ++t) {
    const bool positive = (label_engine() >> 63) != 0;
    NormalSource normal(run_seed, kRoleSample, static_cast<std::uint64_t>(t));
    double y;
    if (positive) {
      model.sample(normal, x);
      y = 1.0;
      ++trace.positive_draws;
    } else {
      normal.fill({x.data(), static_cast<std::size_t>(d)});
      y = -1.0;
      ++trace.negative_draws;
    }
    const double loss = sgd_step(net, x, y, trace.effective_rate);
    if (!std::isfinite(loss) || !net.all_finite()) {
      throw TrainingAborted("non-finite loss or parameter at step " + std::to_string(t) +
                                " (learning rate too high?)",
                            t);
    }
    while (next < cfg.checkpoints.size() && cfg.checkpoints[next] == t) {
      record(t);
      ++next;
    }
  }
  return trace;
}

}  // namespace hermgen
