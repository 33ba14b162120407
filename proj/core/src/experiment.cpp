#include "hermgen/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "hermgen/genmodel.hpp"
#include "hermgen/io.hpp"
#include "hermgen/svg_plot.hpp"
#include "json_codec.hpp"

namespace hermgen {

namespace {

using detail::json;

json encode_config(const ExperimentConfig& cfg) {
  return json{{"name", cfg.name},
              {"variant", cfg.variant},
              {"model", detail::encode(cfg.model)},
              {"train", detail::encode(cfg.train)}};
}

struct SeedOutcome {
  std::optional<TrainTrace> trace;
  std::exception_ptr error;
};

std::vector<SeedOutcome> run_seeds(const ExperimentConfig& cfg, const GaussianSampler& equiv) {
  const auto& seeds = cfg.train.seeds;
  std::vector<SeedOutcome> outcomes(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        outcomes[i].trace = train_online(cfg.model, equiv, cfg.train, seeds[i]);
      } catch (...) {
        outcomes[i].error = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(seeds.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  return outcomes;
}

std::string csv(const auto& writer) {
  std::ostringstream os;
  writer(os);
  return os.str();
}

}  // namespace

void ExperimentConfig::validate() const {
  model.validate();
  train.validate();
}

std::vector<SummaryPoint> aggregate_traces(std::span<const TrainTrace> traces) {
  if (traces.empty()) throw ParameterError("aggregate_traces: no traces");
  const std::size_t n_points = traces.front().points.size();
  for (const auto& t : traces) {
    if (t.points.size() != n_points) throw ParameterError("aggregate_traces: trace lengths differ");
  }
  const double n = static_cast<double>(traces.size());
  std::vector<SummaryPoint> out;
  out.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    SummaryPoint sp{};
    sp.step = traces.front().points[i].step;
    double ng = 0.0, ge = 0.0;
    for (const auto& t : traces) {
      if (t.points[i].step != sp.step) {
        throw ParameterError("aggregate_traces: checkpoint steps differ between traces");
      }
      ng += t.points[i].loss_non_gaussian;
      ge += t.points[i].loss_gauss_equiv;
    }
    sp.non_gaussian_mean = ng / n;
    sp.gauss_equiv_mean = ge / n;
    double ng_var = 0.0, ge_var = 0.0;
    for (const auto& t : traces) {
      ng_var += std::pow(t.points[i].loss_non_gaussian - sp.non_gaussian_mean, 2);
      ge_var += std::pow(t.points[i].loss_gauss_equiv - sp.gauss_equiv_mean, 2);
    }
    sp.non_gaussian_std = std::sqrt(ng_var / n);
    sp.gauss_equiv_std = std::sqrt(ge_var / n);
    out.push_back(sp);
  }
  return out;
}

void write_summary_csv(std::ostream& os, std::span<const SummaryPoint> summary) {
  os << "step,nonGauss_mean,nonGauss_std,gaussEq_mean,gaussEq_std\n";
  for (const auto& p : summary) {
    os << p.step << ',' << format_double(p.non_gaussian_mean) << ','
       << format_double(p.non_gaussian_std) << ',' << format_double(p.gauss_equiv_mean) << ','
       << format_double(p.gauss_equiv_std) << '\n';
  }
}

std::string config_to_json(const ExperimentConfig& cfg) { return encode_config(cfg).dump(2); }

ExperimentConfig config_from_json(std::string_view text) {
  const json j = detail::parse_text(text, "experiment config");
  try {
    ExperimentConfig cfg;
    cfg.name = j.value("name", std::string{});
    cfg.variant = j.value("variant", std::string{});
    const json& model = j.at("model");
    if (model.is_string()) {
      cfg.model = load_params(model.get<std::string>());
    } else {
      cfg.model = detail::decode_params(model);
    }
    cfg.train = detail::decode_train_config(j.at("train"));
    return cfg;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("experiment config: ") + e.what());
  }
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = encode_config(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto& out = cfg.output_dir;
  if (!out.empty()) {
    std::filesystem::create_directories(out);
    write_text_file(out / "config.json", config_to_json(cfg) + "\n");
  }

  const GaussianSampler equivalent(model_mean_cov(cfg.model));
  std::vector<SeedOutcome> outcomes = run_seeds(cfg, equivalent);

  ExperimentResult result;
  result.name = cfg.name;
  result.variant = cfg.variant;
  result.config_hash = config_hash(cfg);
  result.effective_rate = cfg.train.effective_rate(cfg.model.d());

  json failures = json::array();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].trace) {
      result.traces.push_back(std::move(*outcomes[i].trace));
      continue;
    }
    json entry{{"seed", cfg.train.seeds[i]}};
    try {
      std::rethrow_exception(outcomes[i].error);
    } catch (const TrainingAborted& e) {
      entry["step"] = e.step();
      entry["message"] = e.what();
    } catch (const std::exception& e) {
      entry["message"] = e.what();
    }
    failures.push_back(std::move(entry));
  }

  if (!out.empty()) {
    write_text_file(out / "trace.csv",
                    csv([&](std::ostream& os) { write_trace_csv(os, result.traces); }));
  }
  if (!failures.empty()) {
    if (!out.empty()) {
      write_text_file(out / "error.json",
                      json{{"config_hash", result.config_hash}, {"failures", failures}}.dump(2) +
                          "\n");
    }
    throw ExperimentError("experiment '" + cfg.name + "' aborted: " +
                          failures.front().at("message").get<std::string>());
  }

  result.summary = aggregate_traces(result.traces);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.empty()) {
    write_text_file(out / "summary.csv",
                    csv([&](std::ostream& os) { write_summary_csv(os, result.summary); }));
    const json meta{{"name", cfg.name},
                    {"variant", cfg.variant},
                    {"config_hash", result.config_hash},
                    {"learning_rate", cfg.train.learning_rate},
                    {"rate_scaling", std::string(to_string(cfg.train.rate_scaling))},
                    {"effective_rate", result.effective_rate},
                    {"seeds", cfg.train.seeds},
                    {"wall_seconds", result.wall_seconds}};
    write_text_file(out / "metadata.json", meta.dump(2) + "\n");
    if (cfg.write_plot) emit_plot(result, out / "plot.svg");
  }
  return result;
}

namespace {

constexpr double kFig1C0 = 0.4;
constexpr double kFig1C1 = 0.5;
constexpr double kFig1HighCoeff = 0.2;

TrainConfig base_train(bool desk, std::int64_t full_steps, double rate, RateScaling scaling) {
  TrainConfig t;
  t.learning_rate = rate;
  t.rate_scaling = scaling;
  t.steps = desk ? 20000 : full_steps;
  t.checkpoints = log_checkpoints(t.steps);
  t.n_test = 2000;
  t.seeds = {1, 2, 3, 4, 5};
  t.hidden = desk ? 128 : 512;
  t.init_scale = 0.125;
  return t;
}

std::string coeff_label(const char* name, double v) {
  return std::string(name) + "=" + format_double(v);
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig1a", "fig1b", "fig1c", "fig1d", "fig2-template"};
}

ExperimentConfig preset(std::string_view name, const PresetOptions& options) {
  ExperimentConfig cfg;
  cfg.name = std::string(name);
  if (name == "fig1a" || name == "fig1b" || name == "fig1c" || name == "fig1d") {
    const bool c2_on = name == "fig1b" || name == "fig1d";
    const bool c3_on = name == "fig1c" || name == "fig1d";
    const double c2 = c2_on ? kFig1HighCoeff : 0.0;
    const double c3 = c3_on ? kFig1HighCoeff : 0.0;
    const Index dim = options.desk ? 32 : 128;
    cfg.model = GenModelParams::identity(dim, HermiteSeries{kFig1C0, kFig1C1, c2, c3});
    cfg.train = base_train(options.desk, 100000, 0.1, RateScaling::kInverseInputDim);
    cfg.variant = coeff_label("c2", c2) + "," + coeff_label("c3", c3);
    return cfg;
  }
  if (name == "fig2-template") {
    if (!options.params_file) {
      throw ParameterError("preset fig2-template needs a parameter file supplying W, F and b");
    }
    cfg.model = load_params(*options.params_file);
    const HermiteSeries tanh_series = expand_activation(named_activation("tanh"), 5, kDefaultQuadOrder);
    std::vector<double> c(tanh_series.coeffs().begin(), tanh_series.coeffs().end());
    if (!options.keep_c3) c[3] = 0.0;
    if (!options.keep_c5) c[5] = 0.0;
    cfg.model.series = HermiteSeries(std::move(c));
    cfg.train = base_train(options.desk, 1000000, 3e-4, RateScaling::kNone);
    cfg.variant = std::string(options.keep_c3 ? "c3=tanh" : "c3=0") + "," +
                  (options.keep_c5 ? "c5=tanh" : "c5=0");
    return cfg;
  }
  throw ParameterError("unknown preset '" + std::string(name) + "'");
}

GenModelParams random_projection_params(Index d, Index p, HermiteSeries series,
                                        std::uint64_t seed) {
  if (d < 1 || p < 1) throw ParameterError("random_projection_params: d and p must be >= 1");
  GenModelParams out;
  out.W = Eigen::MatrixXd::Identity(d, d);
  out.F.resize(d, p);
  NormalSource normal(seed, "random-projection");
  const double sd = 1.0 / std::sqrt(static_cast<double>(p));
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < p; ++j) out.F(i, j) = sd * normal();
  }
  out.b = Eigen::VectorXd::Zero(d);
  out.mu = Eigen::VectorXd::Zero(p);
  out.Sigma = Eigen::MatrixXd::Identity(p, p);
  out.series = std::move(series);
  return out;
}

}  // namespace hermgen
