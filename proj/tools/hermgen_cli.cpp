// hermgen: command-line front end for the Hermite-series data model, the
// cumulant solver and the online-SGD experiments.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hermgen/coeff_solver.hpp"
#include "hermgen/experiment.hpp"
#include "hermgen/genmodel.hpp"
#include "hermgen/hermite.hpp"
#include "hermgen/io.hpp"
#include "hermgen/moments.hpp"
#include "hermgen/trainer.hpp"

namespace fs = std::filesystem;
using namespace hermgen;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string out;
  bool quiet = false;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(g.out, text);
  }
}

void note(const Globals& g, const std::string& msg) {
  if (!g.quiet) std::cerr << msg << '\n';
}

HermiteSeries series_from_flags(const std::string& file, const std::vector<double>& coeffs) {
  if (!file.empty()) return load_series(file);
  if (!coeffs.empty()) return HermiteSeries(coeffs);
  throw ParameterError("give either --series FILE or --coeffs c0,c1,...");
}

struct TrainOverrides {
  std::optional<std::int64_t> steps;
  std::optional<double> lr;
  std::string rate_scaling;
  std::optional<Index> hidden;
  std::optional<Index> n_test;
  std::optional<double> init_scale;
  std::optional<int> checkpoints;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--steps", steps, "Total online SGD steps");
    cmd->add_option("--lr", lr, "Learning rate");
    cmd->add_option("--rate-scaling", rate_scaling, "none | inverse-input-dim");
    cmd->add_option("--hidden", hidden, "Hidden width");
    cmd->add_option("--n-test", n_test, "Evaluation samples per class");
    cmd->add_option("--init-scale", init_scale, "Initialization scale");
    cmd->add_option("--checkpoints", checkpoints, "Number of log-spaced checkpoints");
  }

  void apply(TrainConfig& t) const {
    if (steps) t.steps = *steps;
    if (lr) t.learning_rate = *lr;
    if (!rate_scaling.empty()) t.rate_scaling = rate_scaling_from_string(rate_scaling);
    if (hidden) t.hidden = *hidden;
    if (n_test) t.n_test = *n_test;
    if (init_scale) t.init_scale = *init_scale;
    if (steps || checkpoints) t.checkpoints = log_checkpoints(t.steps, checkpoints.value_or(25));
  }
};

struct PresetFlags {
  bool desk = false;
  std::string params_file;
  bool no_c3 = false;
  bool no_c5 = false;

  void add_to(CLI::App* cmd) {
    cmd->add_flag("--desk", desk, "Desk-scale variant (d = p = 32, hidden 128, 2e4 steps)");
    cmd->add_option("--params-file", params_file, "Parameter file for fig2-template");
    cmd->add_flag("--no-c3", no_c3, "fig2-template: zero c3");
    cmd->add_flag("--no-c5", no_c5, "fig2-template: zero c5");
  }

  PresetOptions options() const {
    PresetOptions o;
    o.desk = desk;
    if (!params_file.empty()) o.params_file = params_file;
    o.keep_c3 = !no_c3;
    o.keep_c5 = !no_c5;
    return o;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hermite-series non-Gaussian data model and online-SGD experiments", "hermgen"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Root seed for all randomness")
      ->each([&](const std::string&) { g.seed_given = true; });
  app.add_option("-o,--out", g.out, "Output file (or directory for experiment)");
  app.add_flag("-q,--quiet", g.quiet, "Suppress progress messages");

  // expand
  auto* expand = app.add_subcommand("expand", "Hermite coefficients of a named activation");
  std::string activation = "tanh";
  int degree = 5;
  int quad_order = kDefaultQuadOrder;
  expand->add_option("--activation", activation, "identity|tanh|relu|sigmoid|erf|sin")
      ->capture_default_str();
  expand->add_option("--degree", degree, "Truncation degree")->capture_default_str();
  expand->add_option("--quad-order", quad_order, "Gauss-Hermite nodes")->capture_default_str();

  // solve
  auto* solve = app.add_subcommand("solve", "Hermite coefficients matching target cumulants");
  std::vector<double> targets;
  int solve_degree = 0;
  double tol = 1e-8;
  int max_restarts = 20;
  solve->add_option("--targets", targets, "kappa_1,...,kappa_{l+1}")
      ->required()
      ->delimiter(',');
  solve->add_option("--degree", solve_degree, "Series degree l")->required();
  solve->add_option("--tol", tol, "Max absolute cumulant error")->capture_default_str();
  solve->add_option("--max-restarts", max_restarts)->capture_default_str();

  // cumulants
  auto* cumulants = app.add_subcommand("cumulants", "Exact or sample cumulants");
  std::string series_file;
  std::vector<double> coeffs;
  std::string data_file;
  std::string column = "x0";
  int order = 4;
  cumulants->add_option("--series", series_file, "Series JSON file");
  cumulants->add_option("--coeffs", coeffs, "c0,c1,...")->delimiter(',');
  cumulants->add_option("--data", data_file, "CSV file: report k-statistics of one column");
  cumulants->add_option("--column", column, "CSV column for --data")->capture_default_str();
  cumulants->add_option("--order", order, "Number of cumulants")->capture_default_str();

  // generate
  auto* generate_cmd = app.add_subcommand("generate", "Sample from the model as CSV");
  std::string params_file;
  Index n = 1000;
  std::string kind = "model";
  generate_cmd->add_option("--params", params_file, "Model parameter file")->required();
  generate_cmd->add_option("-n,--n", n, "Rows (per class for train/eval)")->capture_default_str();
  generate_cmd
      ->add_option("--kind", kind,
                   "model | gauss-equiv | latent | train | eval (eval writes two files into --out)")
      ->capture_default_str();

  // mean-cov
  auto* mean_cov = app.add_subcommand("mean-cov", "Exact mean and covariance of the model");
  std::string mc_params;
  mean_cov->add_option("--params", mc_params, "Model parameter file")->required();

  // train
  auto* train = app.add_subcommand("train", "One online-SGD run; writes the loss trace CSV");
  std::string train_params;
  std::string train_preset;
  TrainOverrides train_over;
  PresetFlags train_preset_flags;
  train->add_option("--params", train_params, "Model parameter file");
  train->add_option("--preset", train_preset, "Start from a preset's model and schedule");
  train_over.add_to(train);
  train_preset_flags.add_to(train);

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Multi-seed experiment into --out DIR");
  std::string exp_preset;
  std::string exp_config;
  TrainOverrides exp_over;
  PresetFlags exp_preset_flags;
  bool no_plot = false;
  experiment->add_option("--preset", exp_preset, "fig1a|fig1b|fig1c|fig1d|fig2-template");
  experiment->add_option("--config", exp_config, "Config JSON (e.g. a previous config.json)");
  experiment->add_flag("--no-plot", no_plot, "Skip plot.svg");
  exp_over.add_to(experiment);
  exp_preset_flags.add_to(experiment);

  // preset
  auto* preset_cmd = app.add_subcommand("preset", "Print a preset experiment config as JSON");
  std::string preset_name;
  PresetFlags preset_flags;
  preset_cmd->add_option("name", preset_name, "fig1a|fig1b|fig1c|fig1d|fig2-template")->required();
  preset_flags.add_to(preset_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*expand) {
      const HermiteSeries s = expand_activation(named_activation(activation), degree, quad_order);
      emit(g, series_to_json(s) + "\n");
    } else if (*solve) {
      SolveOptions opt;
      opt.tol = tol;
      opt.max_restarts = max_restarts;
      opt.seed = g.seed;
      try {
        const SolveReport r = solve_coefficients(CumulantVector{targets}, solve_degree, opt);
        note(g, "residual " + format_double(r.residual_norm) + " after " +
                    std::to_string(r.iterations) + " iterations, " +
                    std::to_string(r.restarts_used) + " restarts");
        emit(g, series_to_json(r.series) + "\n");
      } catch (const SolveError& e) {
        std::cerr << "hermgen: " << e.what() << "\nbest residual "
                  << format_double(e.best().residual_norm) << " with coeffs "
                  << series_to_json(e.best().series) << '\n';
        return 1;
      }
    } else if (*cumulants) {
      CumulantVector c;
      if (!data_file.empty()) {
        std::ifstream in(data_file);
        if (!in) throw ParameterError("cannot open '" + data_file + "'");
        c = sample_cumulants(read_csv_column(in, column), order);
      } else {
        c = series_cumulants(series_from_flags(series_file, coeffs), order);
      }
      emit(g, cumulants_to_json(c) + "\n");
    } else if (*generate_cmd) {
      const GenModelParams params = load_params(params_file);
      std::ostringstream os;
      if (kind == "model") {
        write_matrix_csv(os, generate(params, n, g.seed));
      } else if (kind == "gauss-equiv") {
        write_matrix_csv(os, gaussian_equivalent(params, n, g.seed));
      } else if (kind == "latent") {
        write_matrix_csv(os, sample_latent(params, n, g.seed));
      } else if (kind == "train") {
        write_dataset_csv(os, build_train_dataset(params, n, g.seed));
      } else if (kind == "eval") {
        if (g.out.empty()) throw ParameterError("--kind eval needs --out DIR");
        const auto [model_set, equiv_set] = build_eval_pair(params, n, g.seed);
        fs::create_directories(g.out);
        std::ostringstream a, b;
        write_dataset_csv(a, model_set);
        write_dataset_csv(b, equiv_set);
        write_text_file(fs::path(g.out) / "eval_non_gaussian.csv", a.str());
        write_text_file(fs::path(g.out) / "eval_gauss_equiv.csv", b.str());
        return 0;
      } else {
        throw ParameterError("unknown --kind '" + kind + "'");
      }
      emit(g, os.str());
    } else if (*mean_cov) {
      emit(g, moments_to_json(model_mean_cov(load_params(mc_params))) + "\n");
    } else if (*train) {
      ExperimentConfig cfg;
      if (!train_preset.empty()) {
        cfg = preset(train_preset, train_preset_flags.options());
      } else if (!train_params.empty()) {
        cfg.model = load_params(train_params);
        cfg.train.checkpoints = log_checkpoints(cfg.train.steps);
      } else {
        throw ParameterError("train needs --params FILE or --preset NAME");
      }
      if (!train_params.empty()) {
        HermiteSeries keep = cfg.model.series;
        cfg.model = load_params(train_params);
        if (!train_preset.empty() && train_preset == "fig2-template") cfg.model.series = keep;
      }
      train_over.apply(cfg.train);
      note(g, "training: effective rate " +
                  format_double(cfg.train.effective_rate(cfg.model.d())) + ", seed " +
                  std::to_string(g.seed));
      const TrainTrace trace = train_online(cfg.model, cfg.train, g.seed);
      std::ostringstream os;
      write_trace_csv(os, std::span<const TrainTrace>(&trace, 1));
      emit(g, os.str());
    } else if (*experiment) {
      ExperimentConfig cfg;
      if (!exp_config.empty()) {
        cfg = config_from_json(read_text_file(exp_config));
      } else if (!exp_preset.empty()) {
        cfg = preset(exp_preset, exp_preset_flags.options());
      } else {
        throw ParameterError("experiment needs --preset NAME or --config FILE");
      }
      exp_over.apply(cfg.train);
      if (g.seed_given) {
        for (std::size_t i = 0; i < cfg.train.seeds.size(); ++i) cfg.train.seeds[i] = g.seed + i;
      }
      if (g.out.empty()) throw ParameterError("experiment needs --out DIR");
      cfg.output_dir = g.out;
      cfg.write_plot = !no_plot;
      note(g, "experiment " + cfg.name + " [" + cfg.variant + "]: " +
                  std::to_string(cfg.train.seeds.size()) + " seeds x " +
                  std::to_string(cfg.train.steps) + " steps, effective rate " +
                  format_double(cfg.train.effective_rate(cfg.model.d())));
      const ExperimentResult r = run_experiment(cfg);
      const SummaryPoint& last = r.summary.back();
      note(g, "final step " + std::to_string(last.step) + ": non-Gaussian " +
                  format_double(last.non_gaussian_mean) + ", Gaussian-equivalent " +
                  format_double(last.gauss_equiv_mean) + " (" +
                  format_double(r.wall_seconds) + " s)");
    } else if (*preset_cmd) {
      emit(g, config_to_json(preset(preset_name, preset_flags.options())) + "\n");
    }
  } catch (const std::exception& e) {
    std::cerr << "hermgen: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
