#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hermgen/errors.hpp"
#include "hermgen/params.hpp"
#include "hermgen/trainer.hpp"

namespace hermgen {

struct ExperimentConfig {
  std::string name;
  std::string variant;  // e.g. "c2=0.2,c3=0"
  GenModelParams model;
  TrainConfig train;
  std::filesystem::path output_dir;  // empty: nothing written
  bool write_plot = true;

  void validate() const;
};

struct SummaryPoint {
  std::int64_t step;
  double non_gaussian_mean;
  double non_gaussian_std;
  double gauss_equiv_mean;
  double gauss_equiv_std;
};

struct ExperimentResult {
  std::string name;
  std::string variant;
  std::vector<SummaryPoint> summary;
  std::vector<TrainTrace> traces;
  std::string config_hash;
  double effective_rate = 0.0;
  double wall_seconds = 0.0;
};

// Raised when a seed's run aborts. Completed traces and an error manifest are
// left in the output directory.
class ExperimentError : public Error {
 public:
  using Error::Error;
};

// Pointwise mean and population standard deviation across seeds. All traces
// must share the same checkpoint steps.
std::vector<SummaryPoint> aggregate_traces(std::span<const TrainTrace> traces);

// Runs train_online once per seed (in parallel), aggregates, and when
// output_dir is set writes config.json, trace.csv, summary.csv,
// metadata.json and plot.svg into it.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

void write_summary_csv(std::ostream& os, std::span<const SummaryPoint> summary);

// Canonical JSON echo of a config; run_experiment(config_from_json(echo))
// reproduces summary.csv exactly.
std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(std::string_view text);

// 64-bit FNV-1a of config_to_json, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

struct PresetOptions {
  // d = p = 32, hidden 128, 2e4 steps (fig1*); hidden 128, 2e4 steps (fig2).
  bool desk = false;
  // Required for fig2-template: supplies W, F, b (the series is replaced).
  std::optional<std::filesystem::path> params_file{};
  bool keep_c3 = true;
  bool keep_c5 = true;
};

// "fig1a".."fig1d" (W = F = I, l = 3, c0 = 0.4, c1 = 0.5, p = 128, h = 512,
// eta = 0.1, 5 seeds) and "fig2-template" (tanh expanded to l = 5 with
// switches for c3 and c5, eta = 3e-4, 1e6 steps).
ExperimentConfig preset(std::string_view name, const PresetOptions& options = {});
std::vector<std::string> preset_names();

// W = I (d x d), F with i.i.d. N(0, 1/p) entries, b = 0, Sigma = I_p, and
// the given series. Stand-in for pretrained parameters in the fig2 path.
GenModelParams random_projection_params(Index d, Index p, HermiteSeries series,
                                        std::uint64_t seed);

}  // namespace hermgen
