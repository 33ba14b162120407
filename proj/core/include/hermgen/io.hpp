#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hermgen/genmodel.hpp"
#include "hermgen/hermite.hpp"
#include "hermgen/moments.hpp"
#include "hermgen/params.hpp"
#include "hermgen/trainer.hpp"

namespace hermgen {

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

// {"degree": l, "coeffs": [c0, ..., cl]}
std::string series_to_json(const HermiteSeries& s);
HermiteSeries series_from_json(std::string_view text);
HermiteSeries load_series(const std::filesystem::path& path);
void save_series(const std::filesystem::path& path, const HermiteSeries& s);

// {"order": m, "values": [...]}
std::string cumulants_to_json(const CumulantVector& c);

// {"mean": [...], "cov": [[...], ...]}
std::string moments_to_json(const MomentSummary& m);

// {"d", "k", "p", "W", "F", "b", "mu", "Sigma", "series"}. W, F and Sigma
// accept the string "identity"; b and mu default to zero when absent.
std::string params_to_json(const GenModelParams& p);
GenModelParams params_from_json(std::string_view text);
GenModelParams load_params(const std::filesystem::path& path);
void save_params(const std::filesystem::path& path, const GenModelParams& p);

// Header x0,...,x{d-1}.
void write_matrix_csv(std::ostream& os, const RowMatrix& m);
// Header x0,...,x{d-1},label.
void write_dataset_csv(std::ostream& os, const Dataset& ds);
// Header step,loss_non_gaussian,loss_gauss_equiv,seed; one block per trace.
void write_trace_csv(std::ostream& os, std::span<const TrainTrace> traces);

// Reads one numeric column of a headed CSV file.
std::vector<double> read_csv_column(std::istream& is, std::string_view column);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace hermgen
