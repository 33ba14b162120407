#pragma once

#include <filesystem>
#include <string>

#include "hermgen/experiment.hpp"

namespace hermgen {

// Loss curves on a log-x axis: the two mean traces as polylines with shaded
// +-1 std bands and a legend. A single checkpoint renders as two markers.
std::string render_loss_plot(const ExperimentResult& result);

void emit_plot(const ExperimentResult& result, const std::filesystem::path& path);

}  // namespace hermgen
