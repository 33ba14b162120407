#pragma once

// Private nlohmann::json codecs shared by io.cpp and experiment.cpp.

#include <json.hpp>

#include "hermgen/hermite.hpp"
#include "hermgen/moments.hpp"
#include "hermgen/params.hpp"
#include "hermgen/trainer.hpp"

namespace hermgen::detail {

using json = nlohmann::json;

json encode(const HermiteSeries& s);
HermiteSeries decode_series(const json& j);

json encode(const CumulantVector& c);
json encode(const MomentSummary& m);

json encode(const GenModelParams& p);
GenModelParams decode_params(const json& j);

json encode(const TrainConfig& cfg);
TrainConfig decode_train_config(const json& j);

json parse_text(std::string_view text, std::string_view what);

}  // namespace hermgen::detail
