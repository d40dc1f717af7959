#pragma once

#include "ima/bootstrap.hpp"
#include "ima/core.hpp"
#include "ima/diagnostics.hpp"
#include "ima/estimate.hpp"
#include "ima/mc.hpp"
#include "ima/predict.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace ima {

/// Reads a `time,value` CSV. Throws Error(ParseError) naming the 1-based line,
/// or Error(InvalidTimes) naming the row whose time does not increase.
[[nodiscard]] TimeSeries read_series_csv(std::istream& in);
[[nodiscard]] TimeSeries read_series_csv(const std::string& path);

/// Writes `time,value` in the grid's own (rescaled) time units.
void write_series_csv(std::ostream& out, const TimeSeries& series);

/// Writes `time,x,xhat,mse,innovation,std_innovation`.
void write_prediction_csv(std::ostream& out, const TimeSeries& series, const PredictionOutput& prediction);

[[nodiscard]] nlohmann::json to_json(const TimeGrid& grid);
[[nodiscard]] nlohmann::json to_json(const PredictionOutput& prediction);
[[nodiscard]] nlohmann::json to_json(const FitResult& fit);
[[nodiscard]] nlohmann::json to_json(const BootstrapResult& result, bool include_replicates);
[[nodiscard]] nlohmann::json to_json(const DiagnosticsReport& report);
[[nodiscard]] nlohmann::json to_json(const McReport& report);

/// Reads the parameters back from a fit report. Throws Error(ParseError).
[[nodiscard]] FitResult fit_from_json(const nlohmann::json& j);

}  // namespace ima
