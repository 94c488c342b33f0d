#pragma once

#include <string>

#include <json.hpp>

#include "meandev/distortion.hpp"
#include "meandev/distributions.hpp"
#include "meandev/portfolio.hpp"
#include "meandev/riskweight.hpp"

namespace meandev::json_io {

using Json = nlohmann::ordered_json;

/// Parses text into JSON; malformed text raises ParseError naming `what`.
Json parse_text(const std::string& text, const std::string& what);

ParametricModel parse_model(const Json& j);
DistortionFunction parse_distortion(const Json& j);
RiskWeightFunction parse_risk_weight(const Json& j);
BacktestConfig parse_backtest_config(const Json& j);

Json to_json(const ParametricModel& model);
Json to_json(const DistortionFunction& h);
Json to_json(const RiskWeightFunction& g);
Json to_json(const GClassification& c);

/// Rounds to 12 significant digits; non-finite values become "inf", "-inf" or "nan".
Json number(double x);

/// Recursively rounds every floating-point leaf as `number` does.
Json normalize(const Json& j);

/// Deterministic dump: normalized values, insertion key order, two-space indent.
std::string dump(const Json& j);

/// 12-significant-digit text for CSV cells.
std::string format_number(double x);

}  // namespace meandev::json_io
