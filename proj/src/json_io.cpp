#include "meandev/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <initializer_list>
#include <set>

#include "meandev/errors.hpp"

namespace meandev::json_io {
namespace {

void require_object(const Json& j, const std::string& what) {
  if (!j.is_object()) throw ParseError(what + " must be a JSON object");
}

std::string kind_of(const Json& j, const std::string& what) {
  require_object(j, what);
  auto it = j.find("kind");
  if (it == j.end() || !it->is_string()) throw ParseError(what + " needs a string field \"kind\"");
  return it->get<std::string>();
}

void only_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.contains(key)) throw ParseError(what + ": unknown field \"" + key + "\"");
  }
}

double get_number(const Json& j, const char* key, const std::string& what) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(what + ": missing field \"" + key + "\"");
  if (!it->is_number()) throw ParseError(what + ": field \"" + key + "\" must be a number");
  return it->get<double>();
}

double get_number_or(const Json& j, const char* key, double fallback, const std::string& what) {
  return j.contains(key) ? get_number(j, key, what) : fallback;
}

std::vector<double> get_array(const Json& j, const char* key, const std::string& what) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(what + ": missing field \"" + key + "\"");
  if (!it->is_array()) throw ParseError(what + ": field \"" + key + "\" must be an array");
  std::vector<double> out;
  for (const auto& v : *it) {
    if (!v.is_number()) throw ParseError(what + ": field \"" + key + "\" must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::size_t get_count(const Json& j, const char* key, std::size_t fallback, const std::string& what) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer() || it->get<long long>() < 0) {
    throw ParseError(what + ": field \"" + key + "\" must be a nonnegative integer");
  }
  return it->get<std::size_t>();
}

Json array_of(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

}  // namespace

Json parse_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(what + ": invalid JSON (" + e.what() + ")");
  }
}

ParametricModel parse_model(const Json& j) {
  const std::string what = "model";
  const std::string kind = kind_of(j, what);
  if (kind == "normal") {
    only_keys(j, {"kind", "mu", "sd"}, what);
    return ParametricModel::normal(get_number_or(j, "mu", 0.0, what), get_number_or(j, "sd", 1.0, what));
  }
  if (kind == "lomax") {
    only_keys(j, {"kind", "theta"}, what);
    return ParametricModel::lomax(get_number(j, "theta", what));
  }
  if (kind == "exponential") {
    only_keys(j, {"kind", "beta"}, what);
    return ParametricModel::exponential(get_number(j, "beta", what));
  }
  throw ParseError("unknown model kind \"" + kind + "\"");
}

DistortionFunction parse_distortion(const Json& j) {
  const std::string what = "distortion";
  const std::string kind = kind_of(j, what);
  if (kind == "es_dev") {
    only_keys(j, {"kind", "alpha"}, what);
    return DistortionFunction::es_dev(get_number(j, "alpha", what));
  }
  if (kind == "gini") {
    only_keys(j, {"kind"}, what);
    return DistortionFunction::gini();
  }
  if (kind == "mad_half") {
    only_keys(j, {"kind"}, what);
    return DistortionFunction::mad_half();
  }
  if (kind == "range") {
    only_keys(j, {"kind"}, what);
    return DistortionFunction::range();
  }
  if (kind == "piecewise_linear") {
    only_keys(j, {"kind", "t", "h"}, what);
    return DistortionFunction::piecewise_linear(get_array(j, "t", what), get_array(j, "h", what));
  }
  throw ParseError("unknown distortion kind \"" + kind + "\"");
}

RiskWeightFunction parse_risk_weight(const Json& j) {
  const std::string what = "risk-weighting function";
  const std::string kind = kind_of(j, what);
  if (kind == "linear") {
    only_keys(j, {"kind", "lambda"}, what);
    return RiskWeightFunction::linear(get_number(j, "lambda", what));
  }
  if (kind == "exp_shortfall" || kind == "gbeta") {
    only_keys(j, {"kind", "beta"}, what);
    return RiskWeightFunction::exp_shortfall(get_number(j, "beta", what));
  }
  if (kind == "exp_cap") {
    only_keys(j, {"kind", "beta"}, what);
    return RiskWeightFunction::exp_cap(get_number(j, "beta", what));
  }
  if (kind == "pareto_shortfall") {
    only_keys(j, {"kind", "theta"}, what);
    return RiskWeightFunction::pareto_shortfall(get_number(j, "theta", what));
  }
  if (kind == "pareto_cap") {
    only_keys(j, {"kind", "theta"}, what);
    return RiskWeightFunction::pareto_cap(get_number(j, "theta", what));
  }
  if (kind == "piecewise_linear") {
    only_keys(j, {"kind", "knots", "slopes"}, what);
    return RiskWeightFunction::piecewise_linear(get_array(j, "knots", what), get_array(j, "slopes", what));
  }
  throw ParseError("unknown risk-weighting kind \"" + kind + "\"");
}

BacktestConfig parse_backtest_config(const Json& j) {
  const std::string what = "backtest config";
  require_object(j, what);
  only_keys(j,
            {"window", "rebalance", "alpha", "g", "risk_free_rate", "initial_wealth", "strategy", "target_return",
             "iterations"},
            what);
  BacktestConfig cfg;
  cfg.window = get_count(j, "window", cfg.window, what);
  if (j.contains("rebalance")) {
    if (!j["rebalance"].is_string()) throw ParseError(what + ": field \"rebalance\" must be a string");
    cfg.rebalance = j["rebalance"].get<std::string>();
    if (cfg.rebalance != "monthly") throw ParseError(what + ": unsupported rebalance rule \"" + cfg.rebalance + "\"");
  }
  cfg.alpha = get_number_or(j, "alpha", cfg.alpha, what);
  if (j.contains("g")) cfg.g = parse_risk_weight(j["g"]);
  cfg.risk_free_rate = get_number_or(j, "risk_free_rate", cfg.risk_free_rate, what);
  cfg.initial_wealth = get_number_or(j, "initial_wealth", cfg.initial_wealth, what);
  if (j.contains("strategy")) {
    const auto& s = j["strategy"];
    if (s == "md") {
      cfg.strategy = Strategy::MeanDeviation;
    } else if (s == "markowitz") {
      cfg.strategy = Strategy::Markowitz;
    } else {
      throw ParseError(what + ": field \"strategy\" must be \"md\" or \"markowitz\"");
    }
  }
  cfg.target_return = get_number_or(j, "target_return", cfg.target_return, what);
  cfg.iterations = get_count(j, "iterations", cfg.iterations, what);
  if (cfg.window < 2) throw ParseError(what + ": window must be >= 2");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ParseError(what + ": alpha must lie in (0,1)");
  return cfg;
}

Json to_json(const ParametricModel& model) {
  Json j;
  j["kind"] = model.name();
  switch (model.kind()) {
    case ParametricModel::Kind::Normal:
      j["mu"] = number(model.param1());
      j["sd"] = number(model.param2());
      break;
    case ParametricModel::Kind::Lomax:
      j["theta"] = number(model.param1());
      break;
    case ParametricModel::Kind::Exponential:
      j["beta"] = number(model.param1());
      break;
  }
  return j;
}

Json to_json(const DistortionFunction& h) {
  Json j;
  j["kind"] = h.name();
  if (h.kind() == DistortionFunction::Kind::EsDev) j["alpha"] = number(h.alpha());
  if (h.kind() == DistortionFunction::Kind::PiecewiseLinear) {
    j["t"] = array_of(h.knots_t());
    j["h"] = array_of(h.knots_h());
  }
  return j;
}

Json to_json(const RiskWeightFunction& g) {
  Json j;
  j["kind"] = g.name();
  switch (g.kind()) {
    case RiskWeightFunction::Kind::Linear:
      j["lambda"] = number(g.param());
      break;
    case RiskWeightFunction::Kind::ExpShortfall:
    case RiskWeightFunction::Kind::ExpCap:
      j["beta"] = number(g.param());
      break;
    case RiskWeightFunction::Kind::ParetoShortfall:
    case RiskWeightFunction::Kind::ParetoCap:
      j["theta"] = number(g.param());
      break;
    case RiskWeightFunction::Kind::PiecewiseLinear:
      j["knots"] = array_of(g.knots());
      j["slopes"] = array_of(g.slopes());
      break;
  }
  return j;
}

Json to_json(const GClassification& c) {
  Json j;
  j["is_linear"] = c.is_linear;
  j["is_convex"] = c.is_convex;
  j["is_star_shaped"] = c.is_star_shaped;
  j["is_concave"] = c.is_concave;
  j["asymptotic_slope"] = number(c.asymptotic_slope);
  j["sup_ratio"] = number(c.sup_ratio);
  return j;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Json number(double x) {
  if (!std::isfinite(x)) return format_number(x);
  const double rounded = std::strtod(format_number(x).c_str(), nullptr);
  return rounded == 0.0 ? 0.0 : rounded;
}

Json normalize(const Json& j) {
  if (j.is_number_float()) return number(j.get<double>());
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& v : j) out.push_back(normalize(v));
    return out;
  }
  if (j.is_object()) {
    Json out = Json::object();
    for (const auto& [k, v] : j.items()) out[k] = normalize(v);
    return out;
  }
  return j;
}

std::string dump(const Json& j) { return normalize(j).dump(2) + "\n"; }

}  // namespace meandev::json_io
