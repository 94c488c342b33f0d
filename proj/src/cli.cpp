#include "meandev/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "meandev/errors.hpp"
#include "meandev/estimation.hpp"
#include "meandev/json_io.hpp"
#include "meandev/measures.hpp"
#include "meandev/portfolio.hpp"
#include "meandev/robust.hpp"

namespace meandev {
namespace {

using json_io::Json;
using json_io::number;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Sweep {
  double lo;
  double hi;
  std::size_t count;
};

Sweep parse_sweep(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  Sweep s{};
  try {
    if (parts.size() != 3) throw std::invalid_argument("");
    std::size_t p0 = 0, p1 = 0, p2 = 0;
    s.lo = std::stod(parts[0], &p0);
    s.hi = std::stod(parts[1], &p1);
    const long long c = std::stoll(parts[2], &p2);
    if (p0 != parts[0].size() || p1 != parts[1].size() || p2 != parts[2].size() || c < 2) {
      throw std::invalid_argument("");
    }
    s.count = static_cast<std::size_t>(c);
  } catch (const std::exception&) {
    throw UsageError("--sweep expects lo,hi,count with count >= 2, got \"" + text + "\"");
  }
  if (!(s.lo <= s.hi)) throw UsageError("--sweep needs lo <= hi");
  return s;
}

double sweep_point(const Sweep& s, std::size_t i) {
  return s.lo + (s.hi - s.lo) * static_cast<double>(i) / static_cast<double>(s.count - 1);
}

unsigned thread_cap() {
  const char* env = std::getenv("MEANDEV_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw UsageError(std::string("MEANDEV_THREADS must be a positive integer, got \"") + env + "\"");
  return static_cast<unsigned>(v);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open input file: " + path);
  return in;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file: " + path);
  f << text;
}

StateVector load_data(const std::string& path) {
  auto in = open_input(path);
  return read_state_vector_csv(in);
}

std::string read_all(const std::string& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RiskWeightFunction g_from(const std::string& text) {
  return json_io::parse_risk_weight(json_io::parse_text(text, "--g"));
}
DistortionFunction h_from(const std::string& text) {
  return json_io::parse_distortion(json_io::parse_text(text, "--h"));
}
ParametricModel model_from(const std::string& text) {
  return json_io::parse_model(json_io::parse_text(text, "--model"));
}

struct Options {
  std::string g = R"({"kind":"exp_shortfall","beta":1})";
  std::string h = R"({"kind":"es_dev","alpha":0.9})";
  std::string model;
  std::string data;
  std::size_t n = 10000;
  std::size_t reps = 5000;
  std::optional<std::uint64_t> seed;
  std::string estimates_out;
  double m = 0.0;
  double v = 1.0;
  double order = 2.0;
  double eps = 0.0;
  std::string sweep;
  std::string prices;
  std::string config;
  std::string wealth_out;
  std::string weights_out;
  std::string out_path;
};

void cmd_classify(const Options& o, std::ostream& out) {
  const auto g = g_from(o.g);
  Json j;
  j["g"] = json_io::to_json(g);
  j["classification"] = json_io::to_json(classify_g(g));
  j["smallest_coherent_multiplier"] = number(smallest_coherent_multiplier(g));
  out << json_io::dump(j);
}

void cmd_eval(const Options& o, std::ostream& out) {
  const MDMeasure m(g_from(o.g), h_from(o.h));
  const StateVector x = load_data(o.data);
  const MDValue v = md_components(m, x);
  Json j;
  j["md"] = number(v.md);
  j["deviation"] = number(v.deviation);
  j["mean"] = number(v.mean);
  j["classification"] = json_io::to_json(m.classification());
  j["range_normalized"] = m.range_normalized();
  out << json_io::dump(j);
}

void cmd_asymvar(const Options& o, std::ostream& out) {
  const auto model = model_from(o.model);
  const MDMeasure m(g_from(o.g), h_from(o.h));
  const GaussianLimit lim = gaussian_limit(model, m);
  Json j;
  j["model"] = json_io::to_json(model);
  j["g"] = json_io::to_json(m.g());
  j["h"] = json_io::to_json(m.h());
  j["deviation"] = number(true_deviation(model, m.h()));
  j["md_true"] = number(lim.center);
  j["sigma2"] = number(lim.variance);
  out << json_io::dump(j);
}

void cmd_mc(const Options& o, std::ostream& out) {
  if (!o.seed) throw UsageError("mc requires --seed");
  const auto model = model_from(o.model);
  const MDMeasure m(g_from(o.g), h_from(o.h));
  const MonteCarloReport r = monte_carlo(model, m, o.n, o.reps, *o.seed, thread_cap());
  Json j;
  j["model"] = json_io::to_json(model);
  j["g"] = json_io::to_json(m.g());
  j["h"] = json_io::to_json(m.h());
  j["seed"] = *o.seed;
  j["replications"] = r.replications;
  j["sample_size"] = r.sample_size;
  j["mean_estimate"] = number(r.mean_estimate);
  j["scaled_variance"] = number(r.scaled_variance);
  j["true_value"] = number(r.true_value);
  j["target_variance"] = number(r.target_variance);
  j["ks_distance"] = number(r.normality_statistic);
  if (!o.estimates_out.empty()) {
    std::ostringstream csv;
    csv << "estimate\n";
    for (double e : r.estimates) csv << json_io::format_number(e) << '\n';
    write_file(o.estimates_out, csv.str());
    j["estimates_csv"] = o.estimates_out;
  }
  out << json_io::dump(j);
}

void cmd_robust_moment(const Options& o, std::ostream& out) {
  const auto g = g_from(o.g);
  const auto h = h_from(o.h);
  if (!o.sweep.empty()) {
    const Sweep s = parse_sweep(o.sweep);
    out << "v,worst_case\n";
    for (std::size_t i = 0; i < s.count; ++i) {
      const double v = sweep_point(s, i);
      out << json_io::format_number(v) << ',' << json_io::format_number(worstcase_moment(g, h, {o.m, v, o.order}))
          << '\n';
    }
    return;
  }
  Json j;
  j["worst_case"] = number(worstcase_moment(g, h, {o.m, o.v, o.order}));
  j["nominal"] = number(o.m);
  j["uncertainty"] = Json{{"type", "moment"}, {"m", number(o.m)}, {"v", number(o.v)}, {"order", number(o.order)}};
  out << json_io::dump(j);
}

void cmd_robust_wasserstein(const Options& o, std::ostream& out) {
  const auto g = g_from(o.g);
  const auto h = h_from(o.h);
  const StateVector x = load_data(o.data);
  if (!o.sweep.empty()) {
    const Sweep s = parse_sweep(o.sweep);
    out << "epsilon,worst_case\n";
    for (std::size_t i = 0; i < s.count; ++i) {
      const double eps = sweep_point(s, i);
      out << json_io::format_number(eps) << ','
          << json_io::format_number(worstcase_wasserstein(g, h, {x, eps, o.order})) << '\n';
    }
    return;
  }
  Json j;
  j["worst_case"] = number(worstcase_wasserstein(g, h, {x, o.eps, o.order}));
  j["nominal"] = number(md_eval(MDMeasure(g, h), x));
  j["uncertainty"] =
      Json{{"type", "wasserstein"}, {"epsilon", number(o.eps)}, {"order", number(o.order)}, {"n", x.size()}};
  out << json_io::dump(j);
}

void cmd_backtest(const Options& o, std::ostream& out) {
  auto in = open_input(o.prices);
  const LossPanel panel = ingest_prices(in);
  const BacktestConfig cfg = json_io::parse_backtest_config(json_io::parse_text(read_all(o.config), "--config"));
  const BacktestReport r = run_backtest(panel, cfg);

  Json j;
  j["strategy"] = cfg.strategy == Strategy::MeanDeviation ? "md" : "markowitz";
  j["assets"] = panel.tickers;
  j["window"] = cfg.window;
  j["alpha"] = number(cfg.alpha);
  j["g"] = json_io::to_json(cfg.g);
  j["risk_free_rate"] = number(cfg.risk_free_rate);
  j["days"] = r.wealth_series.size();
  j["rebalances"] = r.rebalances.size();
  j["terminal_wealth"] = number(r.wealth_series.back().wealth);
  j["annualized_return"] = number(r.annualized_return);
  j["annualized_volatility"] = number(r.annualized_volatility);
  j["sharpe_ratio"] = number(r.sharpe_ratio);
  Json periods = Json::array();
  for (const auto& rec : r.rebalances) {
    Json p;
    p["date"] = rec.date;
    p["weights"] = Json::array();
    for (double w : rec.weights) p["weights"].push_back(number(w));
    p["objective"] = number(rec.objective);
    if (cfg.strategy == Strategy::Markowitz) p["target_adjusted"] = rec.target_adjusted;
    periods.push_back(p);
  }
  j["periods"] = periods;

  if (!o.wealth_out.empty()) {
    std::ostringstream csv;
    csv << "date,log_return,wealth\n";
    for (const auto& p : r.wealth_series) {
      csv << p.date << ',' << json_io::format_number(p.log_return) << ',' << json_io::format_number(p.wealth) << '\n';
    }
    write_file(o.wealth_out, csv.str());
  }
  if (!o.weights_out.empty()) {
    std::ostringstream csv;
    csv << "date";
    for (const auto& t : panel.tickers) csv << ',' << t;
    csv << '\n';
    for (const auto& rec : r.rebalances) {
      csv << rec.date;
      for (double w : rec.weights) csv << ',' << json_io::format_number(w);
      csv << '\n';
    }
    write_file(o.weights_out, csv.str());
  }
  out << json_io::dump(j);
}

void cmd_ingest(const Options& o, std::ostream& out) {
  auto in = open_input(o.prices);
  const LossPanel panel = ingest_prices(in);
  std::ostringstream csv;
  write_loss_panel_csv(csv, panel);
  if (o.out_path.empty()) {
    out << csv.str();
  } else {
    write_file(o.out_path, csv.str());
    Json j;
    j["dates"] = panel.dates.size();
    j["assets"] = panel.tickers;
    j["output"] = o.out_path;
    out << json_io::dump(j);
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monotonic mean-deviation risk measures"};
  app.name("meandev");
  app.set_help_flag("--help", "print help and exit");  // frees -h, --h is the distortion
  app.require_subcommand(1);
  Options o;

  auto add_gh = [&](CLI::App* c) {
    c->add_option("--g", o.g, "risk-weighting function as JSON");
    c->add_option("--h", o.h, "distortion as JSON");
  };

  auto* classify = app.add_subcommand("classify", "classify a risk-weighting function");
  classify->add_option("--g", o.g, "risk-weighting function as JSON")->required();

  auto* eval = app.add_subcommand("eval", "evaluate the measure on a data CSV");
  add_gh(eval);
  eval->add_option("--data", o.data, "CSV with header \"value\"")->required();

  auto* asymvar = app.add_subcommand("asymvar", "limit center and asymptotic variance under a model");
  add_gh(asymvar);
  asymvar->add_option("--model", o.model, "model as JSON")->required();

  auto* mc = app.add_subcommand("mc", "Monte Carlo study of the empirical estimator");
  add_gh(mc);
  mc->add_option("--model", o.model, "model as JSON")->required();
  mc->add_option("--n", o.n, "sample size")->capture_default_str();
  mc->add_option("--reps", o.reps, "replications")->capture_default_str();
  mc->add_option("--seed", o.seed, "master seed")->required();
  mc->add_option("--estimates", o.estimates_out, "write estimates CSV here");

  auto* robust = app.add_subcommand("robust", "worst-case values under distributional uncertainty");
  robust->require_subcommand(1);
  auto* moment = robust->add_subcommand("moment", "mean/moment uncertainty set");
  add_gh(moment);
  moment->add_option("--m", o.m, "mean")->required();
  moment->add_option("--v", o.v, "bound on the central moment norm");
  moment->add_option("--order", o.order, "moment order p >= 1")->capture_default_str();
  moment->add_option("--sweep", o.sweep, "lo,hi,count over v; emits CSV");
  auto* wass = robust->add_subcommand("wasserstein", "Wasserstein ball around an empirical law");
  add_gh(wass);
  wass->add_option("--data", o.data, "CSV with header \"value\"")->required();
  wass->add_option("--eps", o.eps, "ball radius");
  wass->add_option("--order", o.order, "Wasserstein order")->capture_default_str();
  wass->add_option("--sweep", o.sweep, "lo,hi,count over epsilon; emits CSV");

  auto* backtest = app.add_subcommand("backtest", "rolling-window portfolio backtest");
  backtest->add_option("--prices", o.prices, "prices CSV")->required();
  backtest->add_option("--config", o.config, "config JSON file")->required();
  backtest->add_option("--wealth-out", o.wealth_out, "write wealth series CSV here");
  backtest->add_option("--weights-out", o.weights_out, "write per-period weights CSV here");

  auto* ingest = app.add_subcommand("ingest", "convert prices to daily log-losses");
  ingest->add_option("--prices", o.prices, "prices CSV")->required();
  ingest->add_option("--out", o.out_path, "write losses CSV here instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    std::ostringstream buffer;
    if (classify->parsed()) cmd_classify(o, buffer);
    if (eval->parsed()) cmd_eval(o, buffer);
    if (asymvar->parsed()) cmd_asymvar(o, buffer);
    if (mc->parsed()) cmd_mc(o, buffer);
    if (moment->parsed()) cmd_robust_moment(o, buffer);
    if (wass->parsed()) cmd_robust_wasserstein(o, buffer);
    if (backtest->parsed()) cmd_backtest(o, buffer);
    if (ingest->parsed()) cmd_ingest(o, buffer);
    out << buffer.str();
    return 0;
  } catch (const UsageError& e) {
    err << "meandev: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "meandev: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "meandev: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace meandev
