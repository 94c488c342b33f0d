// Acceptance gate: prints one PASS/FAIL line per criterion and exits nonzero
// when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "meandev/cli.hpp"
#include "meandev/distributions.hpp"
#include "meandev/estimation.hpp"
#include "meandev/measures.hpp"
#include "meandev/portfolio.hpp"
#include "meandev/robust.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace meandev;
namespace ax = meandev::axioms;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Setting {
  const char* label;
  ParametricModel model;
  RiskWeightFunction g;
  double sigma2;      // reported, two decimals
  double center;      // reported, two decimals
  double analytic;    // underlying value, checked at 1e-3
};

std::vector<Setting> settings() {
  const auto n = ParametricModel::normal(0, 1);
  const auto l = ParametricModel::lomax(4.0);
  const auto es = RiskWeightFunction::exp_shortfall(1.0);
  const auto lin = RiskWeightFunction::linear(1.0);
  const auto cap = RiskWeightFunction::exp_cap(1.0);
  return {{"normal/exp_shortfall", n, es, 2.85, 0.93, 0.9279}, {"normal/linear", n, lin, 3.71, 1.76, 1.7550},
          {"normal/exp_cap", n, cap, 1.08, 0.83, 0.8271},      {"lomax/exp_shortfall", l, es, 4.88, 0.73, 0.725},
          {"lomax/linear", l, lin, 10.19, 1.37, 1.3711},       {"lomax/exp_cap", l, cap, 1.97, 0.98, 0.979}};
}

const DistortionFunction kEs90 = DistortionFunction::es_dev(0.9);

Outcome asymptotic_variance() {
  bool ok = true;
  std::string detail;
  for (const auto& s : settings()) {
    const auto start = Clock::now();
    const double v = sigma_g_squared(s.model, MDMeasure(s.g, kEs90));
    const double t = seconds_since(start);
    const double rel = v / s.sigma2 - 1.0;
    const bool good = std::abs(rel) <= 0.02 && t < 10.0;
    ok = ok && good;
    detail += fmt(" %s=%.4f(%+.2f%%,%.2fs)", s.label, v, 100 * rel, t);
  }
  return {ok, detail};
}

Outcome limit_center() {
  bool ok = true;
  std::string detail;
  for (const auto& s : settings()) {
    const double v = md_true(s.model, MDMeasure(s.g, kEs90));
    const bool good = std::abs(v - s.center) <= 0.01 && std::abs(v - s.analytic) <= 1e-3;
    ok = ok && good;
    detail += fmt(" %s=%.5f", s.label, v);
  }
  return {ok, detail};
}

Outcome monte_carlo_normality() {
  const auto start = Clock::now();
  const auto r = monte_carlo(ParametricModel::normal(0, 1), MDMeasure(RiskWeightFunction::exp_shortfall(1), kEs90),
                             10000, 1000, 20240601);
  const double t = seconds_since(start);
  const double rel = r.scaled_variance / r.target_variance - 1.0;
  const bool ok = std::abs(rel) <= 0.10 && r.normality_statistic < 0.05 && t < 60.0;
  return {ok, fmt(" n*Var=%.4f target=%.4f (%+.2f%%) KS=%.4f mean=%.5f time=%.1fs", r.scaled_variance,
                  r.target_variance, 100 * rel, r.normality_statistic, r.mean_estimate, t)};
}

StateVector random_state(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> scale(0.05, 6.0);
  auto v = gen::random_vector(rng, n);
  const double s = scale(rng);
  for (auto& a : v) a *= s;
  return StateVector(v);
}

StateVector random_partner(std::mt19937_64& rng, const StateVector& x) {
  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  if (coin(rng)) return x.scaled(u(rng)).shifted(u(rng) - 1.5);
  return random_state(rng, x.size());
}

bool all_of_500(std::uint64_t seed, const std::function<bool(std::mt19937_64&)>& check) {
  std::mt19937_64 rng(seed);
  bool all = true;
  for (int i = 0; i < 500; ++i) all = check(rng) && all;
  return all;
}

Outcome axiom_suites() {
  const std::vector<RiskWeightFunction> gs = {RiskWeightFunction::linear(1.0),
                                              RiskWeightFunction::linear(0.5),
                                              RiskWeightFunction::exp_shortfall(1.0),
                                              RiskWeightFunction::pareto_shortfall(2.0),
                                              RiskWeightFunction::exp_cap(1.0),
                                              RiskWeightFunction::pareto_cap(2.0),
                                              RiskWeightFunction::piecewise_linear({1.0}, {0.0, 1.0}),
                                              RiskWeightFunction::piecewise_linear({1.0, 2.0}, {0.0, 1.0, 0.6}),
                                              RiskWeightFunction::piecewise_linear({0.5, 2.0}, {0.2, 0.9, 0.4})};
  const std::vector<DistortionFunction> hs = {DistortionFunction::es_dev(0.9), DistortionFunction::gini()};
  int ca = 0, m = 0, cx = 0, ss = 0, ph = 0, sc = 0, total = 0;
  std::uniform_real_distribution<double> lam(0.0, 1.0), big(0.01, 5.0), delta(0.0, 4.0);
  std::uniform_int_distribution<int> shift(-50, 50);
  std::exponential_distribution<double> bump(1.0);
  for (const auto& g : gs) {
    const auto cls = classify_g(g);
    for (const auto& h : hs) {
      const MDMeasure meas(g, h);
      ++total;
      ca += all_of_500(1, [&](auto& rng) {
        return ax::cash_additivity(meas, random_state(rng, gen::random_length(rng)), shift(rng)).holds;
      });
      m += all_of_500(2, [&](auto& rng) {
        const StateVector x = random_state(rng, gen::random_length(rng));
        std::vector<double> y(x.values().begin(), x.values().end());
        for (auto& v : y) v += bump(rng) * (lam(rng) < 0.2);
        return ax::monotonicity(meas, x, StateVector(y)).holds;
      }) == is_range_normalized(h);
      cx += all_of_500(3, [&](auto& rng) {
        const StateVector x = random_state(rng, gen::random_length(rng));
        return ax::convexity(meas, x, random_partner(rng, x), lam(rng)).holds;
      }) == cls.is_convex;
      ss += all_of_500(4, [&](auto& rng) {
        return ax::star_shaped(meas, random_state(rng, gen::random_length(rng)), lam(rng)).holds;
      }) == cls.is_star_shaped;
      ph += all_of_500(5, [&](auto& rng) {
        return ax::positive_homogeneity(meas, random_state(rng, gen::random_length(rng)), big(rng)).holds;
      }) == cls.is_linear;
      sc += all_of_500(6, [&](auto& rng) {
        const StateVector x = random_state(rng, gen::random_length(rng, 1, 40));
        const auto i = std::uniform_int_distribution<std::size_t>(0, x.size() - 1)(rng);
        return ax::spread_consistency(meas, x, i, delta(rng)).holds;
      });
    }
  }
  const MDMeasure counter(RiskWeightFunction::piecewise_linear({1.0}, {0.0, 1.0}), DistortionFunction::es_dev(0.5));
  const StateVector x({0, 2});
  const double sum = md_eval(counter, x + x);
  const double parts = md_eval(counter, x) + md_eval(counter, x);
  const bool ok = ca == total && m == total && cx == total && ss == total && ph == total && sc == total &&
                  sum == 3.0 && parts == 2.0;
  return {ok, fmt(" measures=%d CA=%d M=%d Cx=%d SS=%d PH=%d SC=%d counterexample md(X+Y)=%g md(X)+md(Y)=%g", total,
                  ca, m, cx, ss, ph, sc, sum, parts)};
}

Outcome adjusted_es() {
  const StateVector x = sample(ParametricModel::normal(0, 1), 100000, 777);
  const double gap_es = adjusted_es_identity_gap(RiskWeightFunction::exp_shortfall(1), 0.9, x, 2000);
  const double gap_lin = adjusted_es_identity_gap(RiskWeightFunction::linear(1), 0.9, x, 2000);
  const double md = md_eval(MDMeasure(RiskWeightFunction::exp_shortfall(1), kEs90), x);
  return {gap_es <= 1e-3 && gap_lin <= 1e-10,
          fmt(" exp_shortfall gap=%.6g (md=%.6f, sup=%.6f) linear gap=%.3g", gap_es, md,
              adjusted_es_value(RiskWeightFunction::exp_shortfall(1), 0.9, x, 2000), gap_lin)};
}

Outcome robust_closed_forms() {
  bool ok = true;
  const double es_norm = h_norms(kEs90, 2.0).l2_norm;
  const double gini_norm = h_norms(DistortionFunction::gini(), 2.0).l2_norm;
  ok = ok && std::abs(es_norm - 3.0) <= 1e-9 && std::abs(gini_norm - 1.0 / std::sqrt(3.0)) <= 1e-9;
  double worst_hq = 0.0;
  for (double a : {0.9, 0.95}) {
    for (double p : {1.5, 2.0}) {
      const double closed = a * std::pow(std::pow(a, p) * (1 - a) + a * std::pow(1 - a, p), -1.0 / p);
      worst_hq = std::max(worst_hq,
                          std::abs(h_norms(DistortionFunction::es_dev(a), p / (p - 1)).centered_q_norm - closed));
    }
  }
  ok = ok && worst_hq <= 1e-9;
  const StateVector x = sample(ParametricModel::normal(0, 1), 2000, 99);
  double worst_w = 0.0;
  bool exact_zero = true;
  for (const auto& h : {kEs90, DistortionFunction::gini()}) {
    const double n = h_norms(h, 2.0).l2_norm;
    const double md = md_eval(MDMeasure(RiskWeightFunction::linear(1), h), x);
    for (double eps : {0.01, 0.1, 0.5, 2.0}) {
      const double v = worstcase_wasserstein(RiskWeightFunction::linear(1), h, {x, eps});
      worst_w = std::max(worst_w, std::abs(v - (md + eps * std::sqrt(n * n + 1))));
    }
    for (const auto& g : {RiskWeightFunction::linear(1), RiskWeightFunction::exp_shortfall(1)}) {
      exact_zero = exact_zero && worstcase_wasserstein(g, h, {x, 0.0}) == md_eval(MDMeasure(g, h), x);
    }
  }
  ok = ok && worst_w <= 1e-8 && exact_zero;
  return {ok, fmt(" |h'|2(es0.9)=%.12f |h'|2(gini)=%.12f max[h]q err=%.2g max wasserstein err=%.2g eps0 exact=%s",
                  es_norm, gini_norm, worst_hq, worst_w, exact_zero ? "yes" : "no")};
}

Outcome portfolio() {
  const auto start = Clock::now();
  const auto panel = synthetic::gaussian_panel(10, 1500, 20240707);
  BacktestConfig cfg;  // window 500, monthly, alpha 0.9, exp_shortfall(1)
  const auto report = run_backtest(panel, cfg);
  std::mt19937_64 rng(4242);
  bool beats = true, convex = true;
  double worst_margin = INFINITY;
  for (const auto& rec : report.rebalances) {
    const Eigen::MatrixXd window = panel.losses.middleRows(static_cast<Eigen::Index>(rec.row - cfg.window),
                                                           static_cast<Eigen::Index>(cfg.window));
    const Eigen::VectorXd ws = Eigen::Map<const Eigen::VectorXd>(rec.weights.data(), 10);
    auto f = [&](const Eigen::VectorXd& w) { return md_portfolio_objective(window, w, cfg.alpha, cfg.g); };
    const double at = f(ws);
    for (int k = 0; k < 1000; ++k) {
      const auto p = oracle::random_simplex_point(rng, 10);
      const double v = f(Eigen::Map<const Eigen::VectorXd>(p.data(), 10));
      worst_margin = std::min(worst_margin, v - at);
      beats = beats && at <= v + 1e-8;
    }
    for (int k = 0; k < 100; ++k) {
      const auto p = oracle::random_simplex_point(rng, 10);
      const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(p.data(), 10);
      convex = convex && f(0.5 * (ws + w)) <= 0.5 * (at + f(w)) + 1e-9;
    }
  }
  BacktestConfig large = cfg, pure = cfg;
  large.g = RiskWeightFunction::exp_shortfall(1e6);
  pure.g = RiskWeightFunction::linear(1.0);  // mean + (ES - mean) = ES
  const double w_large = run_backtest(panel, large).wealth_series.back().wealth;
  const double w_pure = run_backtest(panel, pure).wealth_series.back().wealth;
  const double rel = std::abs(w_large / w_pure - 1.0);
  const double t = seconds_since(start);
  return {beats && convex && rel <= 1e-3 && t < 120.0,
          fmt(" rebalances=%zu beats-random=%s (min margin %.3g) convexity=%s wealth beta=1e6 %.6f vs ES %.6f "
              "(rel %.2g) time=%.1fs",
              report.rebalances.size(), beats ? "yes" : "no", worst_margin, convex ? "yes" : "no", w_large, w_pure,
              rel, t)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("meandev_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  {
    std::ofstream(dir / "x.csv") << "value\n0.5\n-1.25\n3\n2\n0.75\n";
    const auto panel = synthetic::gaussian_panel(3, 300, 5);
    std::ofstream prices(dir / "prices.csv");
    prices.precision(17);
    prices << "date,A0,A1,A2\n2014-12-31,100,100,100\n";
    std::vector<double> p(3, 100.0);
    for (Eigen::Index t = 0; t < panel.losses.rows(); ++t) {
      prices << panel.dates[static_cast<std::size_t>(t)];
      for (Eigen::Index i = 0; i < 3; ++i) prices << ',' << (p[static_cast<std::size_t>(i)] *= std::exp(-panel.losses(t, i)));
      prices << '\n';
    }
    std::ofstream(dir / "cfg.json") << R"({"window":150,"iterations":1000})";
  }
  const std::string d = dir.string() + "/";
  const std::vector<std::vector<std::string>> commands = {
      {"classify", "--g", R"({"kind":"pareto_shortfall","theta":2})"},
      {"eval", "--data", d + "x.csv", "--h", R"({"kind":"gini"})"},
      {"asymvar", "--model", R"({"kind":"lomax","theta":4})"},
      {"mc", "--model", R"({"kind":"normal","mu":0,"sd":1})", "--n", "1000", "--reps", "200", "--seed", "7",
       "--estimates", d + "est.csv"},
      {"robust", "moment", "--m", "0", "--v", "1", "--order", "1.5"},
      {"robust", "wasserstein", "--data", d + "x.csv", "--sweep", "0,2,11"},
      {"backtest", "--prices", d + "prices.csv", "--config", d + "cfg.json", "--wealth-out", d + "wealth.csv",
       "--weights-out", d + "weights.csv"},
      {"ingest", "--prices", d + "prices.csv"}};
  const std::vector<std::string> files = {"est.csv", "wealth.csv", "weights.csv"};
  auto run_all = [&] {
    std::string all;
    for (const auto& c : commands) {
      std::ostringstream out, err;
      all += std::to_string(run_cli(c, out, err)) + "\n" + out.str() + err.str();
    }
    for (const auto& f : files) all += slurp(dir / f);
    return all;
  };
  const std::string first = run_all();
  const std::string second = run_all();
  std::size_t failures = 0;
  for (const auto& c : commands) {
    std::ostringstream out, err;
    failures += run_cli(c, out, err) != 0;
  }
  fs::remove_all(dir);
  return {first == second && failures == 0,
          fmt(" commands=%zu output bytes=%zu identical=%s nonzero exits=%zu", commands.size(), first.size(),
              first == second ? "yes" : "no", failures)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"asymptotic variance reproduction", asymptotic_variance},
      {"limit center reproduction", limit_center},
      {"Monte Carlo normality", monte_carlo_normality},
      {"axiom property suites", axiom_suites},
      {"adjusted Expected Shortfall dual identity", adjusted_es},
      {"robust closed forms", robust_closed_forms},
      {"portfolio properties", portfolio},
      {"CLI determinism", cli_determinism}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string(" exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu %s: %s -%s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
