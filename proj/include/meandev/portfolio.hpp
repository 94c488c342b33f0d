#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "meandev/riskweight.hpp"

namespace meandev {

/// Daily log-losses (negated log-returns): rows are dates, columns assets.
struct LossPanel {
  std::vector<std::string> dates;
  std::vector<std::string> tickers;
  Eigen::MatrixXd losses;
};

/// A point of the probability simplex.
struct PortfolioWeights {
  std::vector<double> w;
};

enum class Strategy { MeanDeviation, Markowitz };

struct BacktestConfig {
  std::size_t window = 500;
  std::string rebalance = "monthly";
  double alpha = 0.9;
  RiskWeightFunction g = RiskWeightFunction::exp_shortfall(1.0);
  double risk_free_rate = 0.0213;
  double initial_wealth = 1.0;
  Strategy strategy = Strategy::MeanDeviation;
  double target_return = 0.10;  // annualized expected log-return, Markowitz only
  std::size_t iterations = 5000;
};

inline constexpr double kTradingDaysPerYear = 252.0;

/// Prices CSV: header "date,<ticker>,...", ISO dates strictly increasing,
/// positive prices. losses[t][i] = -ln(p[t+1][i] / p[t][i]); the first date is dropped.
LossPanel ingest_prices(std::istream& in);
void write_loss_panel_csv(std::ostream& out, const LossPanel& panel);

/// Euclidean projection onto {w >= 0, sum w = 1} by the sorting method.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& y);

/// E[w'X] + g(ES_alpha(w'X) - E[w'X]) under the empirical law of the window rows.
double md_portfolio_objective(const Eigen::MatrixXd& window, const Eigen::VectorXd& w, double alpha,
                              const RiskWeightFunction& g);

/// Empirical ES_alpha(w'X) - E[w'X] of the window.
double portfolio_es_deviation(const Eigen::MatrixXd& window, const Eigen::VectorXd& w, double alpha);

struct MdSolution {
  PortfolioWeights weights;
  double objective;
};

/// Minimizes the mean-deviation objective over the simplex. Projected
/// subgradient in w (step c / sqrt(k) on the normalized subgradient, equal-weight
/// start, best iterate kept); x in t + E[(w'X - t)+] / (1 - alpha) is minimized
/// exactly at every iterate (t = VaR_alpha). Requires convex g.
MdSolution optimize_md(const Eigen::MatrixXd& window, const BacktestConfig& cfg);

struct MarkowitzSolution {
  PortfolioWeights weights;
  double target_used;
  bool target_adjusted;  // requested target was infeasible on the simplex
};

/// Minimum-variance weights with annualized expected log-return equal to the
/// target (clamped to the attainable range).
MarkowitzSolution markowitz_baseline(const Eigen::MatrixXd& window, double target_return);

struct RebalanceRecord {
  std::string date;
  std::size_t row;
  std::vector<double> weights;
  double objective;
  bool target_adjusted = false;
};

struct WealthPoint {
  std::string date;
  double log_return;
  double wealth;
};

struct BacktestReport {
  std::vector<WealthPoint> wealth_series;
  std::vector<RebalanceRecord> rebalances;
  double annualized_return = 0.0;
  double annualized_volatility = 0.0;
  double sharpe_ratio = 0.0;  // +-inf when the volatility is zero
};

/// Monthly rebalanced backtest: at the first trading day of every month (and
/// on the first investment day) weights are re-optimized on the trailing
/// `window` rows and held until the next rebalance. Wealth compounds by
/// exp(-w'loss) daily.
BacktestReport run_backtest(const LossPanel& panel, const BacktestConfig& cfg);

/// Wealth path recomputed from the weights stored in a report.
std::vector<double> replay_wealth(const LossPanel& panel, const BacktestReport& report, double initial_wealth);

}  // namespace meandev
