#include "meandev/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "meandev/errors.hpp"
#include "meandev/state_vector.hpp"

namespace meandev {
namespace {

constexpr double kStepScale = 0.5;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool is_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

// Sorted-rank bookkeeping of the empirical ES of portfolio losses.
struct TailSplit {
  double var;
  double es;
  double mean;
  std::size_t var_row;
  double var_weight;                 // weight of the VaR atom inside the tail
  std::vector<std::size_t> tail_rows;  // rows strictly above the VaR atom
};

TailSplit split_tail(const Eigen::VectorXd& losses, double alpha, std::vector<std::size_t>& order) {
  const std::size_t n = static_cast<std::size_t>(losses.size());
  const double dn = static_cast<double>(n);
  order.resize(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t k = std::max<std::size_t>(1, ceil_index(n, alpha));
  auto by_loss = [&](std::size_t a, std::size_t b) {
    return losses[static_cast<Eigen::Index>(a)] < losses[static_cast<Eigen::Index>(b)] ||
           (losses[static_cast<Eigen::Index>(a)] == losses[static_cast<Eigen::Index>(b)] && a < b);
  };
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k - 1), order.end(), by_loss);
  TailSplit t;
  t.var_row = order[k - 1];
  t.var = losses[static_cast<Eigen::Index>(t.var_row)];
  t.var_weight = std::max(0.0, static_cast<double>(k) / dn - alpha);
  if (t.var_weight < 1e-15) t.var_weight = 0.0;
  t.tail_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
  std::sort(t.tail_rows.begin(), t.tail_rows.end());
  double upper = 0.0;
  for (std::size_t r : t.tail_rows) upper += losses[static_cast<Eigen::Index>(r)];
  t.es = (upper / dn + t.var_weight * t.var) / (1.0 - alpha);
  t.mean = losses.mean();
  return t;
}

double portfolio_log_return(const Eigen::MatrixXd& losses, Eigen::Index row, const std::vector<double>& w) {
  double loss = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) loss += w[i] * losses(row, static_cast<Eigen::Index>(i));
  return -loss;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

// Clip round-off and renormalize so that the reported weights sum to 1.
Eigen::VectorXd clean_simplex(Eigen::VectorXd w) {
  w = w.cwiseMax(0.0);
  const double s = w.sum();
  if (!(s > 0.0)) return Eigen::VectorXd::Constant(w.size(), 1.0 / static_cast<double>(w.size()));
  return w / s;
}

void validate_config(const BacktestConfig& cfg) {
  if (cfg.window < 2) throw DomainError("backtest window must be >= 2");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  if (cfg.rebalance != "monthly") throw DomainError("unsupported rebalance rule: " + cfg.rebalance);
  if (!(cfg.initial_wealth > 0.0)) throw DomainError("initial wealth must be > 0");
  if (cfg.iterations == 0) throw DomainError("solver iterations must be >= 1");
}

}  // namespace

LossPanel ingest_prices(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty prices CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv_line(line);
  if (header.size() < 2 || header.front() != "date") {
    throw ParseError("prices CSV header must be \"date,<ticker>,...\"");
  }
  LossPanel panel;
  panel.tickers.assign(header.begin() + 1, header.end());
  const std::size_t cols = panel.tickers.size();

  std::vector<std::string> dates;
  std::vector<std::vector<double>> prices;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    const std::string where = "prices CSV row " + std::to_string(row);
    if (cells.size() != cols + 1) throw ParseError(where + ": expected " + std::to_string(cols + 1) + " cells");
    if (!is_iso_date(cells[0])) throw ParseError(where + ": date must be YYYY-MM-DD, got \"" + cells[0] + "\"");
    if (!dates.empty() && !(cells[0] > dates.back())) throw ParseError(where + ": dates must increase strictly");
    std::vector<double> p(cols);
    for (std::size_t i = 0; i < cols; ++i) {
      const std::string& c = cells[i + 1];
      if (c.empty()) throw ParseError(where + ": missing price for " + panel.tickers[i]);
      std::size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(c, &pos);
      } catch (const std::exception&) {
        throw ParseError(where + ": not a number: \"" + c + "\"");
      }
      if (pos != c.size() || !std::isfinite(v)) throw ParseError(where + ": not a finite number: \"" + c + "\"");
      if (!(v > 0.0)) throw ParseError(where + ": prices must be positive");
      p[i] = v;
    }
    dates.push_back(cells[0]);
    prices.push_back(std::move(p));
  }
  if (prices.size() < 2) throw ParseError("prices CSV needs at least two dates");
  panel.dates.assign(dates.begin() + 1, dates.end());
  panel.losses.resize(static_cast<Eigen::Index>(prices.size() - 1), static_cast<Eigen::Index>(cols));
  for (std::size_t t = 1; t < prices.size(); ++t) {
    for (std::size_t i = 0; i < cols; ++i) {
      panel.losses(static_cast<Eigen::Index>(t - 1), static_cast<Eigen::Index>(i)) =
          -std::log(prices[t][i] / prices[t - 1][i]);
    }
  }
  return panel;
}

void write_loss_panel_csv(std::ostream& out, const LossPanel& panel) {
  std::ostringstream buf;
  buf.precision(17);
  buf << "date";
  for (const auto& t : panel.tickers) buf << ',' << t;
  buf << '\n';
  for (Eigen::Index r = 0; r < panel.losses.rows(); ++r) {
    buf << panel.dates[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < panel.losses.cols(); ++c) buf << ',' << panel.losses(r, c);
    buf << '\n';
  }
  out << buf.str();
}

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& y) {
  const Eigen::Index n = y.size();
  std::vector<double> u(y.data(), y.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumulative += u[static_cast<std::size_t>(j)];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[static_cast<std::size_t>(j)] - candidate > 0.0) theta = candidate;
  }
  return (y.array() - theta).cwiseMax(0.0).matrix();
}

double portfolio_es_deviation(const Eigen::MatrixXd& window, const Eigen::VectorXd& w, double alpha) {
  std::vector<std::size_t> order;
  const Eigen::VectorXd losses = window * w;
  const TailSplit t = split_tail(losses, alpha, order);
  return std::max(0.0, t.es - t.mean);
}

double md_portfolio_objective(const Eigen::MatrixXd& window, const Eigen::VectorXd& w, double alpha,
                              const RiskWeightFunction& g) {
  std::vector<std::size_t> order;
  const Eigen::VectorXd losses = window * w;
  const TailSplit t = split_tail(losses, alpha, order);
  return t.mean + g(std::max(0.0, t.es - t.mean));
}

MdSolution optimize_md(const Eigen::MatrixXd& window, const BacktestConfig& cfg) {
  if (window.rows() < 2) throw DomainError("optimization window needs at least 2 rows");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  if (!classify_g(cfg.g).is_convex) {
    throw PreconditionError("program not jointly convex: the risk-weighting function g must be convex");
  }
  const Eigen::Index n = window.cols();
  const double rows = static_cast<double>(window.rows());
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  if (n == 1) return {{to_std(w)}, md_portfolio_objective(window, w, cfg.alpha, cfg.g)};

  const Eigen::VectorXd column_means = window.colwise().mean().transpose();
  std::vector<std::size_t> order;
  Eigen::VectorXd best_w = w;
  double best_obj = std::numeric_limits<double>::infinity();
  Eigen::VectorXd tail_grad(n);

  for (std::size_t k = 1; k <= cfg.iterations + 1; ++k) {
    const Eigen::VectorXd losses = window * w;
    const TailSplit t = split_tail(losses, cfg.alpha, order);
    const double dev = std::max(0.0, t.es - t.mean);
    const double obj = t.mean + cfg.g(dev);
    if (obj < best_obj) {
      best_obj = obj;
      best_w = w;
    }
    if (k > cfg.iterations) break;

    // Subgradient of ES at fixed sort order: tail rows at weight 1/rows, the
    // VaR row at its partial weight.
    tail_grad.setZero();
    for (std::size_t r : t.tail_rows) tail_grad += window.row(static_cast<Eigen::Index>(r)).transpose();
    tail_grad /= rows;
    if (t.var_weight > 0.0) tail_grad += t.var_weight * window.row(static_cast<Eigen::Index>(t.var_row)).transpose();
    tail_grad /= (1.0 - cfg.alpha);
    const double slope = dev > 0.0 ? cfg.g.left_derivative(dev) : cfg.g.slope_at_zero();
    const Eigen::VectorXd grad = column_means + slope * (tail_grad - column_means);

    // Only the component tangent to the simplex moves the projected iterate.
    const Eigen::VectorXd tangent = grad.array() - grad.mean();
    const double norm = tangent.norm();
    if (!(norm > 1e-300)) break;
    const double step = kStepScale / std::sqrt(static_cast<double>(k));
    w = project_to_simplex(w - (step / norm) * grad);
  }
  best_w = clean_simplex(best_w);
  return {{to_std(best_w)}, md_portfolio_objective(window, best_w, cfg.alpha, cfg.g)};
}

MarkowitzSolution markowitz_baseline(const Eigen::MatrixXd& window, double target_return) {
  if (window.rows() < 2) throw DomainError("optimization window needs at least 2 rows");
  const Eigen::Index n = window.cols();
  MarkowitzSolution sol{{std::vector<double>(static_cast<std::size_t>(n), 1.0)}, target_return, false};
  if (n == 1) return sol;

  const Eigen::VectorXd mean_loss = window.colwise().mean().transpose();
  const Eigen::VectorXd mu = -kTradingDaysPerYear * mean_loss;
  const Eigen::MatrixXd centered = window.rowwise() - mean_loss.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / (static_cast<double>(window.rows()) - 1.0);

  double target = target_return;
  if (target < mu.minCoeff() || target > mu.maxCoeff()) {
    target = std::clamp(target, mu.minCoeff(), mu.maxCoeff());
    sol.target_adjusted = true;
  }
  sol.target_used = target;

  // Affine set {1'w = 1, mu'w = target}; projection via the pseudo-inverse of B B'.
  Eigen::MatrixXd b(2, n);
  b.row(0).setOnes();
  b.row(1) = mu.transpose();
  const Eigen::Vector2d rhs(1.0, target);
  const Eigen::MatrixXd gram_pinv = (b * b.transpose()).completeOrthogonalDecomposition().pseudoInverse();
  auto project_affine = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return y - b.transpose() * (gram_pinv * (b * y - rhs));
  };
  // Dykstra's alternating projections onto the affine set and the orthant.
  auto project_feasible = [&](const Eigen::VectorXd& y) {
    Eigen::VectorXd x = y;
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
    for (int it = 0; it < 2000; ++it) {
      const Eigen::VectorXd a = project_affine(x + p);
      p = x + p - a;
      const Eigen::VectorXd next = (a + q).cwiseMax(0.0);
      q = a + q - next;
      const double change = (next - x).norm();
      x = next;
      if (change < 1e-15) break;
    }
    return x;
  };

  const double lipschitz = 2.0 * Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(cov).eigenvalues().maxCoeff();
  Eigen::VectorXd w = project_feasible(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
  if (lipschitz > 0.0) {
    const double step = 1.0 / lipschitz;
    for (int it = 0; it < 5000; ++it) {
      const Eigen::VectorXd next = project_feasible(w - step * 2.0 * (cov * w));
      const double change = (next - w).norm();
      w = next;
      if (change < 1e-13) break;
    }
  }
  sol.weights.w = to_std(clean_simplex(w));
  return sol;
}

BacktestReport run_backtest(const LossPanel& panel, const BacktestConfig& cfg) {
  validate_config(cfg);
  const std::size_t rows = static_cast<std::size_t>(panel.losses.rows());
  if (panel.dates.size() != rows || static_cast<std::size_t>(panel.losses.cols()) != panel.tickers.size()) {
    throw DomainError("loss panel dimensions are inconsistent");
  }
  if (rows < cfg.window + 1) {
    throw DomainError("insufficient history: backtest needs at least window + 1 = " +
                      std::to_string(cfg.window + 1) + " loss rows, panel has " + std::to_string(rows));
  }
  if (cfg.strategy == Strategy::MeanDeviation && !classify_g(cfg.g).is_convex) {
    throw PreconditionError("program not jointly convex: the risk-weighting function g must be convex");
  }

  BacktestReport report;
  std::vector<double> weights;
  double wealth = cfg.initial_wealth;
  for (std::size_t t = cfg.window; t < rows; ++t) {
    const bool new_month = t == cfg.window || panel.dates[t].compare(0, 7, panel.dates[t - 1], 0, 7) != 0;
    if (new_month) {
      const Eigen::MatrixXd window =
          panel.losses.middleRows(static_cast<Eigen::Index>(t - cfg.window), static_cast<Eigen::Index>(cfg.window));
      RebalanceRecord rec{panel.dates[t], t, {}, 0.0, false};
      if (cfg.strategy == Strategy::MeanDeviation) {
        const MdSolution sol = optimize_md(window, cfg);
        rec.weights = sol.weights.w;
        rec.objective = sol.objective;
      } else {
        const MarkowitzSolution sol = markowitz_baseline(window, cfg.target_return);
        rec.weights = sol.weights.w;
        const Eigen::Map<const Eigen::VectorXd> w(rec.weights.data(), static_cast<Eigen::Index>(rec.weights.size()));
        const Eigen::VectorXd port = window * w;
        rec.objective = (port.array() - port.mean()).square().sum() / (static_cast<double>(cfg.window) - 1.0);
        rec.target_adjusted = sol.target_adjusted;
      }
      weights = rec.weights;
      report.rebalances.push_back(std::move(rec));
    }
    const double r = portfolio_log_return(panel.losses, static_cast<Eigen::Index>(t), weights);
    wealth *= std::exp(r);
    report.wealth_series.push_back({panel.dates[t], r, wealth});
  }

  const std::size_t days = report.wealth_series.size();
  double sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : report.wealth_series) {
    sum += p.log_return;
    lo = std::min(lo, p.log_return);
    hi = std::max(hi, p.log_return);
  }
  const double mean = sum / static_cast<double>(days);
  double ss = 0.0;
  for (const auto& p : report.wealth_series) ss += (p.log_return - mean) * (p.log_return - mean);
  const double sd = (days > 1 && lo != hi) ? std::sqrt(ss / static_cast<double>(days - 1)) : 0.0;
  report.annualized_return = kTradingDaysPerYear * mean;
  report.annualized_volatility = std::sqrt(kTradingDaysPerYear) * sd;
  const double excess = report.annualized_return - cfg.risk_free_rate;
  if (report.annualized_volatility > 0.0) {
    report.sharpe_ratio = excess / report.annualized_volatility;
  } else {
    report.sharpe_ratio = excess == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), excess);
  }
  return report;
}

std::vector<double> replay_wealth(const LossPanel& panel, const BacktestReport& report, double initial_wealth) {
  std::vector<double> out;
  if (report.rebalances.empty()) return out;
  const std::size_t start = report.rebalances.front().row;
  std::size_t next = 0;
  std::vector<double> weights;
  double wealth = initial_wealth;
  for (std::size_t i = 0; i < report.wealth_series.size(); ++i) {
    const std::size_t t = start + i;
    if (next < report.rebalances.size() && report.rebalances[next].row == t) weights = report.rebalances[next++].weights;
    wealth *= std::exp(portfolio_log_return(panel.losses, static_cast<Eigen::Index>(t), weights));
    out.push_back(wealth);
  }
  return out;
}

}  // namespace meandev
