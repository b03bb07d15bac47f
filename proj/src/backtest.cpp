#include "hpca/backtest.h"

#include <algorithm>
#include <cmath>

#include "hpca/error.h"
#include "hpca/factor_model.h"
#include "hpca/pca.h"
#include "hpca/stat_cluster.h"

namespace hpca {

namespace {

constexpr const char* kModule = "portfolio";

/// Max-Sharpe weights from the K-factor truncation of the HPCA model.
Eigen::VectorXd hpca_factor_weights(const StandardizedPanel& window, const HpcaModel& model,
                                    const MaxSharpeConfig& optimizer) {
  const auto es = eigendecompose(CorrelationMatrix(model.c_hat));
  const int k = select_k(window);
  const auto fc = truncate_model(es, k);
  const Eigen::MatrixXd sigma = fc.model_covariance(window.vols);
  // Eigenportfolio return series of the kept components.
  const Eigen::MatrixXd loadings = window.vols.cwiseInverse().asDiagonal() * fc.loadings;
  const Eigen::MatrixXd factors = window.raw_returns() * loadings;
  const auto reg = expected_returns(window, factors);
  return max_sharpe(reg.mu, sigma, optimizer).weights;
}

}  // namespace

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::first_eigen: return "first_eigen";
    case Strategy::hpca_stat: return "hpca_stat";
    case Strategy::hpca_gics: return "hpca_gics";
    case Strategy::shrinkage: return "shrinkage";
    case Strategy::index_proxy: return "index_proxy";
  }
  return "unknown";
}

Strategy parse_strategy(const std::string& name) {
  for (auto s : {Strategy::first_eigen, Strategy::hpca_stat, Strategy::hpca_gics,
                 Strategy::shrinkage, Strategy::index_proxy}) {
    if (to_string(s) == name) return s;
  }
  throw ValidationError(kModule, "unknown strategy '" + name + "'");
}

Eigen::VectorXd target_weights(const StandardizedPanel& window, Strategy strategy,
                               const BacktestConfig& config) {
  const auto n = window.num_assets();
  switch (strategy) {
    case Strategy::index_proxy:
      return Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    case Strategy::first_eigen: {
      const auto es = eigendecompose(correlation_matrix(window));
      return eigenportfolio(es, window.vols, window, 1).weights;
    }
    case Strategy::shrinkage: {
      const Eigen::MatrixXd raw = window.raw_returns();
      const auto est = shrink_covariance_auto(raw);
      const Eigen::VectorXd mu = raw.colwise().mean().transpose();
      return max_sharpe(mu, est.covariance, config.optimizer).weights;
    }
    case Strategy::hpca_stat: {
      const auto es = eigendecompose(correlation_matrix(window));
      const int k = std::min<int>(config.stat_k, static_cast<int>(n) - 1);
      const auto clusters = sign_clusters(es, k);
      return hpca_factor_weights(window, build_hpca(window, clusters.map), config.optimizer);
    }
    case Strategy::hpca_gics: {
      if (!config.sector_map) {
        throw ValidationError(kModule, "hpca_gics needs a sector cluster map");
      }
      return hpca_factor_weights(window, build_hpca(window, *config.sector_map),
                                 config.optimizer);
    }
  }
  throw ValidationError(kModule, "unhandled strategy");
}

BacktestResult backtest(const PricePanel& panel, Strategy strategy, const BacktestConfig& config) {
  if (config.window < 2) throw ValidationError(kModule, "window must be >= 2");
  if (config.rebalance < 1) throw ValidationError(kModule, "rebalance step must be >= 1");
  if (config.cost_bps < 0.0) throw ValidationError(kModule, "cost_bps must be >= 0");
  const auto tp = panel.num_dates();
  const auto n = panel.num_assets();
  if (tp < config.window + 2) {
    throw ValidationError(kModule, "need at least " + std::to_string(config.window + 2) +
                                       " dates for one window plus one holding period, have " +
                                       std::to_string(tp));
  }
  if (strategy == Strategy::hpca_gics && config.sector_map &&
      config.sector_map->num_assets() != n) {
    throw ValidationError(kModule, "sector map does not cover the panel's assets");
  }

  const Eigen::MatrixXd simple = compute_returns(panel, ReturnKind::simple);
  const Eigen::MatrixXd log_returns = compute_returns(panel, ReturnKind::log);
  const std::vector<Date> return_dates(panel.dates.begin() + 1, panel.dates.end());
  const double cost_rate = config.cost_bps * 1e-4;

  BacktestResult result;
  result.strategy = strategy;
  result.window = config.window;
  result.rebalance = config.rebalance;
  result.cost_bps = config.cost_bps;

  const Eigen::Index first = config.window;
  double equity = 1.0;
  Eigen::VectorXd holdings = Eigen::VectorXd::Zero(n);  // currency exposure per asset

  for (Eigen::Index p = first; p < tp; ++p) {
    result.dates.push_back(panel.dates[static_cast<std::size_t>(p)]);
    result.equity.push_back(equity);
    double turnover = 0.0;

    const bool scheduled = p < tp - 1 && (p - first) % config.rebalance == 0;
    const bool trade = scheduled && (strategy != Strategy::index_proxy || p == first);
    if (trade) {
      Eigen::VectorXd target;
      const Eigen::Index begin = p - config.window;
      try {
        if (strategy == Strategy::index_proxy) {
          target = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
        } else {
          const Eigen::MatrixXd raw = log_returns.middleRows(begin, config.window);
          std::vector<Date> dates(return_dates.begin() + begin, return_dates.begin() + p);
          target = target_weights(standardize(raw, std::move(dates), panel.tickers), strategy,
                                  config);
        }
      } catch (const Error& e) {
        const std::string where = "estimation window ending " +
                                  format_date(panel.dates[static_cast<std::size_t>(p)]) +
                                  " failed for " + to_string(strategy) + ": " + e.what();
        if (dynamic_cast<const NumericalError*>(&e)) throw NumericalError(kModule, where);
        throw ValidationError(kModule, where);
      }
      const Eigen::VectorXd current = holdings / equity;
      turnover = (target - current).cwiseAbs().sum();
      equity -= cost_rate * turnover * equity;
      holdings = target * equity;
      result.rebalances.push_back({result.dates.back(), target, turnover});
    }
    result.turnover.push_back(turnover);

    if (p + 1 < tp) {
      const Eigen::VectorXd r = simple.row(p).transpose();
      equity += holdings.dot(r);
      holdings = holdings.cwiseProduct((r.array() + 1.0).matrix());
      if (!(equity > 0.0) || !std::isfinite(equity)) {
        throw NumericalError(kModule, "equity became non-positive on " +
                                          format_date(panel.dates[static_cast<std::size_t>(p + 1)]));
      }
    }
  }
  return result;
}

double max_drawdown(const std::vector<double>& equity) {
  double peak = equity.empty() ? 0.0 : equity.front();
  double worst = 0.0;
  for (double e : equity) {
    peak = std::max(peak, e);
    if (peak > 0.0) worst = std::max(worst, 1.0 - e / peak);
  }
  return worst;
}

PerfStats perf_stats(const std::vector<double>& equity, int periods_per_year) {
  if (equity.size() < 2) throw ValidationError(kModule, "need at least 2 equity values");
  if (periods_per_year < 1) throw ValidationError(kModule, "periods_per_year must be >= 1");
  const auto periods = static_cast<double>(equity.size() - 1);
  const double ppy = periods_per_year;

  PerfStats s;
  s.cagr = std::pow(equity.back() / equity.front(), ppy / periods) - 1.0;
  double mean = 0.0;
  std::vector<double> rets;
  rets.reserve(equity.size() - 1);
  for (std::size_t t = 1; t < equity.size(); ++t) {
    rets.push_back(equity[t] / equity[t - 1] - 1.0);
    mean += rets.back();
  }
  mean /= periods;
  double var = 0.0;
  for (double r : rets) var += (r - mean) * (r - mean);
  var /= periods;
  s.std_dev = std::sqrt(var) * std::sqrt(ppy);
  if (s.std_dev > 0.0) {
    s.sharpe = mean * ppy / s.std_dev;
  } else {
    s.sharpe_undefined = true;
  }
  s.maxdd = max_drawdown(equity);
  if (s.maxdd > 0.0) {
    s.calmar = s.cagr / s.maxdd;
  } else {
    s.calmar_undefined = true;
  }
  return s;
}

PerfStats perf_stats(const BacktestResult& result, int periods_per_year) {
  return perf_stats(result.equity, periods_per_year);
}

}  // namespace hpca
