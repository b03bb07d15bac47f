#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hpca/date.h"
#include "hpca/hierarchy.h"
#include "hpca/portfolio.h"
#include "hpca/returns.h"

namespace hpca {

enum class Strategy { first_eigen, hpca_stat, hpca_gics, shrinkage, index_proxy };

std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& name);

struct BacktestConfig {
  int window = 125;     // estimation periods
  int rebalance = 21;   // periods between rebalances
  double cost_bps = 5.0;
  int stat_k = 4;       // eigenvectors used to form statistical clusters
  MaxSharpeConfig optimizer{};
  /// Required by Strategy::hpca_gics; must cover the panel's assets.
  std::optional<ClusterMap> sector_map;
};

struct RebalanceRecord {
  Date date;
  Eigen::VectorXd weights;
  double turnover = 0.0;
};

struct BacktestResult {
  Strategy strategy = Strategy::index_proxy;
  std::vector<Date> dates;
  std::vector<double> equity;    // starts at 1.0
  std::vector<double> turnover;  // per date, zero between rebalances
  std::vector<RebalanceRecord> rebalances;
  int window = 0;
  int rebalance = 0;
  double cost_bps = 0.0;
};

/// Target weights computed from one estimation window (log returns,
/// standardized within the window).
Eigen::VectorXd target_weights(const StandardizedPanel& window, Strategy strategy,
                               const BacktestConfig& config);

/// Rolls the strategy through the panel. The first rebalance happens on the
/// date that closes the first full estimation window; each rebalance uses
/// only returns up to and including that date. Positions drift with
/// realized simple returns between rebalances, and each trade pays
/// cost_bps on its turnover.
BacktestResult backtest(const PricePanel& panel, Strategy strategy, const BacktestConfig& config);

struct PerfStats {
  double cagr = 0.0;
  double std_dev = 0.0;  // annualized
  double sharpe = 0.0;   // risk-free rate zero
  double maxdd = 0.0;    // fraction in [0, 1]
  double calmar = 0.0;
  bool sharpe_undefined = false;  // zero volatility; sharpe reported as 0
  bool calmar_undefined = false;  // zero drawdown; calmar reported as 0
};

PerfStats perf_stats(const std::vector<double>& equity, int periods_per_year = 252);
PerfStats perf_stats(const BacktestResult& result, int periods_per_year = 252);

/// Largest peak-to-trough decline as a fraction of the peak.
double max_drawdown(const std::vector<double>& equity);

}  // namespace hpca
