#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hpca/date.h"

namespace hpca {

/// Adjusted close prices, one row per date and one column per asset.
/// Invariants (checked by `validate`): dates strictly increasing, unique
/// tickers, complete positive matrix.
struct PricePanel {
  std::vector<Date> dates;
  std::vector<std::string> tickers;
  Eigen::MatrixXd prices;  // T_p x N

  Eigen::Index num_dates() const { return prices.rows(); }
  Eigen::Index num_assets() const { return prices.cols(); }

  void validate() const;
};

/// Mean-0 / variance-1 (population convention) returns. `means` and
/// `vols` are the moments of the raw returns the panel was built from,
/// so `raw_returns()` recovers them.
struct StandardizedPanel {
  std::vector<Date> dates;
  std::vector<std::string> tickers;
  Eigen::MatrixXd returns;  // T x N
  Eigen::VectorXd means;
  Eigen::VectorXd vols;

  Eigen::Index num_periods() const { return returns.rows(); }
  Eigen::Index num_assets() const { return returns.cols(); }

  Eigen::MatrixXd raw_returns() const;
};

struct AssetMeta {
  std::string ticker;
  std::string sector;
  std::string country;
};

enum class ReturnKind { log, simple };

/// Reads a `date,TICKER1,...` CSV. Empty cells are missing. Assets with
/// fewer than `min_history` observations are dropped, gaps are
/// forward-filled and rows before every asset's first observation are
/// discarded.
PricePanel load_prices(const std::string& path, int min_history);

/// Reads a `ticker,sector,country` CSV.
std::vector<AssetMeta> load_meta(const std::string& path);

void write_prices(const std::string& path, const PricePanel& panel,
                  const std::vector<std::string>& header_comments = {});
void write_meta(const std::string& path, const std::vector<AssetMeta>& meta,
                const std::vector<std::string>& header_comments = {});

/// (T_p - 1) x N matrix of period returns.
Eigen::MatrixXd compute_returns(const PricePanel& panel, ReturnKind kind);

/// Column-wise (r - mean) / std with the 1/T variance. Throws
/// ValidationError naming the ticker of any constant column.
StandardizedPanel standardize(const Eigen::MatrixXd& raw,
                              std::vector<Date> dates,
                              std::vector<std::string> tickers);

/// Convenience: returns of `panel` (dated by each period's end date),
/// standardized.
StandardizedPanel standardize(const PricePanel& panel,
                              ReturnKind kind = ReturnKind::log);

/// Windows [0, width), [step, step + width), ... each re-standardized with
/// its own moments.
std::vector<StandardizedPanel> rolling_windows(const StandardizedPanel& panel,
                                               int width, int step);

/// Rows [begin, end) of `panel`, re-standardized within the slice.
StandardizedPanel slice_window(const StandardizedPanel& panel,
                               Eigen::Index begin, Eigen::Index end);

}  // namespace hpca
