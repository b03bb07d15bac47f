#include "hpca/returns.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "hpca/csv.h"
#include "hpca/error.h"

namespace hpca {

namespace {

constexpr const char* kModule = "returns-core";

}  // namespace

void PricePanel::validate() const {
  if (prices.rows() != static_cast<Eigen::Index>(dates.size()) ||
      prices.cols() != static_cast<Eigen::Index>(tickers.size())) {
    throw ValidationError(kModule, "price matrix shape does not match indices");
  }
  for (std::size_t i = 1; i < dates.size(); ++i) {
    if (!(dates[i - 1] < dates[i])) {
      throw ValidationError(kModule, "dates not strictly increasing at " +
                                         format_date(dates[i]));
    }
  }
  std::set<std::string> seen;
  for (const auto& t : tickers) {
    if (!seen.insert(t).second) {
      throw ValidationError(kModule, "duplicate ticker '" + t + "'");
    }
  }
  for (Eigen::Index j = 0; j < prices.cols(); ++j) {
    for (Eigen::Index t = 0; t < prices.rows(); ++t) {
      const double p = prices(t, j);
      if (!(p > 0.0) || !std::isfinite(p)) {
        throw ValidationError(kModule, "non-positive or missing price for '" +
                                           tickers[j] + "' on " +
                                           format_date(dates[t]));
      }
    }
  }
}

Eigen::MatrixXd StandardizedPanel::raw_returns() const {
  Eigen::MatrixXd raw = returns * vols.asDiagonal();
  raw.rowwise() += means.transpose();
  return raw;
}

PricePanel load_prices(const std::string& path, int min_history) {
  const auto lines = csv::read_lines(path);
  if (lines.empty()) throw ValidationError(kModule, "empty prices file '" + path + "'");

  const auto header = csv::split(lines.front());
  if (header.size() < 2 || header.front() != "date") {
    throw ValidationError(kModule, "prices header must be 'date,<ticker>...'");
  }
  const std::vector<std::string> all_tickers(header.begin() + 1, header.end());
  {
    std::set<std::string> seen;
    for (const auto& t : all_tickers) {
      if (t.empty()) throw ValidationError(kModule, "empty ticker in header");
      if (!seen.insert(t).second) {
        throw ValidationError(kModule, "duplicate ticker '" + t + "'");
      }
    }
  }

  const auto n_all = static_cast<Eigen::Index>(all_tickers.size());
  const auto n_rows = static_cast<Eigen::Index>(lines.size() - 1);
  const double missing = std::numeric_limits<double>::quiet_NaN();
  Eigen::MatrixXd raw(n_rows, n_all);
  std::vector<Date> dates;
  dates.reserve(static_cast<std::size_t>(n_rows));

  for (Eigen::Index r = 0; r < n_rows; ++r) {
    const auto fields = csv::split(lines[static_cast<std::size_t>(r) + 1]);
    if (static_cast<Eigen::Index>(fields.size()) != n_all + 1) {
      throw ValidationError(kModule, "row " + std::to_string(r + 2) + " has " +
                                         std::to_string(fields.size()) +
                                         " fields, expected " +
                                         std::to_string(n_all + 1));
    }
    dates.push_back(parse_date(fields[0]));
    if (r > 0 && !(dates[r - 1] < dates[r])) {
      throw ValidationError(kModule, "dates not strictly increasing at " + fields[0]);
    }
    for (Eigen::Index j = 0; j < n_all; ++j) {
      const auto& cell = fields[static_cast<std::size_t>(j) + 1];
      if (cell.empty()) {
        raw(r, j) = missing;
        continue;
      }
      const double p = csv::parse_number(cell, "prices file '" + path + "'");
      if (!(p > 0.0)) {
        throw ValidationError(kModule, "non-positive price " + cell + " for '" +
                                           all_tickers[j] + "' on " + fields[0]);
      }
      raw(r, j) = p;
    }
  }

  std::vector<Eigen::Index> keep;
  Eigen::Index start = 0;
  for (Eigen::Index j = 0; j < n_all; ++j) {
    Eigen::Index count = 0, first = -1;
    for (Eigen::Index r = 0; r < n_rows; ++r) {
      if (!std::isnan(raw(r, j))) {
        ++count;
        if (first < 0) first = r;
      }
    }
    if (count >= min_history && count > 0) {
      keep.push_back(j);
      start = std::max(start, first);
    }
  }
  if (keep.empty()) {
    throw ValidationError(kModule, "no asset has at least " +
                                       std::to_string(min_history) +
                                       " observations");
  }

  PricePanel panel;
  panel.dates.assign(dates.begin() + start, dates.end());
  panel.prices.resize(n_rows - start, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto j = keep[k];
    panel.tickers.push_back(all_tickers[j]);
    double last = missing;
    for (Eigen::Index r = start; r < n_rows; ++r) {
      if (!std::isnan(raw(r, j))) last = raw(r, j);
      panel.prices(r - start, static_cast<Eigen::Index>(k)) = last;
    }
  }
  panel.validate();
  return panel;
}

std::vector<AssetMeta> load_meta(const std::string& path) {
  const auto lines = csv::read_lines(path);
  if (lines.empty()) throw ValidationError(kModule, "empty metadata file '" + path + "'");
  const auto header = csv::split(lines.front());
  if (header.size() != 3 || header[0] != "ticker" || header[1] != "sector" ||
      header[2] != "country") {
    throw ValidationError(kModule, "metadata header must be 'ticker,sector,country'");
  }
  std::vector<AssetMeta> meta;
  std::set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto f = csv::split(lines[i]);
    if (f.size() != 3) {
      throw ValidationError(kModule, "metadata row " + std::to_string(i + 1) +
                                         " must have 3 fields");
    }
    if (f[0].empty()) throw ValidationError(kModule, "empty ticker in metadata");
    if (!seen.insert(f[0]).second) {
      throw ValidationError(kModule, "duplicate ticker '" + f[0] + "' in metadata");
    }
    meta.push_back({std::move(f[0]), std::move(f[1]), std::move(f[2])});
  }
  return meta;
}

void write_prices(const std::string& path, const PricePanel& panel,
                  const std::vector<std::string>& header_comments) {
  std::ofstream out(path);
  if (!out) throw ValidationError("io", "cannot write '" + path + "'");
  csv::write_comment_header(out, header_comments);
  out << "date";
  for (const auto& t : panel.tickers) out << ',' << t;
  out << '\n';
  for (Eigen::Index r = 0; r < panel.prices.rows(); ++r) {
    out << format_date(panel.dates[static_cast<std::size_t>(r)]);
    for (Eigen::Index j = 0; j < panel.prices.cols(); ++j) {
      out << ',' << csv::format_number(panel.prices(r, j));
    }
    out << '\n';
  }
}

void write_meta(const std::string& path, const std::vector<AssetMeta>& meta,
                const std::vector<std::string>& header_comments) {
  std::ofstream out(path);
  if (!out) throw ValidationError("io", "cannot write '" + path + "'");
  csv::write_comment_header(out, header_comments);
  out << "ticker,sector,country\n";
  for (const auto& m : meta) out << m.ticker << ',' << m.sector << ',' << m.country << '\n';
}

Eigen::MatrixXd compute_returns(const PricePanel& panel, ReturnKind kind) {
  const auto tp = panel.prices.rows();
  if (tp < 2) throw ValidationError(kModule, "need at least 2 dates to compute returns");
  const auto& p = panel.prices;
  const Eigen::ArrayXXd ratio =
      p.bottomRows(tp - 1).array() / p.topRows(tp - 1).array();
  if (kind == ReturnKind::log) return ratio.log().matrix();
  return (ratio - 1.0).matrix();
}

StandardizedPanel standardize(const Eigen::MatrixXd& raw, std::vector<Date> dates,
                              std::vector<std::string> tickers) {
  const auto t = raw.rows();
  const auto n = raw.cols();
  if (t < 2) throw ValidationError(kModule, "need at least 2 periods to standardize");
  if (static_cast<Eigen::Index>(tickers.size()) != n ||
      static_cast<Eigen::Index>(dates.size()) != t) {
    throw ValidationError(kModule, "index sizes do not match return matrix");
  }
  StandardizedPanel out;
  out.means = raw.colwise().mean().transpose();
  out.returns = raw.rowwise() - out.means.transpose();
  out.vols.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double sd = std::sqrt(out.returns.col(j).squaredNorm() / static_cast<double>(t));
    if (!(sd > 1e-14 * std::abs(out.means(j))) || !std::isfinite(sd)) {
      throw ValidationError(kModule, "constant return series for '" + tickers[j] + "'");
    }
    out.vols(j) = sd;
    out.returns.col(j) /= sd;
  }
  out.dates = std::move(dates);
  out.tickers = std::move(tickers);
  return out;
}

StandardizedPanel standardize(const PricePanel& panel, ReturnKind kind) {
  auto raw = compute_returns(panel, kind);
  std::vector<Date> dates(panel.dates.begin() + 1, panel.dates.end());
  return standardize(raw, std::move(dates), panel.tickers);
}

StandardizedPanel slice_window(const StandardizedPanel& panel, Eigen::Index begin,
                               Eigen::Index end) {
  if (begin < 0 || end > panel.num_periods() || end - begin < 2) {
    throw ValidationError(kModule, "invalid window [" + std::to_string(begin) + ", " +
                                       std::to_string(end) + ")");
  }
  Eigen::MatrixXd raw = panel.returns.middleRows(begin, end - begin) * panel.vols.asDiagonal();
  raw.rowwise() += panel.means.transpose();
  std::vector<Date> dates(panel.dates.begin() + begin, panel.dates.begin() + end);
  return standardize(raw, std::move(dates), panel.tickers);
}

std::vector<StandardizedPanel> rolling_windows(const StandardizedPanel& panel, int width,
                                               int step) {
  if (step < 1) throw ValidationError(kModule, "window step must be >= 1");
  if (width < 2) throw ValidationError(kModule, "window width must be >= 2");
  if (width > panel.num_periods()) {
    throw ValidationError(kModule, "window width " + std::to_string(width) +
                                       " exceeds number of periods " +
                                       std::to_string(panel.num_periods()));
  }
  std::vector<StandardizedPanel> windows;
  for (Eigen::Index b = 0; b + width <= panel.num_periods(); b += step) {
    windows.push_back(slice_window(panel, b, b + width));
  }
  return windows;
}

}  // namespace hpca
