#include "hpca/reports.h"

#include <ostream>

#include "hpca/csv.h"
#include "hpca/error.h"

namespace hpca::reports {

namespace {

using csv::format_number;

std::string join(const std::vector<LabelShare>& shares) {
  std::string out;
  for (const auto& s : shares) {
    if (!out.empty()) out += ';';
    out += s.label;
  }
  return out;
}

}  // namespace

void write_spectrum(std::ostream& out, const EigenSystem& es, const Comments& comments) {
  csv::write_comment_header(out, comments);
  const auto ev = explained_variance(es);
  out << "rank,eigenvalue,fraction,cumulative\n";
  for (Eigen::Index k = 0; k < es.dim(); ++k) {
    out << k + 1 << ',' << format_number(es.eigenvalues(k)) << ',' << format_number(ev.fraction(k))
        << ',' << format_number(ev.cumulative(k)) << '\n';
  }
}

void write_eigenvectors(std::ostream& out, const EigenSystem& es,
                        const std::vector<std::string>& tickers, const ClusterMap& map,
                        const std::vector<int>& orders, const Comments& comments) {
  for (int k : orders) {
    if (k < 1 || k > es.dim()) {
      throw ValidationError("pca-engine", "eigenvector order " + std::to_string(k) + " out of range");
    }
  }
  csv::write_comment_header(out, comments);
  out << "ticker,cluster_label";
  for (int k : orders) out << ",v_" << k;
  out << '\n';
  for (std::size_t i = 0; i < tickers.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    out << tickers[i] << ',' << map.name(map.label(ii));
    for (int k : orders) out << ',' << format_number(es.eigenvectors(ii, k - 1));
    out << '\n';
  }
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m,
                  const std::vector<std::string>& tickers, const Comments& comments) {
  csv::write_comment_header(out, comments);
  out << "ticker";
  for (const auto& t : tickers) out << ',' << t;
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << tickers[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << format_number(m(i, j), 15);
    out << '\n';
  }
}

void write_cluster_report(std::ostream& out, const HpcaModel& model, const Comments& comments) {
  csv::write_comment_header(out, comments);
  out << "cluster,n_assets,lambda1,lambda1_share\n";
  for (int k = 0; k < model.map.num_clusters(); ++k) {
    const auto n = model.map.members(k).size();
    const double lambda = model.pcas.clusters[static_cast<std::size_t>(k)].lambda1;
    out << model.map.name(k) << ',' << n << ',' << format_number(lambda) << ','
        << format_number(lambda / static_cast<double>(n)) << '\n';
  }
}

void write_localization(std::ostream& out, const EigenSystem& pca, const EigenSystem& hpca,
                        const ClusterMap& map, int ranks, double threshold,
                        const Comments& comments) {
  csv::write_comment_header(out, comments);
  const auto n = static_cast<double>(pca.dim());
  out << "rank,pca_eigenvalue,hpca_eigenvalue,pca_pct,hpca_pct,pca_label,hpca_label\n";
  for (Eigen::Index k = 0; k < std::min<Eigen::Index>(ranks, pca.dim()); ++k) {
    out << k + 1 << ',' << format_number(pca.eigenvalues(k)) << ','
        << format_number(hpca.eigenvalues(k)) << ',' << format_number(100.0 * pca.eigenvalues(k) / n)
        << ',' << format_number(100.0 * hpca.eigenvalues(k) / n) << ','
        << localization_label(pca.eigenvectors.col(k), map, threshold) << ','
        << localization_label(hpca.eigenvectors.col(k), map, threshold) << '\n';
  }
}

void write_cluster_map(std::ostream& out, const ClusterMap& map,
                       const std::vector<std::string>& tickers, const Comments& comments) {
  csv::write_comment_header(out, comments);
  out << "ticker,cluster\n";
  for (std::size_t i = 0; i < tickers.size(); ++i) {
    out << tickers[i] << ',' << map.name(map.label(static_cast<Eigen::Index>(i))) << '\n';
  }
}

void write_signatures(std::ostream& out, const SignClusters& clusters,
                      const std::vector<std::string>& tickers, const Comments& comments) {
  csv::write_comment_header(out, comments);
  out << "ticker,signature\n";
  for (std::size_t i = 0; i < tickers.size(); ++i) {
    out << tickers[i] << ',' << clusters.signatures[i] << '\n';
  }
}

void write_composition(std::ostream& out, const StatClusterReport& report,
                       const Comments& comments) {
  csv::write_comment_header(out, comments);
  out << "cluster,n,pct,top_sectors,top_sector_pct,top_countries,top_country_pct\n";
  for (const auto& c : report.clusters) {
    out << c.name << ',' << c.n << ',' << format_number(c.pct, 6) << ',' << join(c.top_sectors)
        << ',' << format_number(c.top_sector_pct, 6) << ',' << join(c.top_countries) << ','
        << format_number(c.top_country_pct, 6) << '\n';
  }
}

void write_dated_series(std::ostream& out, const std::vector<DatedValue>& series,
                        const std::string& value_name, const Comments& comments) {
  csv::write_comment_header(out, comments);
  out << "date," << value_name << '\n';
  for (const auto& p : series) out << format_date(p.date) << ',' << format_number(p.value) << '\n';
}

void write_factor_report(std::ostream& out, const EigenSystem& es, int selected_k,
                         const Comments& comments) {
  csv::write_comment_header(out, comments);
  out << "k,lambda,erank_flag\n";
  for (Eigen::Index k = 0; k < es.dim(); ++k) {
    out << k + 1 << ',' << format_number(es.eigenvalues(k)) << ',' << (k < selected_k ? 1 : 0)
        << '\n';
  }
}

void write_loadings(std::ostream& out, const FactorModel& model,
                    const std::vector<std::string>& tickers, const Comments& comments) {
  csv::write_comment_header(out, comments);
  const auto k = model.regression.betas.cols();
  out << "ticker";
  for (Eigen::Index j = 0; j < k; ++j) out << ",beta_" << j + 1;
  out << ",zeta2,mu\n";
  for (std::size_t i = 0; i < tickers.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    out << tickers[i];
    for (Eigen::Index j = 0; j < k; ++j) out << ',' << format_number(model.regression.betas(ii, j));
    out << ',' << format_number(model.covariance.zeta2(ii)) << ','
        << format_number(model.regression.mu(ii)) << '\n';
  }
}

void write_equity(std::ostream& out, const std::vector<BacktestResult>& results,
                  const Comments& comments) {
  csv::write_comment_header(out, comments);
  out << "date,strategy,equity,turnover\n";
  for (const auto& r : results) {
    for (std::size_t t = 0; t < r.dates.size(); ++t) {
      out << format_date(r.dates[t]) << ',' << to_string(r.strategy) << ','
          << format_number(r.equity[t]) << ',' << format_number(r.turnover[t]) << '\n';
    }
  }
}

void write_stats(std::ostream& out, const std::vector<std::pair<std::string, PerfStats>>& stats,
                 const Comments& comments) {
  csv::write_comment_header(out, comments);
  out << "strategy,cagr,std_dev,sharpe,maxdd,calmar\n";
  for (const auto& [name, s] : stats) {
    out << name << ',' << format_number(s.cagr) << ',' << format_number(s.std_dev) << ','
        << format_number(s.sharpe) << ',' << format_number(s.maxdd) << ','
        << format_number(s.calmar) << '\n';
  }
}

}  // namespace hpca::reports
