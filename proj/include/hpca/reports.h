#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hpca/backtest.h"
#include "hpca/factor_model.h"
#include "hpca/hierarchy.h"
#include "hpca/pca.h"
#include "hpca/stat_cluster.h"

// Plot-ready CSV writers. Every writer emits the `# ...` comment lines
// first, then a header row.
namespace hpca::reports {

using Comments = std::vector<std::string>;

/// rank,eigenvalue,fraction,cumulative
void write_spectrum(std::ostream& out, const EigenSystem& es, const Comments& comments = {});

/// ticker,cluster_label,v_<k>... for the requested 1-based orders.
void write_eigenvectors(std::ostream& out, const EigenSystem& es,
                        const std::vector<std::string>& tickers, const ClusterMap& map,
                        const std::vector<int>& orders, const Comments& comments = {});

/// Square matrix with a ticker header row and column, 15 significant digits.
void write_matrix(std::ostream& out, const Eigen::MatrixXd& m,
                  const std::vector<std::string>& tickers, const Comments& comments = {});

/// cluster,n_assets,lambda1,lambda1_share
void write_cluster_report(std::ostream& out, const HpcaModel& model,
                          const Comments& comments = {});

/// rank,pca_eigenvalue,hpca_eigenvalue,pca_pct,hpca_pct,pca_label,hpca_label
void write_localization(std::ostream& out, const EigenSystem& pca, const EigenSystem& hpca,
                        const ClusterMap& map, int ranks, double threshold,
                        const Comments& comments = {});

/// ticker,cluster
void write_cluster_map(std::ostream& out, const ClusterMap& map,
                       const std::vector<std::string>& tickers, const Comments& comments = {});

/// ticker,signature
void write_signatures(std::ostream& out, const SignClusters& clusters,
                      const std::vector<std::string>& tickers, const Comments& comments = {});

/// cluster,n,pct,top_sectors,top_sector_pct,top_countries,top_country_pct
/// (label lists joined with ';').
void write_composition(std::ostream& out, const StatClusterReport& report,
                       const Comments& comments = {});

/// date,value
void write_dated_series(std::ostream& out, const std::vector<DatedValue>& series,
                        const std::string& value_name, const Comments& comments = {});

/// k,lambda,erank_flag (flag = 1 for the selected components)
void write_factor_report(std::ostream& out, const EigenSystem& es, int selected_k,
                         const Comments& comments = {});

/// ticker,beta_1..beta_K,zeta2,mu
void write_loadings(std::ostream& out, const FactorModel& model,
                    const std::vector<std::string>& tickers, const Comments& comments = {});

/// date,strategy,equity,turnover
void write_equity(std::ostream& out, const std::vector<BacktestResult>& results,
                  const Comments& comments = {});

/// strategy,cagr,std_dev,sharpe,maxdd,calmar
void write_stats(std::ostream& out, const std::vector<std::pair<std::string, PerfStats>>& stats,
                 const Comments& comments = {});

}  // namespace hpca::reports
