#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hpca/pca.h"
#include "hpca/returns.h"

namespace hpca {

/// Exact partition of N assets into b nonempty labeled clusters.
/// `labels[i]` is the cluster index of asset i; `names[k]` the label of
/// cluster k.
class ClusterMap {
 public:
  ClusterMap(std::vector<int> labels, std::vector<std::string> names);

  /// Clusters named by the distinct values of `asset_labels`, indexed in
  /// sorted label order.
  static ClusterMap from_labels(const std::vector<std::string>& asset_labels);

  int num_clusters() const noexcept { return static_cast<int>(names_.size()); }
  Eigen::Index num_assets() const noexcept { return static_cast<Eigen::Index>(labels_.size()); }
  int label(Eigen::Index asset) const { return labels_[static_cast<std::size_t>(asset)]; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(int cluster) const { return names_[static_cast<std::size_t>(cluster)]; }

  /// Asset indices of `cluster`, ascending.
  const std::vector<Eigen::Index>& members(int cluster) const {
    return members_[static_cast<std::size_t>(cluster)];
  }

 private:
  std::vector<int> labels_;
  std::vector<std::string> names_;
  std::vector<std::vector<Eigen::Index>> members_;
};

enum class ClusterScheme { sector, country, custom };

struct PartitionOptions {
  ClusterScheme scheme = ClusterScheme::sector;
  /// Used when scheme == custom: ticker -> cluster label.
  std::map<std::string, std::string> custom;
  int min_cluster_size = 1;
};

/// Clusters the assets of `tickers` with the labels found in `meta`.
ClusterMap partition(const std::vector<std::string>& tickers,
                     const std::vector<AssetMeta>& meta,
                     const PartitionOptions& options = {});

/// First principal component of one cluster's correlation block.
struct ClusterComponent {
  double lambda1 = 1.0;
  Eigen::VectorXd vector;    // over the cluster's members
  Eigen::VectorXd factor;    // benchmark series F^k, length T
  Eigen::VectorXd betas;     // sqrt(lambda1) * vector
};

struct ClusterPca {
  std::vector<ClusterComponent> clusters;
  /// beta of each asset with respect to its own cluster's benchmark.
  Eigen::VectorXd asset_betas;
};

struct HpcaModel {
  ClusterMap map;
  ClusterPca pcas;
  Eigen::MatrixXd rho;     // b x b
  Eigen::MatrixXd c_hat;   // N x N
  double min_eigenvalue = 0.0;  // of c_hat before any repair
  bool psd_repaired = false;
};

ClusterPca cluster_pca(const StandardizedPanel& panel, const ClusterMap& map);

/// Sample correlations of the benchmark factors, unit diagonal.
Eigen::MatrixXd inter_cluster_corr(const ClusterPca& pcas);

/// Within-cluster entries copied from C, cross-cluster entries
/// beta_i * beta_j * rho. A minimum eigenvalue in [-1e-8, 0) triggers the
/// clip-and-rescale repair; anything lower raises NumericalError.
HpcaModel assemble_hpca(const CorrelationMatrix& c, const ClusterPca& pcas,
                        const Eigen::MatrixXd& rho, const ClusterMap& map);

/// Full pipeline from a standardized panel.
HpcaModel build_hpca(const StandardizedPanel& panel, const ClusterMap& map);

/// Repairs a near-PSD symmetric matrix: eigenvalues clipped at a small
/// floor, then symmetric rescaling back to unit diagonal.
Eigen::MatrixXd repair_psd(const Eigen::MatrixXd& m);

struct GaussianCheck {
  int samples = 0;
  double max_abs_deviation = 0.0;  // max |sample corr - c_hat| over entries
  double tolerance = 0.0;          // 4 / sqrt(samples)
  bool passed = false;
};

/// Draws `samples` vectors from N(0, c_hat) and compares their sample
/// correlation matrix with c_hat entrywise.
GaussianCheck verify_gaussian(const Eigen::MatrixXd& c_hat, int samples, std::uint64_t seed);

inline constexpr const char* kMultiCluster = "multi-cluster";

/// Name of the cluster with the largest share of the vector's squared
/// weight when that share reaches `threshold` and no other cluster ties
/// it; kMultiCluster otherwise.
std::string localization_label(const Eigen::VectorXd& v, const ClusterMap& map,
                               double threshold = 0.5);

}  // namespace hpca
