#pragma once

#include <string>
#include <vector>

#include "hpca/hierarchy.h"
#include "hpca/pca.h"
#include "hpca/returns.h"

namespace hpca {

struct SignClusters {
  ClusterMap map;
  /// Per asset, one '+' or '-' for each of eigenvectors 2..K+1. Zero
  /// coefficients count as '+'.
  std::vector<std::string> signatures;
  /// Set when neighbouring eigenvalues in the selected band coincide, in
  /// which case the assignment depends on the solver's choice of basis.
  std::vector<std::string> warnings;
};

/// Groups assets by the sign pattern of eigenvectors 2..K+1. Cluster ids
/// follow lexicographic signature order ('+' before '-'); only nonempty
/// signatures become clusters, named "Cluster 1", "Cluster 2", ...
SignClusters sign_clusters(const EigenSystem& es, int k);

struct LabelShare {
  std::string label;
  int count = 0;
  double pct = 0.0;  // of the cluster, in percent
};

struct ClusterComposition {
  std::string name;
  std::vector<Eigen::Index> members;
  int n = 0;
  double pct = 0.0;  // of the universe, in percent
  std::vector<LabelShare> top_sectors;    // up to 3
  double top_sector_pct = 0.0;            // combined
  std::vector<LabelShare> top_countries;  // up to 3
  double top_country_pct = 0.0;
};

struct StatClusterReport {
  std::vector<ClusterComposition> clusters;
};

/// Per-cluster membership and its three most frequent sectors and
/// countries (count descending, label ascending on ties).
StatClusterReport cluster_composition(const ClusterMap& map,
                                      const std::vector<std::string>& tickers,
                                      const std::vector<AssetMeta>& meta);

}  // namespace hpca
