#include "hpca/stat_cluster.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "hpca/error.h"

namespace hpca {

namespace {

constexpr const char* kModule = "stat-cluster";
constexpr double kDegenerateTolerance = 1e-10;

std::vector<LabelShare> top_labels(const std::vector<std::string>& labels, int limit,
                                   double& combined_pct) {
  std::map<std::string, int> counts;
  for (const auto& l : labels) ++counts[l];
  std::vector<LabelShare> ranked;
  for (const auto& [label, count] : counts) ranked.push_back({label, count, 0.0});
  std::sort(ranked.begin(), ranked.end(), [](const LabelShare& a, const LabelShare& b) {
    return a.count != b.count ? a.count > b.count : a.label < b.label;
  });
  if (static_cast<int>(ranked.size()) > limit) ranked.resize(static_cast<std::size_t>(limit));
  int combined = 0;
  for (auto& s : ranked) {
    s.pct = 100.0 * s.count / static_cast<double>(labels.size());
    combined += s.count;
  }
  combined_pct = 100.0 * combined / static_cast<double>(labels.size());
  return ranked;
}

}  // namespace

SignClusters sign_clusters(const EigenSystem& es, int k) {
  const auto n = es.dim();
  if (k < 1) throw ValidationError(kModule, "K must be >= 1");
  if (k + 1 > n) {
    throw ValidationError(kModule, "K = " + std::to_string(k) + " needs at least " +
                                       std::to_string(k + 1) + " assets, have " +
                                       std::to_string(n));
  }

  std::vector<std::string> signatures(static_cast<std::size_t>(n), std::string(k, '+'));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) {
      if (es.eigenvectors(i, j + 1) < 0.0) signatures[static_cast<std::size_t>(i)][j] = '-';
    }
  }

  const std::set<std::string> distinct(signatures.begin(), signatures.end());
  const std::vector<std::string> ordered(distinct.begin(), distinct.end());
  std::vector<std::string> names;
  for (std::size_t c = 0; c < ordered.size(); ++c) names.push_back("Cluster " + std::to_string(c + 1));
  std::vector<int> labels;
  labels.reserve(signatures.size());
  for (const auto& s : signatures) {
    labels.push_back(static_cast<int>(std::lower_bound(ordered.begin(), ordered.end(), s) -
                                      ordered.begin()));
  }

  SignClusters out{ClusterMap(std::move(labels), std::move(names)), std::move(signatures), {}};
  // Eigenvalue pairs touching the band 2..K+1, including its edges.
  for (Eigen::Index j = 0; j <= k && j + 1 < n; ++j) {
    const double a = es.eigenvalues(j), b = es.eigenvalues(j + 1);
    if (std::abs(a - b) <= kDegenerateTolerance) {
      out.warnings.push_back("eigenvalues " + std::to_string(j + 1) + " and " +
                             std::to_string(j + 2) +
                             " coincide; cluster assignment depends on the eigenbasis");
    }
  }
  return out;
}

StatClusterReport cluster_composition(const ClusterMap& map,
                                      const std::vector<std::string>& tickers,
                                      const std::vector<AssetMeta>& meta) {
  if (static_cast<Eigen::Index>(tickers.size()) != map.num_assets()) {
    throw ValidationError(kModule, "ticker list does not match cluster map");
  }
  std::map<std::string, const AssetMeta*> by_ticker;
  for (const auto& m : meta) by_ticker[m.ticker] = &m;
  std::vector<const AssetMeta*> asset_meta;
  for (const auto& t : tickers) {
    const auto it = by_ticker.find(t);
    if (it == by_ticker.end()) throw ValidationError(kModule, "no metadata for '" + t + "'");
    asset_meta.push_back(it->second);
  }

  StatClusterReport report;
  const double universe = static_cast<double>(tickers.size());
  for (int c = 0; c < map.num_clusters(); ++c) {
    ClusterComposition comp;
    comp.name = map.name(c);
    comp.members = map.members(c);
    comp.n = static_cast<int>(comp.members.size());
    comp.pct = 100.0 * comp.n / universe;
    std::vector<std::string> sectors, countries;
    for (auto i : comp.members) {
      sectors.push_back(asset_meta[static_cast<std::size_t>(i)]->sector);
      countries.push_back(asset_meta[static_cast<std::size_t>(i)]->country);
    }
    comp.top_sectors = top_labels(sectors, 3, comp.top_sector_pct);
    comp.top_countries = top_labels(countries, 3, comp.top_country_pct);
    report.clusters.push_back(std::move(comp));
  }
  return report;
}

}  // namespace hpca
