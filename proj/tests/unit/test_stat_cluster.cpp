#include <doctest.h>

#include <set>

#include "hpca/error.h"
#include "hpca/stat_cluster.h"
#include "hpca/synth.h"
#include "oracles.h"

using namespace hpca;

namespace {

void check_partition(const ClusterMap& map, Eigen::Index n) {
  CHECK(map.num_assets() == n);
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (int c = 0; c < map.num_clusters(); ++c) {
    CHECK_FALSE(map.members(c).empty());
    for (auto i : map.members(c)) ++seen[static_cast<std::size_t>(i)];
  }
  for (int s : seen) CHECK(s == 1);
}

EigenSystem synth_system(std::uint64_t seed, int clusters = 6, int size = 8) {
  SynthConfig cfg;
  cfg.clusters = clusters;
  cfg.cluster_sizes = {size};
  cfg.periods = 500;
  cfg.seed = seed;
  return eigendecompose(correlation_matrix(standardize(generate_synthetic(cfg).prices)));
}

}  // namespace

TEST_CASE("second eigenvector splits two blocks") {
  Eigen::MatrixXd c(4, 4);
  c << 1, 0.8, 0.2, 0.2, 0.8, 1, 0.2, 0.2, 0.2, 0.2, 1, 0.8, 0.2, 0.2, 0.8, 1;
  const auto sc = sign_clusters(eigendecompose(CorrelationMatrix(c)), 1);
  CHECK(sc.map.num_clusters() == 2);
  CHECK(sc.signatures == std::vector<std::string>{"+", "+", "-", "-"});
  CHECK(sc.map.members(0) == std::vector<Eigen::Index>{0, 1});
  CHECK(sc.map.members(1) == std::vector<Eigen::Index>{2, 3});
  CHECK(sc.map.name(0) == "Cluster 1");
}

TEST_CASE("zero coefficients take the + sign") {
  EigenSystem es;
  es.eigenvalues = Eigen::Vector3d(1.5, 1.0, 0.5);
  es.eigenvectors = Eigen::Matrix3d::Identity();
  const auto sc = sign_clusters(es, 2);
  // Asset 1 has +1 in eigenvector 2; the others have exact zeros.
  CHECK(sc.signatures == std::vector<std::string>{"++", "++", "++"});
  CHECK(sc.map.num_clusters() == 1);

  es.eigenvectors.col(1) << 0.0, -1.0, 0.0;
  const auto sc2 = sign_clusters(es, 1);
  CHECK(sc2.signatures == std::vector<std::string>{"+", "-", "+"});
  CHECK(sc2.map.label(0) == sc2.map.label(2));
}

TEST_CASE("cluster count bounds, exact cover and refinement") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto es = synth_system(seed);
    const auto n = es.dim();
    std::vector<ClusterMap> maps;
    for (int k = 1; k <= 5; ++k) {
      const auto sc = sign_clusters(es, k);
      check_partition(sc.map, n);
      CHECK(sc.map.num_clusters() <= std::min<Eigen::Index>(Eigen::Index{1} << k, n));
      maps.push_back(sc.map);
    }
    CHECK(maps[3].num_clusters() <= 16);
    for (std::size_t k = 1; k < maps.size(); ++k) {
      for (int c = 0; c < maps[k].num_clusters(); ++c) {
        std::set<int> parents;
        for (auto i : maps[k].members(c)) parents.insert(maps[k - 1].label(i));
        CHECK(parents.size() == 1);
      }
    }
  }
}

TEST_CASE("clusters are ordered by signature and deterministic") {
  const auto es = synth_system(11);
  const auto a = sign_clusters(es, 4);
  const auto b = sign_clusters(es, 4);
  CHECK(a.map.labels() == b.map.labels());
  CHECK(a.signatures == b.signatures);
  std::vector<std::string> first_sig(static_cast<std::size_t>(a.map.num_clusters()));
  for (int c = 0; c < a.map.num_clusters(); ++c)
    first_sig[static_cast<std::size_t>(c)] = a.signatures[static_cast<std::size_t>(a.map.members(c)[0])];
  CHECK(std::is_sorted(first_sig.begin(), first_sig.end()));
  CHECK(std::set<std::string>(first_sig.begin(), first_sig.end()).size() == first_sig.size());
}

TEST_CASE("K out of range") {
  const auto es = eigendecompose(CorrelationMatrix(oracle::equicorrelation(4, 0.3)));
  CHECK_THROWS_AS(sign_clusters(es, 0), ValidationError);
  CHECK_THROWS_AS(sign_clusters(es, 4), ValidationError);
  CHECK_NOTHROW(sign_clusters(es, 3));
}

TEST_CASE("degenerate eigenvalues raise a warning") {
  const auto es = eigendecompose(CorrelationMatrix(oracle::equicorrelation(6, 0.3)));
  CHECK_FALSE(sign_clusters(es, 2).warnings.empty());
  const auto distinct = synth_system(3);
  CHECK(sign_clusters(distinct, 4).warnings.empty());
}

TEST_CASE("composition of a single-sector cluster") {
  const ClusterMap map({0, 0, 0}, {"Cluster 1"});
  const std::vector<AssetMeta> meta{{"A0", "Tech", "US"}, {"A1", "Tech", "UK"}, {"A2", "Tech", "US"}};
  const auto report = cluster_composition(map, oracle::tickers(3), meta);
  REQUIRE(report.clusters.size() == 1);
  const auto& c = report.clusters[0];
  CHECK(c.n == 3);
  CHECK(c.pct == doctest::Approx(100.0));
  REQUIRE(c.top_sectors.size() == 1);
  CHECK(c.top_sectors[0].label == "Tech");
  CHECK(c.top_sector_pct == doctest::Approx(100.0));
  CHECK(c.top_countries[0].label == "US");
  CHECK(c.top_countries[0].count == 2);
  CHECK(c.top_country_pct == doctest::Approx(100.0));

  CHECK_THROWS_AS(cluster_composition(map, oracle::tickers(3), {meta[0], meta[1]}), ValidationError);
}

TEST_CASE("composition percentages cover the universe") {
  SynthConfig cfg;
  cfg.clusters = 5;
  cfg.cluster_sizes = {7};
  cfg.periods = 400;
  cfg.countries = 3;
  const auto data = generate_synthetic(cfg);
  const auto panel = standardize(data.prices);
  const auto sc = sign_clusters(eigendecompose(correlation_matrix(panel)), 4);
  const auto report = cluster_composition(sc.map, panel.tickers, data.meta);
  int total = 0;
  double pct = 0.0;
  for (const auto& c : report.clusters) {
    total += c.n;
    pct += c.pct;
    CHECK(c.top_sectors.size() <= 3);
    CHECK(c.top_sector_pct <= 100.0 + 1e-9);
  }
  CHECK(total == panel.num_assets());
  CHECK(std::abs(pct - 100.0) <= 0.1);
}

TEST_CASE("anticorrelated country blocks separate") {
  std::mt19937_64 rng(8);
  const Eigen::Index t = 1000, half = 10;
  // A common market factor plus a country factor entering with opposite
  // signs, so eigenvector 2 is the country contrast.
  const Eigen::MatrixXd f = oracle::gaussian(t, 2, rng);
  Eigen::MatrixXd raw = oracle::gaussian(t, 2 * half, rng);
  raw += 1.2 * f.col(0).replicate(1, 2 * half);
  raw.leftCols(half) += 0.8 * f.col(1).replicate(1, half);
  raw.rightCols(half) -= 0.8 * f.col(1).replicate(1, half);
  const auto panel = oracle::panel(raw);
  std::vector<AssetMeta> meta;
  for (Eigen::Index i = 0; i < 2 * half; ++i)
    meta.push_back({panel.tickers[static_cast<std::size_t>(i)], "S", i < half ? "US" : "JP"});
  const auto sc = sign_clusters(eigendecompose(correlation_matrix(panel)), 1);
  const auto report = cluster_composition(sc.map, panel.tickers, meta);
  REQUIRE(report.clusters.size() == 2);
  for (const auto& c : report.clusters) CHECK(c.top_countries[0].pct >= 90.0);
}
