#include "hpca/hierarchy.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "hpca/error.h"

namespace hpca {

namespace {

constexpr const char* kModule = "hpca";
constexpr double kPsdTolerance = 1e-8;
constexpr double kShareTieTolerance = 1e-12;

CorrelationMatrix sub_correlation(const Eigen::MatrixXd& x) {
  const auto n = x.cols();
  Eigen::MatrixXd c(n, n);
  c.setZero();
  c.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), 1.0 / static_cast<double>(x.rows()));
  c.triangularView<Eigen::StrictlyUpper>() = c.transpose();
  for (Eigen::Index i = 0; i < n; ++i) c(i, i) = 1.0;
  return CorrelationMatrix(c.cwiseMax(-1.0).cwiseMin(1.0));
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::ArrayXd da = a.array() - a.mean();
  const Eigen::ArrayXd db = b.array() - b.mean();
  const double denom = std::sqrt((da * da).sum() * (db * db).sum());
  if (!(denom > 0.0)) throw NumericalError(kModule, "benchmark factor has zero variance");
  return std::clamp((da * db).sum() / denom, -1.0, 1.0);
}

}  // namespace

ClusterMap::ClusterMap(std::vector<int> labels, std::vector<std::string> names)
    : labels_(std::move(labels)), names_(std::move(names)), members_(names_.size()) {
  if (names_.empty()) throw ValidationError(kModule, "cluster map needs at least one cluster");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const int k = labels_[i];
    if (k < 0 || k >= static_cast<int>(names_.size())) {
      throw ValidationError(kModule, "asset " + std::to_string(i) + " has invalid cluster index");
    }
    members_[static_cast<std::size_t>(k)].push_back(static_cast<Eigen::Index>(i));
  }
  for (std::size_t k = 0; k < names_.size(); ++k) {
    if (members_[k].empty()) {
      throw ValidationError(kModule, "cluster '" + names_[k] + "' is empty");
    }
  }
}

ClusterMap ClusterMap::from_labels(const std::vector<std::string>& asset_labels) {
  const std::set<std::string> distinct(asset_labels.begin(), asset_labels.end());
  std::vector<std::string> names(distinct.begin(), distinct.end());
  std::vector<int> labels;
  labels.reserve(asset_labels.size());
  for (const auto& l : asset_labels) {
    const auto it = std::lower_bound(names.begin(), names.end(), l);
    labels.push_back(static_cast<int>(it - names.begin()));
  }
  return ClusterMap(std::move(labels), std::move(names));
}

ClusterMap partition(const std::vector<std::string>& tickers, const std::vector<AssetMeta>& meta,
                     const PartitionOptions& options) {
  std::map<std::string, const AssetMeta*> by_ticker;
  for (const auto& m : meta) by_ticker[m.ticker] = &m;

  std::vector<std::string> labels;
  labels.reserve(tickers.size());
  for (const auto& t : tickers) {
    std::string label;
    if (options.scheme == ClusterScheme::custom) {
      const auto it = options.custom.find(t);
      if (it == options.custom.end()) {
        throw ValidationError(kModule, "no cluster label for '" + t + "'");
      }
      label = it->second;
    } else {
      const auto it = by_ticker.find(t);
      if (it == by_ticker.end()) throw ValidationError(kModule, "no metadata for '" + t + "'");
      label = options.scheme == ClusterScheme::sector ? it->second->sector : it->second->country;
    }
    if (label.empty()) throw ValidationError(kModule, "empty cluster label for '" + t + "'");
    labels.push_back(std::move(label));
  }
  if (labels.empty()) throw ValidationError(kModule, "no assets to partition");

  auto map = ClusterMap::from_labels(labels);
  for (int k = 0; k < map.num_clusters(); ++k) {
    if (static_cast<int>(map.members(k).size()) < options.min_cluster_size) {
      throw ValidationError(kModule, "cluster '" + map.name(k) + "' has " +
                                         std::to_string(map.members(k).size()) +
                                         " assets, below the minimum of " +
                                         std::to_string(options.min_cluster_size));
    }
  }
  return map;
}

ClusterPca cluster_pca(const StandardizedPanel& panel, const ClusterMap& map) {
  if (map.num_assets() != panel.num_assets()) {
    throw ValidationError(kModule, "cluster map covers " + std::to_string(map.num_assets()) +
                                       " assets, panel has " +
                                       std::to_string(panel.num_assets()));
  }
  ClusterPca out;
  out.asset_betas.resize(panel.num_assets());
  out.clusters.reserve(static_cast<std::size_t>(map.num_clusters()));
  for (int k = 0; k < map.num_clusters(); ++k) {
    const auto& members = map.members(k);
    const auto nk = static_cast<Eigen::Index>(members.size());
    Eigen::MatrixXd x(panel.num_periods(), nk);
    for (Eigen::Index j = 0; j < nk; ++j) x.col(j) = panel.returns.col(members[j]);

    ClusterComponent comp;
    if (nk == 1) {
      comp.lambda1 = 1.0;
      comp.vector = Eigen::VectorXd::Ones(1);
      comp.factor = x.col(0);
      comp.betas = Eigen::VectorXd::Ones(1);
    } else {
      const auto es = eigendecompose(sub_correlation(x));
      comp.lambda1 = es.eigenvalues(0);
      comp.vector = es.eigenvectors.col(0);
      comp.factor = x * comp.vector / std::sqrt(comp.lambda1);
      comp.betas = std::sqrt(comp.lambda1) * comp.vector;
    }
    for (Eigen::Index j = 0; j < nk; ++j) out.asset_betas(members[j]) = comp.betas(j);
    out.clusters.push_back(std::move(comp));
  }
  return out;
}

Eigen::MatrixXd inter_cluster_corr(const ClusterPca& pcas) {
  const auto b = static_cast<Eigen::Index>(pcas.clusters.size());
  Eigen::MatrixXd rho = Eigen::MatrixXd::Identity(b, b);
  for (Eigen::Index k = 0; k < b; ++k) {
    for (Eigen::Index l = k + 1; l < b; ++l) {
      const auto& fk = pcas.clusters[static_cast<std::size_t>(k)].factor;
      const auto& fl = pcas.clusters[static_cast<std::size_t>(l)].factor;
      if (fk.size() != fl.size()) {
        throw ValidationError(kModule, "benchmark factors have different lengths");
      }
      rho(k, l) = rho(l, k) = pearson(fk, fl);
    }
  }
  return rho;
}

Eigen::MatrixXd repair_psd(const Eigen::MatrixXd& m) {
  const auto es = eigendecompose_symmetric(m);
  for (double floor = 1e-12; floor <= 1e-6; floor *= 10.0) {
    const Eigen::VectorXd clipped = es.eigenvalues.cwiseMax(floor);
    Eigen::MatrixXd r = es.eigenvectors * clipped.asDiagonal() * es.eigenvectors.transpose();
    const Eigen::VectorXd inv_sd = r.diagonal().cwiseSqrt().cwiseInverse();
    r = inv_sd.asDiagonal() * r * inv_sd.asDiagonal();
    r = 0.5 * (r + r.transpose());
    r.diagonal().setOnes();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> check(r, Eigen::EigenvaluesOnly);
    if (check.info() == Eigen::Success && check.eigenvalues().minCoeff() >= 0.0) return r;
  }
  throw NumericalError(kModule, "PSD repair failed to produce a nonnegative spectrum");
}

HpcaModel assemble_hpca(const CorrelationMatrix& c, const ClusterPca& pcas,
                        const Eigen::MatrixXd& rho, const ClusterMap& map) {
  const auto n = c.dim();
  const auto b = map.num_clusters();
  if (map.num_assets() != n || static_cast<int>(pcas.clusters.size()) != b ||
      pcas.asset_betas.size() != n || rho.rows() != b || rho.cols() != b) {
    throw ValidationError(kModule, "inconsistent dimensions in HPCA assembly");
  }
  Eigen::MatrixXd c_hat(n, n);
  const auto& beta = pcas.asset_betas;
  for (Eigen::Index j = 0; j < n; ++j) {
    const int kj = map.label(j);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int ki = map.label(i);
      c_hat(i, j) = ki == kj ? c(i, j) : beta(i) * beta(j) * rho(ki, kj);
    }
  }

  HpcaModel model{map, pcas, rho, std::move(c_hat), 0.0, false};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spectrum(model.c_hat, Eigen::EigenvaluesOnly);
  if (spectrum.info() != Eigen::Success) {
    throw NumericalError(kModule, "eigensolver failed on the model matrix");
  }
  model.min_eigenvalue = spectrum.eigenvalues().minCoeff();
  if (model.min_eigenvalue < -kPsdTolerance) {
    throw NumericalError(kModule, "model matrix has eigenvalue " +
                                      std::to_string(model.min_eigenvalue) +
                                      "; inputs are inconsistent");
  }
  if (model.min_eigenvalue < 0.0) {
    model.c_hat = repair_psd(model.c_hat);
    model.psd_repaired = true;
  }
  return model;
}

HpcaModel build_hpca(const StandardizedPanel& panel, const ClusterMap& map) {
  const auto c = correlation_matrix(panel);
  auto pcas = cluster_pca(panel, map);
  const auto rho = inter_cluster_corr(pcas);
  return assemble_hpca(c, pcas, rho, map);
}

GaussianCheck verify_gaussian(const Eigen::MatrixXd& c_hat, int samples, std::uint64_t seed) {
  if (samples < 2) throw ValidationError(kModule, "verification needs at least 2 samples");
  const auto n = c_hat.rows();
  // Symmetric square root; tolerates a singular model matrix.
  const auto es = eigendecompose_symmetric(c_hat);
  const Eigen::MatrixXd root =
      es.eigenvectors * es.eigenvalues.cwiseMax(0.0).cwiseSqrt().asDiagonal();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  constexpr int kChunk = 4096;
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd z(n, kChunk);
  for (int done = 0; done < samples; done += kChunk) {
    const int m = std::min(kChunk, samples - done);
    for (int c = 0; c < m; ++c) {
      for (Eigen::Index i = 0; i < n; ++i) z(i, c) = normal(rng);
    }
    const Eigen::MatrixXd x = root * z.leftCols(m);
    cross.selfadjointView<Eigen::Lower>().rankUpdate(x);
    sum += x.rowwise().sum();
  }
  cross.triangularView<Eigen::StrictlyUpper>() = cross.transpose();
  const double count = samples;
  const Eigen::VectorXd mean = sum / count;
  Eigen::MatrixXd cov = cross / count - mean * mean.transpose();
  const Eigen::VectorXd inv_sd = cov.diagonal().cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd corr = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();

  GaussianCheck check;
  check.samples = samples;
  check.max_abs_deviation = (corr - c_hat).cwiseAbs().maxCoeff();
  check.tolerance = 4.0 / std::sqrt(count);
  check.passed = check.max_abs_deviation <= check.tolerance;
  return check;
}

std::string localization_label(const Eigen::VectorXd& v, const ClusterMap& map,
                               double threshold) {
  if (v.size() != map.num_assets()) {
    throw ValidationError(kModule, "vector length does not match cluster map");
  }
  std::vector<double> shares(static_cast<std::size_t>(map.num_clusters()), 0.0);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    shares[static_cast<std::size_t>(map.label(i))] += v(i) * v(i);
  }
  const auto top = std::max_element(shares.begin(), shares.end());
  const double best = *top;
  for (auto it = shares.begin(); it != shares.end(); ++it) {
    if (it != top && *it >= best - kShareTieTolerance) return kMultiCluster;
  }
  if (best < threshold - kShareTieTolerance) return kMultiCluster;
  return map.name(static_cast<int>(top - shares.begin()));
}

}  // namespace hpca
