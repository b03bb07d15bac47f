#include "hpca/factor_model.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "hpca/error.h"

namespace hpca {

namespace {

constexpr const char* kModule = "factor-model";

}  // namespace

SpectrumDistribution spectrum_distribution(const Eigen::MatrixXd& returns) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(returns);
  SpectrumDistribution out;
  out.singular_values = svd.singularValues();
  const double total = out.singular_values.sum();
  if (!(total > 0.0)) throw NumericalError(kModule, "all singular values are zero");
  out.probabilities = out.singular_values / total;
  return out;
}

double erank(const Eigen::MatrixXd& returns) {
  const auto dist = spectrum_distribution(returns);
  double entropy = 0.0;
  for (Eigen::Index j = 0; j < dist.probabilities.size(); ++j) {
    const double p = dist.probabilities(j);
    if (p > 0.0) entropy -= p * std::log(p);
  }
  return std::exp(entropy);
}

double erank(const StandardizedPanel& panel) { return erank(panel.returns); }

int select_k(const StandardizedPanel& panel) {
  const auto n = panel.num_assets();
  if (n < 2) throw ValidationError(kModule, "factor selection needs at least 2 assets");
  const auto k = static_cast<long>(std::lround(erank(panel)));
  return static_cast<int>(std::clamp<long>(k, 1, static_cast<long>(n - 1)));
}

Eigen::MatrixXd FactorCovariance::model_correlation() const {
  Eigen::MatrixXd m = loadings * factor_variances.asDiagonal() * loadings.transpose();
  m.diagonal() += zeta2;
  return m;
}

Eigen::MatrixXd FactorCovariance::model_covariance(const Eigen::VectorXd& vols) const {
  if (vols.size() != zeta2.size()) throw ValidationError(kModule, "vols length mismatch");
  return vols.asDiagonal() * model_correlation() * vols.asDiagonal();
}

FactorCovariance truncate_model(const EigenSystem& es, int k) {
  const auto n = es.dim();
  if (k < 1 || k >= n) {
    throw ValidationError(kModule, "factor count " + std::to_string(k) + " outside [1, " +
                                       std::to_string(n - 1) + "]");
  }
  FactorCovariance fc;
  fc.k = k;
  fc.loadings = es.eigenvectors.leftCols(k);
  fc.factor_variances = es.eigenvalues.head(k);
  const auto tail = es.eigenvectors.rightCols(n - k);
  fc.zeta2 = tail.array().square().matrix() * es.eigenvalues.tail(n - k);
  return fc;
}

FactorRegression expected_returns(const StandardizedPanel& panel, const Eigen::MatrixXd& factors,
                                  const ExpectedReturnOptions& options) {
  if (factors.rows() != panel.num_periods()) {
    throw ValidationError(kModule, "factor series length " + std::to_string(factors.rows()) +
                                       " does not match panel length " +
                                       std::to_string(panel.num_periods()));
  }
  if (factors.cols() < 1) throw ValidationError(kModule, "need at least one factor");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(factors);
  qr.setThreshold(1e-10);
  if (qr.rank() < factors.cols()) {
    throw NumericalError(kModule, "factor matrix is rank deficient (rank " +
                                      std::to_string(qr.rank()) + " of " +
                                      std::to_string(factors.cols()) + ")");
  }
  const Eigen::MatrixXd raw = panel.raw_returns();
  FactorRegression reg;
  reg.betas = qr.solve(raw).transpose();
  reg.residuals = raw - factors * reg.betas.transpose();
  const Eigen::VectorXd factor_means = factors.colwise().mean().transpose();
  reg.mu = reg.betas * factor_means;
  if (options.include_residual_mean) reg.mu += reg.residuals.colwise().mean().transpose();
  return reg;
}

}  // namespace hpca
