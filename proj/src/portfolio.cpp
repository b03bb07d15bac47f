#include "hpca/portfolio.h"

#include <algorithm>
#include <cmath>

#include "hpca/error.h"

namespace hpca {

namespace {

constexpr const char* kModule = "portfolio";

}  // namespace

WeightVector max_sharpe(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                        const MaxSharpeConfig& config) {
  const auto n = mu.size();
  if (sigma.rows() != n || sigma.cols() != n) {
    throw ValidationError(kModule, "covariance shape does not match expected returns");
  }
  if (!mu.allFinite() || !sigma.allFinite()) {
    throw ValidationError(kModule, "non-finite expected returns or covariance");
  }
  if (config.ridge < 0.0) throw ValidationError(kModule, "ridge must be >= 0");
  if (mu.cwiseAbs().maxCoeff() == 0.0) {
    throw NumericalError(kModule, "all expected returns are zero");
  }

  Eigen::MatrixXd a = sigma;
  a.diagonal().array() += config.ridge;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
  if (ldlt.info() != Eigen::Success || !(pivots.minCoeff() > 1e-15 * pivots.maxCoeff()) ||
      !(ldlt.rcond() > 1e-15)) {
    throw NumericalError(kModule, "covariance system is singular; use ridge > 0");
  }
  Eigen::VectorXd w = ldlt.solve(mu);
  if (!w.allFinite() || w.cwiseAbs().sum() == 0.0) {
    throw NumericalError(kModule, "max-Sharpe solve produced degenerate weights");
  }

  WeightVector out;
  if (config.long_only) {
    out.long_only_projected = (w.array() < 0.0).any();
    w = w.cwiseMax(0.0);
    if (w.sum() == 0.0) {
      throw NumericalError(kModule, "long-only projection removed every position");
    }
  }
  out.weights = w / w.cwiseAbs().sum();
  out.gross = out.weights.cwiseAbs().sum();
  out.net = out.weights.sum();
  return out;
}

Eigen::MatrixXd shrink_covariance(const Eigen::MatrixXd& sample, double intensity) {
  const auto n = sample.rows();
  if (sample.cols() != n) throw ValidationError(kModule, "covariance must be square");
  if (!(intensity >= 0.0 && intensity <= 1.0)) {
    throw ValidationError(kModule, "shrinkage intensity must be in [0, 1]");
  }
  const double avg_var = sample.trace() / static_cast<double>(n);
  Eigen::MatrixXd out = (1.0 - intensity) * sample;
  out.diagonal().array() += intensity * avg_var;
  return out;
}

ShrinkageEstimate shrink_covariance_auto(const Eigen::MatrixXd& returns) {
  const auto t = returns.rows();
  const auto n = returns.cols();
  if (t < 2 || n < 1) throw ValidationError(kModule, "shrinkage needs T >= 2 and N >= 1");
  const Eigen::MatrixXd x = returns.rowwise() - returns.colwise().mean();
  const double td = static_cast<double>(t), nd = static_cast<double>(n);

  ShrinkageEstimate est;
  est.sample = x.transpose() * x / td;
  const double m = est.sample.trace() / nd;
  Eigen::MatrixXd dev = est.sample;
  dev.diagonal().array() -= m;
  const double d2 = dev.squaredNorm() / nd;
  // sum_t ||x_t x_t' - S||_F^2 = sum_t ||x_t||^4 - T ||S||_F^2
  const double fourth = x.rowwise().squaredNorm().array().square().sum();
  const double b2_bar = std::max(0.0, fourth - td * est.sample.squaredNorm()) / (td * td * nd);
  est.intensity = d2 > 0.0 ? std::clamp(std::min(b2_bar, d2) / d2, 0.0, 1.0) : 0.0;
  est.covariance = shrink_covariance(est.sample, est.intensity);
  return est;
}

}  // namespace hpca
