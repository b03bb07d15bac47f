#pragma once

#include <Eigen/Dense>

namespace hpca {

struct WeightVector {
  Eigen::VectorXd weights;
  double gross = 0.0;  // sum |w|
  double net = 0.0;    // sum w
  bool long_only_projected = false;  // negative entries were clipped
};

struct MaxSharpeConfig {
  bool long_only = false;
  double ridge = 1e-6;
};

/// w proportional to (sigma + ridge * I)^-1 mu, scaled to gross exposure 1.
/// With long_only, negative entries are clipped to zero and the rest
/// renormalized.
WeightVector max_sharpe(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                        const MaxSharpeConfig& config = {});

/// (1 - delta) * sample + delta * (trace / N) * I, delta in [0, 1].
Eigen::MatrixXd shrink_covariance(const Eigen::MatrixXd& sample, double intensity);

struct ShrinkageEstimate {
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd sample;  // 1/T sample covariance
  double intensity = 0.0;
};

/// Ledoit-Wolf shrinkage toward the scaled identity with the analytic
/// intensity estimated from the T x N return matrix.
ShrinkageEstimate shrink_covariance_auto(const Eigen::MatrixXd& returns);

}  // namespace hpca
