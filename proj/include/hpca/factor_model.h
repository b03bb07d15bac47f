#pragma once

#include <Eigen/Dense>

#include "hpca/pca.h"
#include "hpca/returns.h"

namespace hpca {

/// Normalized singular-value distribution of a T x N return matrix.
struct SpectrumDistribution {
  Eigen::VectorXd singular_values;  // descending, length Q = min(N, T)
  Eigen::VectorXd probabilities;    // sigma_j / ||sigma||_1
};

SpectrumDistribution spectrum_distribution(const Eigen::MatrixXd& returns);

/// exp of the Shannon entropy of the singular-value distribution.
double erank(const Eigen::MatrixXd& returns);
double erank(const StandardizedPanel& panel);

/// round(eRank) clamped to [1, N - 1].
int select_k(const StandardizedPanel& panel);

/// K-factor truncation of an eigensystem: kept components plus the
/// discarded variance folded into a diagonal.
struct FactorCovariance {
  int k = 0;
  Eigen::MatrixXd loadings;          // N x K, leading eigenvectors
  Eigen::VectorXd factor_variances;  // K leading eigenvalues
  Eigen::VectorXd zeta2;             // idiosyncratic variance per asset

  /// loadings * diag(factor_variances) * loadings^T + diag(zeta2).
  Eigen::MatrixXd model_correlation() const;
  /// diag(vols) * model_correlation() * diag(vols).
  Eigen::MatrixXd model_covariance(const Eigen::VectorXd& vols) const;
};

FactorCovariance truncate_model(const EigenSystem& es, int k);

/// Per-asset least squares of raw returns on factor return series
/// (no intercept).
struct FactorRegression {
  Eigen::MatrixXd betas;      // N x K
  Eigen::VectorXd mu;         // expected return per asset
  Eigen::MatrixXd residuals;  // T x N
};

struct ExpectedReturnOptions {
  /// Add the residual mean to mu, which then equals the sample mean.
  bool include_residual_mean = false;
};

/// `factors` is T x K, in the same period units as the panel's raw
/// returns. mu_i = sum_k beta_ik * mean(factor_k) (+ mean residual).
/// Throws NumericalError when the factor matrix is rank deficient.
FactorRegression expected_returns(const StandardizedPanel& panel, const Eigen::MatrixXd& factors,
                                  const ExpectedReturnOptions& options = {});

struct FactorModel {
  FactorCovariance covariance;
  FactorRegression regression;
};

}  // namespace hpca
