#pragma once

#include <vector>

#include <Eigen/Dense>

#include "hpca/date.h"
#include "hpca/returns.h"

namespace hpca {

/// Symmetric matrix with unit diagonal and entries in [-1, 1].
class CorrelationMatrix {
 public:
  /// Validates the invariants; throws ValidationError on violation.
  explicit CorrelationMatrix(Eigen::MatrixXd values);

  const Eigen::MatrixXd& values() const noexcept { return values_; }
  Eigen::Index dim() const noexcept { return values_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }

 private:
  Eigen::MatrixXd values_;
};

/// Eigenvalues in descending order with matching orthonormal eigenvectors
/// (columns). Every column is sign-normalized: its entries sum to a
/// nonnegative number, and when the sum vanishes the largest-magnitude
/// entry is positive.
struct EigenSystem {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  Eigen::Index dim() const { return eigenvalues.size(); }
};

struct ExplainedVariance {
  Eigen::VectorXd fraction;
  Eigen::VectorXd cumulative;
};

struct Eigenportfolio {
  int order = 1;
  Eigen::VectorXd loadings;    // V^(k)_i / sigma_i
  Eigen::VectorXd weights;     // loadings scaled to gross exposure 1
  double gross_scale = 1.0;    // sum |loadings|
  Eigen::VectorXd returns;     // raw returns . loadings, length T
};

struct DatedValue {
  Date date;
  double value;
};

/// (1/T) R^T R for the T x N standardized panel.
CorrelationMatrix correlation_matrix(const StandardizedPanel& panel);

/// Symmetric eigendecomposition with the deterministic sign rule.
/// Eigenvalues in [-1e-10, 0) are clipped to 0; anything lower raises
/// NumericalError.
EigenSystem eigendecompose(const CorrelationMatrix& c);

/// Same solver and sign rule for any symmetric matrix, without the
/// correlation-specific checks.
EigenSystem eigendecompose_symmetric(const Eigen::MatrixXd& m);

/// Applies the sign rule in place to every column.
void normalize_signs(Eigen::MatrixXd& vectors);

ExplainedVariance explained_variance(const EigenSystem& es);

/// 1 - lambda_1 / N.
double diversity_level(const EigenSystem& es);

/// k-th eigenportfolio (k is 1-based). Loadings are V^(k) divided by the
/// per-asset vols; the return series uses the panel's raw returns.
Eigenportfolio eigenportfolio(const EigenSystem& es, const Eigen::VectorXd& vols,
                              const StandardizedPanel& panel, int k);

/// Diversity level of each rolling window, dated by the window's last date.
std::vector<DatedValue> rolling_diversity(const StandardizedPanel& panel, int width,
                                          int step);

}  // namespace hpca
