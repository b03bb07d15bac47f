#include "hpca/pca.h"

#include <cmath>
#include <string>

#include "hpca/error.h"

namespace hpca {

namespace {

constexpr const char* kModule = "pca-engine";
constexpr double kClipThreshold = -1e-10;
constexpr double kSumTieTolerance = 1e-12;

}  // namespace

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  const auto n = values_.rows();
  if (n == 0 || values_.cols() != n) {
    throw ValidationError(kModule, "correlation matrix must be square and nonempty");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(values_(i, i) - 1.0) > 1e-12) {
      throw ValidationError(kModule, "diagonal entry " + std::to_string(i) + " is not 1");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = values_(i, j);
      if (!std::isfinite(v) || std::abs(v) > 1.0 + 1e-12) {
        throw ValidationError(kModule, "entry out of [-1, 1] at (" + std::to_string(i) +
                                           ", " + std::to_string(j) + ")");
      }
      if (std::abs(v - values_(j, i)) > 1e-12) {
        throw ValidationError(kModule, "matrix is not symmetric");
      }
    }
  }
}

CorrelationMatrix correlation_matrix(const StandardizedPanel& panel) {
  const auto t = static_cast<double>(panel.num_periods());
  const auto n = panel.num_assets();
  Eigen::MatrixXd c(n, n);
  c.setZero();
  c.selfadjointView<Eigen::Lower>().rankUpdate(panel.returns.transpose(), 1.0 / t);
  c.triangularView<Eigen::StrictlyUpper>() = c.transpose();
  for (Eigen::Index i = 0; i < n; ++i) c(i, i) = 1.0;
  // Pearson correlations are in [-1, 1]; clamp the rounding excess.
  c = c.cwiseMax(-1.0).cwiseMin(1.0);
  return CorrelationMatrix(std::move(c));
}

void normalize_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
    auto col = vectors.col(k);
    const double sum = col.sum();
    bool flip = false;
    if (std::abs(sum) > kSumTieTolerance) {
      flip = sum < 0.0;
    } else {
      Eigen::Index arg = 0;
      col.cwiseAbs().maxCoeff(&arg);
      flip = col(arg) < 0.0;
    }
    if (flip) col = -col;
  }
}

EigenSystem eigendecompose_symmetric(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericalError(kModule, "symmetric eigensolver did not converge");
  }
  EigenSystem es;
  es.eigenvalues = solver.eigenvalues().reverse();
  es.eigenvectors = solver.eigenvectors().rowwise().reverse();
  normalize_signs(es.eigenvectors);
  return es;
}

EigenSystem eigendecompose(const CorrelationMatrix& c) {
  auto es = eigendecompose_symmetric(c.values());
  for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k) {
    double& lambda = es.eigenvalues(k);
    if (lambda < kClipThreshold) {
      throw NumericalError(kModule, "eigenvalue " + std::to_string(lambda) +
                                        " is negative beyond round-off; input is not PSD");
    }
    if (lambda < 0.0) lambda = 0.0;
  }
  return es;
}

ExplainedVariance explained_variance(const EigenSystem& es) {
  const auto n = static_cast<double>(es.dim());
  ExplainedVariance ev;
  ev.fraction = es.eigenvalues / n;
  ev.cumulative.resize(es.dim());
  double acc = 0.0;
  for (Eigen::Index k = 0; k < es.dim(); ++k) {
    acc += ev.fraction(k);
    ev.cumulative(k) = acc;
  }
  return ev;
}

double diversity_level(const EigenSystem& es) {
  return 1.0 - es.eigenvalues(0) / static_cast<double>(es.dim());
}

Eigenportfolio eigenportfolio(const EigenSystem& es, const Eigen::VectorXd& vols,
                              const StandardizedPanel& panel, int k) {
  const auto n = es.dim();
  if (k < 1 || k > n) {
    throw ValidationError(kModule, "eigenportfolio order " + std::to_string(k) +
                                       " outside [1, " + std::to_string(n) + "]");
  }
  if (vols.size() != n || panel.num_assets() != n) {
    throw ValidationError(kModule, "vols/panel dimension mismatch");
  }
  if ((vols.array() <= 0.0).any()) {
    throw ValidationError(kModule, "vols must be positive");
  }
  Eigenportfolio ep;
  ep.order = k;
  ep.loadings = es.eigenvectors.col(k - 1).cwiseQuotient(vols);
  ep.gross_scale = ep.loadings.cwiseAbs().sum();
  ep.weights = ep.loadings / ep.gross_scale;
  ep.returns = panel.raw_returns() * ep.loadings;
  return ep;
}

std::vector<DatedValue> rolling_diversity(const StandardizedPanel& panel, int width,
                                          int step) {
  std::vector<DatedValue> series;
  for (const auto& w : rolling_windows(panel, width, step)) {
    const auto es = eigendecompose(correlation_matrix(w));
    series.push_back({w.dates.back(), diversity_level(es)});
  }
  return series;
}

}  // namespace hpca
