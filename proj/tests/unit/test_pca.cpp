#include <doctest.h>

#include <cmath>

#include "hpca/error.h"
#include "hpca/pca.h"
#include "oracles.h"

using namespace hpca;

namespace {

void check_eigen_invariants(const Eigen::MatrixXd& c, const EigenSystem& es) {
  const auto n = es.dim();
  for (Eigen::Index k = 1; k < n; ++k) CHECK(es.eigenvalues(k - 1) >= es.eigenvalues(k));
  CHECK(std::abs(es.eigenvalues.sum() - static_cast<double>(n)) <= 1e-8);
  const Eigen::MatrixXd gram = es.eigenvectors.transpose() * es.eigenvectors;
  CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-8);
  const Eigen::MatrixXd residual =
      c * es.eigenvectors - es.eigenvectors * es.eigenvalues.asDiagonal();
  CHECK(residual.cwiseAbs().maxCoeff() <= 1e-6);
  const Eigen::MatrixXd rebuilt =
      es.eigenvectors * es.eigenvalues.asDiagonal() * es.eigenvectors.transpose();
  CHECK((rebuilt - c).cwiseAbs().maxCoeff() <= 1e-8);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto col = es.eigenvectors.col(k);
    if (std::abs(col.sum()) > 1e-12) {
      CHECK(col.sum() >= 0.0);
    } else {
      Eigen::Index arg = 0;
      col.cwiseAbs().maxCoeff(&arg);
      CHECK(col(arg) > 0.0);
    }
  }
}

}  // namespace

TEST_CASE("correlation_matrix simple cases") {
  Eigen::MatrixXd same(4, 2);
  same << 1, 1, 2, 2, -1, -1, 0.5, 0.5;
  auto c = correlation_matrix(oracle::panel(same));
  CHECK(c(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c(0, 0) == 1.0);

  Eigen::MatrixXd anti(2, 2);
  anti << 1, -1, -1, 1;
  c = correlation_matrix(oracle::panel(anti));
  CHECK(c(0, 1) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("correlation_matrix matches the pairwise Pearson oracle") {
  std::mt19937_64 rng(2024);
  Eigen::MatrixXd raw = oracle::gaussian(50, 4, rng);
  raw.col(1) += 0.5 * raw.col(0);
  raw.col(3) -= 0.8 * raw.col(2);
  const auto c = correlation_matrix(oracle::panel(raw));
  const auto ref = oracle::pearson_matrix(raw);
  CHECK((c.values() - ref).cwiseAbs().maxCoeff() <= 1e-12);
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(c(i, i) == 1.0);
  CHECK(c.values() == c.values().transpose());
}

TEST_CASE("CorrelationMatrix validates its input") {
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
  bad(0, 0) = 1.1;
  CHECK_THROWS_AS(CorrelationMatrix{bad}, ValidationError);
  bad = Eigen::MatrixXd::Identity(3, 3);
  bad(0, 1) = 0.3;
  CHECK_THROWS_AS(CorrelationMatrix{bad}, ValidationError);
  bad(1, 0) = 0.3;
  CHECK_NOTHROW(CorrelationMatrix{bad});
  bad(0, 2) = bad(2, 0) = 1.5;
  CHECK_THROWS_AS(CorrelationMatrix{bad}, ValidationError);
  CHECK_THROWS_AS(CorrelationMatrix{Eigen::MatrixXd::Identity(2, 3)}, ValidationError);
}

TEST_CASE("eigendecompose analytic 2x2") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 0.6, 0.6, 1;
  const auto es = eigendecompose(CorrelationMatrix(m));
  CHECK(es.eigenvalues(0) == doctest::Approx(1.6).epsilon(1e-14));
  CHECK(es.eigenvalues(1) == doctest::Approx(0.4).epsilon(1e-14));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(es.eigenvectors(0, 0) == doctest::Approx(r).epsilon(1e-14));
  CHECK(es.eigenvectors(1, 0) == doctest::Approx(r).epsilon(1e-14));
  // Column sums to zero, so the largest-magnitude entry (first on ties) is positive.
  CHECK(es.eigenvectors(0, 1) == doctest::Approx(r).epsilon(1e-14));
  CHECK(es.eigenvectors(1, 1) == doctest::Approx(-r).epsilon(1e-14));
  check_eigen_invariants(m, es);
}

TEST_CASE("eigendecompose identity") {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(5, 5);
  const auto es = eigendecompose(CorrelationMatrix(id));
  for (Eigen::Index k = 0; k < 5; ++k) CHECK(es.eigenvalues(k) == doctest::Approx(1.0));
  check_eigen_invariants(id, es);
}

TEST_CASE("top eigenpair matches power iteration") {
  std::mt19937_64 rng(8);
  const auto c = oracle::random_correlation(8, rng);
  const auto es = eigendecompose(CorrelationMatrix(c));
  const auto power = oracle::power_iteration(c);
  REQUIRE(power.residual < 1e-12);
  CHECK(std::abs(es.eigenvalues(0) - power.value) <= 1e-8);
  CHECK((es.eigenvectors.col(0) - power.vector).cwiseAbs().maxCoeff() <= 1e-8);
  check_eigen_invariants(c, es);
}

TEST_CASE("eigen invariants on random matrices") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + trial % 12;
    const auto c = oracle::random_correlation(n, rng, trial % 2 ? 3 : -1 + n);
    check_eigen_invariants(c, eigendecompose(CorrelationMatrix(c)));
  }
}

TEST_CASE("variational property") {
  std::mt19937_64 rng(17);
  const auto c = oracle::random_correlation(12, rng);
  const auto es = eigendecompose(CorrelationMatrix(c));
  for (int i = 0; i < 1000; ++i) {
    const Eigen::VectorXd u = oracle::gaussian(12, 1, rng).col(0).normalized();
    CHECK(u.dot(c * u) <= es.eigenvalues(0) + 1e-10);
  }
}

TEST_CASE("sign convention is deterministic") {
  std::mt19937_64 rng(4);
  const auto c = oracle::random_correlation(20, rng);
  const auto a = eigendecompose(CorrelationMatrix(c));
  const auto b = eigendecompose(CorrelationMatrix(c));
  CHECK(a.eigenvectors == b.eigenvectors);
  CHECK(a.eigenvalues == b.eigenvalues);
}

TEST_CASE("first eigenvector of a positive matrix is positive") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const auto c = oracle::random_positive_correlation(3 + trial, rng);
    REQUIRE(c.minCoeff() > 0.0);
    const auto es = eigendecompose(CorrelationMatrix(c));
    CHECK(es.eigenvectors.col(0).minCoeff() > 0.0);
  }
}

TEST_CASE("eigendecompose rejects indefinite input") {
  Eigen::MatrixXd m(3, 3);
  m << 1, 0.9, -0.9, 0.9, 1, 0.9, -0.9, 0.9, 1;
  CHECK_THROWS_AS(eigendecompose(CorrelationMatrix(m)), NumericalError);
}

TEST_CASE("eigendecompose clips round-off negatives") {
  // Rank-deficient: three identical assets.
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(3, 3);
  const auto es = eigendecompose(CorrelationMatrix(ones));
  CHECK(es.eigenvalues.minCoeff() >= 0.0);
  CHECK(es.eigenvalues(0) == doctest::Approx(3.0));
}

TEST_CASE("explained variance") {
  auto ev = explained_variance(eigendecompose(CorrelationMatrix(Eigen::MatrixXd::Identity(4, 4))));
  for (Eigen::Index k = 0; k < 4; ++k) CHECK(ev.fraction(k) == doctest::Approx(0.25));
  CHECK(ev.cumulative(3) == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::MatrixXd m(2, 2);
  m << 1, 0.6, 0.6, 1;
  ev = explained_variance(eigendecompose(CorrelationMatrix(m)));
  CHECK(ev.fraction(0) == doctest::Approx(0.8));
  CHECK(ev.fraction(1) == doctest::Approx(0.2));
  CHECK(ev.cumulative(0) == doctest::Approx(0.8));
  CHECK(std::abs(ev.cumulative(1) - 1.0) <= 1e-8);
}

TEST_CASE("explained variance of a one-factor market near 37 percent") {
  // lambda1 = 1 + (N - 1) rho, so rho = 36/99 gives lambda1 / N = 0.37 at N = 100.
  const double rho = 36.0 / 99.0;
  const auto exact = eigendecompose(CorrelationMatrix(oracle::equicorrelation(100, rho)));
  CHECK(explained_variance(exact).fraction(0) == doctest::Approx(0.37).epsilon(1e-12));

  std::mt19937_64 rng(37);
  const Eigen::Index t = 4000, n = 100;
  const Eigen::MatrixXd f = oracle::gaussian(t, 1, rng);
  const Eigen::MatrixXd e = oracle::gaussian(t, n, rng);
  const Eigen::MatrixXd raw =
      std::sqrt(rho) * f.replicate(1, n) + std::sqrt(1.0 - rho) * e;
  const auto es = eigendecompose(correlation_matrix(oracle::panel(raw)));
  CHECK(std::abs(explained_variance(es).fraction(0) - 0.37) < 0.02);
}

TEST_CASE("diversity level") {
  CHECK(diversity_level(eigendecompose(CorrelationMatrix(Eigen::MatrixXd::Identity(10, 10)))) ==
        doctest::Approx(0.9));
  CHECK(std::abs(diversity_level(eigendecompose(CorrelationMatrix(Eigen::MatrixXd::Ones(6, 6))))) <=
        1e-12);
  CHECK(diversity_level(eigendecompose(CorrelationMatrix(oracle::equicorrelation(4, 0.5)))) ==
        doctest::Approx(0.375).epsilon(1e-12));
}

TEST_CASE("eigenportfolio loadings") {
  std::mt19937_64 rng(12);
  Eigen::MatrixXd raw = oracle::gaussian(100, 2, rng);
  raw.col(1) += raw.col(0);
  const auto p = oracle::panel(raw);
  const auto es = eigendecompose(correlation_matrix(p));

  auto ep = eigenportfolio(es, Eigen::VectorXd::Ones(2), p, 1);
  CHECK(ep.loadings == es.eigenvectors.col(0));

  Eigen::MatrixXd half(2, 2);
  half << 1, 0.5, 0.5, 1;
  const auto es2 = eigendecompose(CorrelationMatrix(half));
  Eigen::VectorXd vols(2);
  vols << 1, 2;
  ep = eigenportfolio(es2, vols, p, 1);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(ep.loadings(0) == doctest::Approx(r).epsilon(1e-14));
  CHECK(ep.loadings(1) == doctest::Approx(r / 2.0).epsilon(1e-14));
  CHECK(ep.weights.cwiseAbs().sum() == doctest::Approx(1.0));
  CHECK(ep.gross_scale == doctest::Approx(1.5 * r));
  CHECK(ep.returns.size() == p.num_periods());
  CHECK((ep.returns - p.raw_returns() * ep.loadings).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(eigenportfolio(es2, vols, p, 0), ValidationError);
  CHECK_THROWS_AS(eigenportfolio(es2, vols, p, 3), ValidationError);
}

TEST_CASE("first eigenportfolio tracks the equal-weight market") {
  std::mt19937_64 rng(1234);
  const Eigen::Index t = 1500, n = 50;
  const Eigen::MatrixXd f = oracle::gaussian(t, 1, rng);
  Eigen::MatrixXd raw = 0.01 * (0.7 * f.replicate(1, n) + 0.7 * oracle::gaussian(t, n, rng));
  std::uniform_real_distribution<double> scale(0.5, 1.5);
  for (Eigen::Index j = 0; j < n; ++j) raw.col(j) *= scale(rng);
  const auto p = oracle::panel(raw);
  const auto ep = eigenportfolio(eigendecompose(correlation_matrix(p)), p.vols, p, 1);
  const Eigen::VectorXd market = raw.rowwise().mean();
  CHECK(oracle::pearson(ep.returns, market) > 0.99);
  CHECK(ep.weights.minCoeff() > 0.0);
}

TEST_CASE("rolling diversity") {
  std::mt19937_64 rng(21);
  const auto single = oracle::panel(oracle::gaussian(40, 3, rng));
  const auto one = rolling_diversity(single, 40, 5);
  REQUIRE(one.size() == 1);
  CHECK(one.front().date == single.dates.back());

  // Low-correlation regime followed by a high-correlation one.
  const Eigen::Index half = 500, n = 30;
  Eigen::MatrixXd raw(2 * half, n);
  for (int regime = 0; regime < 2; ++regime) {
    const double rho = regime == 0 ? 0.1 : 0.7;
    const Eigen::MatrixXd f = oracle::gaussian(half, 1, rng);
    raw.middleRows(regime * half, half) =
        std::sqrt(rho) * f.replicate(1, n) + std::sqrt(1 - rho) * oracle::gaussian(half, n, rng);
  }
  const auto p = oracle::panel(raw);
  const int width = 250, step = 50;
  const auto series = rolling_diversity(p, width, step);
  CHECK(series.size() == (1000 - 250) / 50 + 1);
  // Windows whose span crosses the splice lose diversity at every step.
  for (std::size_t w = 1; w < series.size(); ++w) {
    const auto start = static_cast<Eigen::Index>(w) * step;
    if (start + width > half && start - step < half) {
      CHECK(series[w].value < series[w - 1].value);
    }
  }
  CHECK(series.front().value > 0.8);
  CHECK(series.back().value < 0.4);

  Eigen::MatrixXd flat = oracle::gaussian(60, 2, rng);
  flat.col(0).head(30).setConstant(0.5);
  CHECK_THROWS_AS(rolling_diversity(oracle::panel(flat), 20, 10), ValidationError);
}
