#include <doctest.h>

#include <cmath>
#include <fstream>

#include "hpca/csv.h"
#include "hpca/error.h"
#include "hpca/returns.h"
#include "oracles.h"

using namespace hpca;

namespace {

std::string write_text(const std::string& name, const std::string& text) {
  const auto path = oracle::temp_dir("returns") / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("load_prices reads a complete panel") {
  const auto path = write_text("complete.csv",
                               "date,AAA,BBB\n2020-01-01,10,20\n2020-01-02,11,21\n"
                               "2020-01-03,12,19\n");
  const auto p = load_prices(path, 3);
  CHECK(p.num_dates() == 3);
  CHECK(p.num_assets() == 2);
  CHECK(p.tickers == std::vector<std::string>{"AAA", "BBB"});
  CHECK(p.prices(2, 1) == 19.0);
  CHECK(format_date(p.dates[1]) == "2020-01-02");
}

TEST_CASE("load_prices drops short histories") {
  const auto path = write_text("short.csv",
                               "date,AAA,BBB\n2020-01-01,10,\n2020-01-02,11,21\n"
                               "2020-01-03,12,\n");
  const auto p = load_prices(path, 3);
  CHECK(p.num_assets() == 1);
  CHECK(p.tickers.front() == "AAA");
  CHECK(p.num_dates() == 3);
}

TEST_CASE("load_prices forward-fills and drops leading gaps") {
  const auto path = write_text("gaps.csv",
                               "date,AAA,BBB\n2020-01-01,10,\n2020-01-02,11,21\n"
                               "2020-01-03,,22\n2020-01-06,13,23\n");
  const auto p = load_prices(path, 2);
  REQUIRE(p.num_assets() == 2);
  CHECK(p.num_dates() == 3);
  CHECK(format_date(p.dates.front()) == "2020-01-02");
  CHECK(p.prices(1, 0) == 11.0);
  CHECK(p.prices(2, 0) == 13.0);
}

TEST_CASE("load_prices rejects bad input") {
  CHECK_THROWS_AS(load_prices(write_text("zero.csv", "date,A\n2020-01-01,1\n2020-01-02,0.0\n"), 1),
                  ValidationError);
  CHECK_THROWS_AS(load_prices(write_text("neg.csv", "date,A\n2020-01-01,-1\n"), 1),
                  ValidationError);
  CHECK_THROWS_AS(load_prices("/nonexistent/prices.csv", 1), ValidationError);
  CHECK_THROWS_AS(load_prices(write_text("none.csv", "date,A\n2020-01-01,\n2020-01-02,3\n"), 5),
                  ValidationError);
  CHECK_THROWS_AS(load_prices(write_text("order.csv", "date,A\n2020-01-02,1\n2020-01-01,2\n"), 1),
                  ValidationError);
  CHECK_THROWS_AS(load_prices(write_text("hdr.csv", "day,A\n2020-01-01,1\n"), 1), ValidationError);
  CHECK_THROWS_AS(load_prices(write_text("dup.csv", "date,A,A\n2020-01-01,1,2\n"), 1),
                  ValidationError);
  CHECK_THROWS_AS(load_prices(write_text("width.csv", "date,A,B\n2020-01-01,1\n"), 1),
                  ValidationError);
  CHECK_THROWS_AS(load_prices(write_text("date.csv", "date,A\n2020-13-01,1\n"), 1),
                  ValidationError);
}

TEST_CASE("prices round-trip through CSV with full precision") {
  PricePanel p;
  p.dates = oracle::daily_dates(3);
  p.tickers = {"X", "Y"};
  p.prices.resize(3, 2);
  p.prices << 100.0 / 3.0, 1e-3 * M_PI, 12.5, 7.0, std::exp(1.0), 3.0;
  const auto path = (oracle::temp_dir("roundtrip") / "p.csv").string();
  write_prices(path, p, {"comment"});
  const auto q = load_prices(path, 1);
  CHECK(q.tickers == p.tickers);
  CHECK(q.prices == p.prices);
  CHECK(q.dates == p.dates);
}

TEST_CASE("load_meta reads labels") {
  const auto path = write_text("meta.csv", "ticker,sector,country\nA,Tech,US\nB,Energy,UK\n");
  const auto meta = load_meta(path);
  REQUIRE(meta.size() == 2);
  CHECK(meta[1].sector == "Energy");
  CHECK(meta[1].country == "UK");
  CHECK_THROWS_AS(load_meta(write_text("meta_bad.csv", "ticker,sector\nA,Tech\n")),
                  ValidationError);
  CHECK_THROWS_AS(load_meta(write_text("meta_dup.csv", "ticker,sector,country\nA,T,U\nA,T,U\n")),
                  ValidationError);
}

TEST_CASE("compute_returns") {
  PricePanel p;
  p.dates = oracle::daily_dates(2);
  p.tickers = {"A", "B", "C"};
  p.prices.resize(2, 3);
  p.prices << 100, 100, 1, 100, 110, std::exp(1.0);
  const auto log_r = compute_returns(p, ReturnKind::log);
  const auto simple_r = compute_returns(p, ReturnKind::simple);
  CHECK(log_r.rows() == 1);
  CHECK(log_r(0, 0) == 0.0);
  CHECK(simple_r(0, 1) == doctest::Approx(0.10).epsilon(1e-15));
  CHECK(log_r(0, 2) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("log returns cumulate back to prices") {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd simple = 0.02 * oracle::gaussian(200, 4, rng);
  const auto p = oracle::prices_from_simple(simple);
  const auto r = compute_returns(p, ReturnKind::log);
  for (Eigen::Index j = 0; j < r.cols(); ++j) {
    double cum = 0.0;
    for (Eigen::Index t = 0; t < r.rows(); ++t) {
      cum += r(t, j);
      const double rebuilt = p.prices(0, j) * std::exp(cum);
      CHECK(std::abs(rebuilt / p.prices(t + 1, j) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("standardize examples") {
  Eigen::MatrixXd a(2, 1);
  a << 1, -1;
  auto s = oracle::panel(a);
  CHECK(s.returns(0, 0) == 1.0);
  CHECK(s.returns(1, 0) == -1.0);
  CHECK(s.vols(0) == 1.0);
  CHECK(s.means(0) == 0.0);

  Eigen::MatrixXd b(3, 1);
  b << 2, 4, 6;
  s = oracle::panel(b);
  const double c = std::sqrt(1.5);
  CHECK(s.returns(0, 0) == doctest::Approx(-c).epsilon(1e-14));
  CHECK(std::abs(s.returns(1, 0)) <= 1e-15);
  CHECK(s.returns(2, 0) == doctest::Approx(c).epsilon(1e-14));
  CHECK(s.means(0) == doctest::Approx(4.0));

  Eigen::MatrixXd k(3, 2);
  k << 1, 5, 2, 5, 3, 5;
  try {
    oracle::panel(k);
    FAIL("expected a constant-column error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("A1") != std::string::npos);
  }
}

TEST_CASE("standardized panel invariants and idempotence") {
  std::mt19937_64 rng(11);
  Eigen::MatrixXd raw = 0.01 * oracle::gaussian(300, 6, rng);
  raw.array() += 0.002;
  const auto s = oracle::panel(raw);
  for (Eigen::Index j = 0; j < s.num_assets(); ++j) {
    CHECK(std::abs(s.returns.col(j).mean()) <= 1e-10);
    CHECK(std::abs(s.returns.col(j).squaredNorm() / 300.0 - 1.0) <= 1e-8);
    CHECK(s.vols(j) > 0.0);
  }
  const auto again = standardize(s.returns, s.dates, s.tickers);
  CHECK((again.returns - s.returns).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((s.raw_returns() - raw).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("standardize from prices dates each return by its period end") {
  std::mt19937_64 rng(5);
  const auto p = oracle::prices_from_simple(0.01 * oracle::gaussian(10, 2, rng));
  const auto s = standardize(p);
  CHECK(s.num_periods() == p.num_dates() - 1);
  CHECK(s.dates.front() == p.dates[1]);
  CHECK(s.dates.back() == p.dates.back());
}

TEST_CASE("rolling_windows") {
  std::mt19937_64 rng(7);
  const auto s10 = oracle::panel(oracle::gaussian(10, 3, rng));
  CHECK(rolling_windows(s10, 10, 1).size() == 1);

  const auto s250 = oracle::panel(oracle::gaussian(250, 3, rng));
  const auto windows = rolling_windows(s250, 125, 21);
  CHECK(windows.size() == (250 - 125) / 21 + 1);
  CHECK(windows.size() == 6);
  for (std::size_t w = 0; w < windows.size(); ++w) {
    const auto& win = windows[w];
    CHECK(win.num_periods() == 125);
    CHECK(win.dates.front() == s250.dates[w * 21]);
    for (Eigen::Index j = 0; j < win.num_assets(); ++j) {
      CHECK(std::abs(win.returns.col(j).mean()) <= 1e-10);
      CHECK(std::abs(win.returns.col(j).squaredNorm() / 125.0 - 1.0) <= 1e-8);
    }
    // Re-standardized within the window, so raw returns are preserved.
    CHECK((win.raw_returns() - s250.raw_returns().middleRows(static_cast<Eigen::Index>(w * 21), 125))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
  }

  const auto s5 = oracle::panel(oracle::gaussian(5, 2, rng));
  CHECK_THROWS_AS(rolling_windows(s5, 6, 1), ValidationError);
  CHECK_THROWS_AS(rolling_windows(s5, 3, 0), ValidationError);
}

TEST_CASE("csv helpers") {
  CHECK(csv::split(" a, b ,,c ") == std::vector<std::string>{"a", "b", "", "c"});
  CHECK(csv::parse_number("1.5e-3", "x") == 1.5e-3);
  CHECK_THROWS_AS(csv::parse_number("abc", "x"), ValidationError);
  const double v = 0.1 + 0.2;
  CHECK(std::stod(csv::format_number(v)) == v);
}
