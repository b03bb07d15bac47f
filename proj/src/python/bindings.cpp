#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hpca/backtest.h"
#include "hpca/error.h"
#include "hpca/factor_model.h"
#include "hpca/hierarchy.h"
#include "hpca/pca.h"
#include "hpca/portfolio.h"
#include "hpca/returns.h"
#include "hpca/stat_cluster.h"
#include "hpca/synth.h"

namespace py = pybind11;
using namespace hpca;

namespace {

std::vector<std::string> format_dates(const std::vector<Date>& dates) {
  std::vector<std::string> out;
  out.reserve(dates.size());
  for (const auto& d : dates) out.push_back(format_date(d));
  return out;
}

std::vector<Date> parse_dates(const std::vector<std::string>& dates, std::size_t rows) {
  if (dates.empty()) {
    std::vector<Date> out;
    out.reserve(rows);
    auto day = std::chrono::sys_days{std::chrono::year{2000} / 1 / 1};
    for (std::size_t i = 0; i < rows; ++i) out.emplace_back(day + std::chrono::days{i});
    return out;
  }
  std::vector<Date> out;
  out.reserve(dates.size());
  for (const auto& d : dates) out.push_back(parse_date(d));
  return out;
}

std::vector<std::string> default_tickers(const std::vector<std::string>& tickers,
                                         Eigen::Index cols) {
  if (!tickers.empty()) return tickers;
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < cols; ++i) out.push_back("A" + std::to_string(i));
  return out;
}

ClusterMap map_from_labels(const std::vector<std::string>& labels) {
  return ClusterMap::from_labels(labels);
}

StandardizedPanel panel_from_returns(const Eigen::MatrixXd& returns,
                                     const std::vector<std::string>& tickers) {
  return standardize(returns, parse_dates({}, static_cast<std::size_t>(returns.rows())),
                     default_tickers(tickers, returns.cols()));
}

py::dict hpca_to_dict(const HpcaModel& m) {
  py::dict d;
  d["c_hat"] = m.c_hat;
  d["rho"] = m.rho;
  d["betas"] = m.pcas.asset_betas;
  d["min_eigenvalue"] = m.min_eigenvalue;
  d["psd_repaired"] = m.psd_repaired;
  d["cluster_names"] = m.map.names();
  d["labels"] = m.map.labels();
  std::vector<double> lambdas;
  for (const auto& c : m.pcas.clusters) lambdas.push_back(c.lambda1);
  d["cluster_lambda1"] = lambdas;
  return d;
}

}  // namespace

PYBIND11_MODULE(_hpca, m) {
  m.doc() = "Hierarchical PCA for equity correlation matrices";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  py::class_<PricePanel>(m, "PricePanel")
      .def_property_readonly("dates", [](const PricePanel& p) { return format_dates(p.dates); })
      .def_readonly("tickers", &PricePanel::tickers)
      .def_readonly("prices", &PricePanel::prices)
      .def_property_readonly("num_dates", &PricePanel::num_dates)
      .def_property_readonly("num_assets", &PricePanel::num_assets);

  py::class_<StandardizedPanel>(m, "StandardizedPanel")
      .def_property_readonly("dates",
                             [](const StandardizedPanel& p) { return format_dates(p.dates); })
      .def_readonly("tickers", &StandardizedPanel::tickers)
      .def_readonly("returns", &StandardizedPanel::returns)
      .def_readonly("means", &StandardizedPanel::means)
      .def_readonly("vols", &StandardizedPanel::vols)
      .def("raw_returns", &StandardizedPanel::raw_returns);

  py::class_<AssetMeta>(m, "AssetMeta")
      .def(py::init<>())
      .def_readwrite("ticker", &AssetMeta::ticker)
      .def_readwrite("sector", &AssetMeta::sector)
      .def_readwrite("country", &AssetMeta::country);

  py::class_<EigenSystem>(m, "EigenSystem")
      .def_readonly("eigenvalues", &EigenSystem::eigenvalues)
      .def_readonly("eigenvectors", &EigenSystem::eigenvectors);

  m.def(
      "make_price_panel",
      [](const Eigen::MatrixXd& prices, const std::vector<std::string>& dates,
         const std::vector<std::string>& tickers) {
        PricePanel p;
        p.prices = prices;
        p.dates = parse_dates(dates, static_cast<std::size_t>(prices.rows()));
        p.tickers = default_tickers(tickers, prices.cols());
        p.validate();
        return p;
      },
      py::arg("prices"), py::arg("dates") = std::vector<std::string>{},
      py::arg("tickers") = std::vector<std::string>{});
  m.def("load_prices", &load_prices, py::arg("path"), py::arg("min_history") = 2);
  m.def("load_meta", &load_meta, py::arg("path"));
  m.def(
      "standardize",
      [](const PricePanel& p, const std::string& kind) {
        if (kind != "log" && kind != "simple") {
          throw ValidationError("returns-core", "return kind must be log or simple");
        }
        return standardize(p, kind == "log" ? ReturnKind::log : ReturnKind::simple);
      },
      py::arg("panel"), py::arg("kind") = "log");
  m.def("standardize_returns", &panel_from_returns, py::arg("returns"),
        py::arg("tickers") = std::vector<std::string>{});

  m.def(
      "correlation_matrix",
      [](const StandardizedPanel& p) { return correlation_matrix(p).values(); },
      py::arg("panel"));
  m.def(
      "eigendecompose",
      [](const Eigen::MatrixXd& c) { return eigendecompose(CorrelationMatrix(c)); },
      py::arg("correlation"));
  m.def(
      "explained_variance",
      [](const EigenSystem& es) {
        const auto ev = explained_variance(es);
        return py::make_tuple(ev.fraction, ev.cumulative);
      },
      py::arg("eigensystem"));
  m.def("diversity_level", &diversity_level, py::arg("eigensystem"));

  m.def(
      "build_hpca",
      [](const StandardizedPanel& p, const std::vector<std::string>& labels) {
        return hpca_to_dict(build_hpca(p, map_from_labels(labels)));
      },
      py::arg("panel"), py::arg("labels"));
  m.def(
      "partition_labels",
      [](const std::vector<std::string>& tickers, const std::vector<AssetMeta>& meta,
         const std::string& scheme) {
        PartitionOptions opt;
        if (scheme == "sector") {
          opt.scheme = ClusterScheme::sector;
        } else if (scheme == "country") {
          opt.scheme = ClusterScheme::country;
        } else {
          throw ValidationError("hpca", "scheme must be sector or country");
        }
        const auto map = partition(tickers, meta, opt);
        std::vector<std::string> out;
        for (Eigen::Index i = 0; i < map.num_assets(); ++i) out.push_back(map.name(map.label(i)));
        return out;
      },
      py::arg("tickers"), py::arg("meta"), py::arg("scheme") = "sector");
  m.def(
      "verify_gaussian",
      [](const Eigen::MatrixXd& c_hat, int samples, std::uint64_t seed) {
        const auto g = verify_gaussian(c_hat, samples, seed);
        py::dict d;
        d["samples"] = g.samples;
        d["max_abs_deviation"] = g.max_abs_deviation;
        d["tolerance"] = g.tolerance;
        d["passed"] = g.passed;
        return d;
      },
      py::arg("c_hat"), py::arg("samples") = 200000, py::arg("seed") = 42);

  m.def(
      "sign_clusters",
      [](const EigenSystem& es, int k) {
        const auto sc = sign_clusters(es, k);
        return py::make_tuple(sc.map.labels(), sc.signatures);
      },
      py::arg("eigensystem"), py::arg("k"));

  m.def(
      "erank", [](const Eigen::MatrixXd& returns) { return erank(returns); },
      py::arg("returns"));
  m.def(
      "select_k", [](const Eigen::MatrixXd& returns) { return select_k(panel_from_returns(returns, {})); },
      py::arg("returns"));
  m.def(
      "truncate_model",
      [](const EigenSystem& es, int k) {
        const auto f = truncate_model(es, k);
        py::dict d;
        d["k"] = f.k;
        d["loadings"] = f.loadings;
        d["factor_variances"] = f.factor_variances;
        d["zeta2"] = f.zeta2;
        d["model_correlation"] = f.model_correlation();
        return d;
      },
      py::arg("eigensystem"), py::arg("k"));

  m.def(
      "max_sharpe",
      [](const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma, bool long_only, double ridge) {
        return max_sharpe(mu, sigma, MaxSharpeConfig{long_only, ridge}).weights;
      },
      py::arg("mu"), py::arg("sigma"), py::arg("long_only") = false, py::arg("ridge") = 1e-6);

  py::class_<BacktestResult>(m, "BacktestResult")
      .def_property_readonly("strategy",
                             [](const BacktestResult& r) { return to_string(r.strategy); })
      .def_property_readonly("dates", [](const BacktestResult& r) { return format_dates(r.dates); })
      .def_readonly("equity", &BacktestResult::equity)
      .def_readonly("turnover", &BacktestResult::turnover);

  m.def(
      "backtest",
      [](const PricePanel& p, const std::string& strategy, int window, int rebalance,
         double cost_bps, int stat_k, std::optional<std::vector<std::string>> sector_labels,
         bool long_only, double ridge) {
        BacktestConfig cfg;
        cfg.window = window;
        cfg.rebalance = rebalance;
        cfg.cost_bps = cost_bps;
        cfg.stat_k = stat_k;
        cfg.optimizer = MaxSharpeConfig{long_only, ridge};
        if (sector_labels) cfg.sector_map = map_from_labels(*sector_labels);
        return backtest(p, parse_strategy(strategy), cfg);
      },
      py::arg("panel"), py::arg("strategy"), py::arg("window") = 125, py::arg("rebalance") = 21,
      py::arg("cost_bps") = 5.0, py::arg("stat_k") = 4, py::arg("sector_labels") = py::none(),
      py::arg("long_only") = false, py::arg("ridge") = 1e-6);
  m.def(
      "perf_stats",
      [](const std::vector<double>& equity, int periods_per_year) {
        const auto s = perf_stats(equity, periods_per_year);
        py::dict d;
        d["cagr"] = s.cagr;
        d["std_dev"] = s.std_dev;
        d["sharpe"] = s.sharpe;
        d["maxdd"] = s.maxdd;
        d["calmar"] = s.calmar;
        return d;
      },
      py::arg("equity"), py::arg("periods_per_year") = 252);

  m.def(
      "generate_synthetic",
      [](int clusters, std::vector<int> cluster_sizes, int periods, std::uint64_t seed,
         double global_strength, double cluster_strength, double noise) {
        SynthConfig cfg;
        cfg.clusters = clusters;
        cfg.cluster_sizes = std::move(cluster_sizes);
        cfg.periods = periods;
        cfg.seed = seed;
        cfg.global_strength = global_strength;
        cfg.cluster_strength = cluster_strength;
        cfg.noise = noise;
        auto data = generate_synthetic(cfg);
        std::vector<std::string> sectors;
        for (const auto& a : data.meta) sectors.push_back(a.sector);
        return py::make_tuple(data.prices, data.meta, sectors);
      },
      py::arg("clusters") = 3, py::arg("cluster_sizes") = std::vector<int>{10},
      py::arg("periods") = 1000, py::arg("seed") = 42, py::arg("global_strength") = 0.6,
      py::arg("cluster_strength") = 0.5, py::arg("noise") = 0.6);
}
