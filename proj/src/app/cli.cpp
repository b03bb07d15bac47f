#include "hpca/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hpca/backtest.h"
#include "hpca/csv.h"
#include "hpca/error.h"
#include "hpca/factor_model.h"
#include "hpca/hierarchy.h"
#include "hpca/pca.h"
#include "hpca/reports.h"
#include "hpca/returns.h"
#include "hpca/stat_cluster.h"
#include "hpca/synth.h"

namespace hpca::cli {

namespace {

constexpr const char* kModule = "cli";
namespace fs = std::filesystem;
using nlohmann::json;

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (int x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

std::string join_strings(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return s;
}

void apply_json(RunConfig& cfg, const json& j) {
  if (!j.is_object()) throw ValidationError(kModule, "config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "prices") cfg.prices = value.get<std::string>();
    else if (key == "meta") cfg.meta = value.get<std::string>();
    else if (key == "scheme") cfg.scheme = value.get<std::string>();
    else if (key == "k") cfg.k = value.get<int>();
    else if (key == "window") cfg.window = value.get<int>();
    else if (key == "rebalance") cfg.rebalance = value.get<int>();
    else if (key == "cost_bps") cfg.cost_bps = value.get<double>();
    else if (key == "out") cfg.out = value.get<std::string>();
    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    else if (key == "verify") cfg.verify = value.get<bool>();
    else if (key == "verify_samples") cfg.verify_samples = value.get<int>();
    else if (key == "min_history") cfg.min_history = value.get<int>();
    else if (key == "strategies") cfg.strategies = value.get<std::vector<std::string>>();
    else if (key == "eigvecs") cfg.eigvecs = value.get<std::vector<int>>();
    else if (key == "threshold") cfg.threshold = value.get<double>();
    else if (key == "long_only") cfg.long_only = value.get<bool>();
    else if (key == "ridge") cfg.ridge = value.get<double>();
    else if (key == "synth") {
      auto& s = cfg.synth;
      for (const auto& [sk, sv] : value.items()) {
        if (sk == "clusters") s.clusters = sv.get<int>();
        else if (sk == "cluster_sizes") {
          s.cluster_sizes = sv.is_array() ? sv.get<std::vector<int>>() : std::vector<int>{sv.get<int>()};
        } else if (sk == "periods") s.periods = sv.get<int>();
        else if (sk == "global_strength") s.global_strength = sv.get<double>();
        else if (sk == "cluster_strength") s.cluster_strength = sv.get<double>();
        else if (sk == "noise") s.noise = sv.get<double>();
        else if (sk == "loading_jitter") s.loading_jitter = sv.get<double>();
        else if (sk == "daily_vol") s.daily_vol = sv.get<double>();
        else if (sk == "drift") s.drift = sv.get<double>();
        else if (sk == "countries") s.countries = sv.get<int>();
        else throw ValidationError(kModule, "unknown synth config key '" + sk + "'");
      }
    } else {
      throw ValidationError(kModule, "unknown config key '" + key + "'");
    }
  }
}

void validate(const RunConfig& cfg) {
  if (cfg.command != "synth") {
    if (cfg.prices.empty()) throw ValidationError(kModule, "--prices is required");
    if (!fs::exists(cfg.prices)) {
      throw ValidationError(kModule, "prices file '" + cfg.prices + "' does not exist");
    }
  }
  if (!cfg.meta.empty() && !fs::exists(cfg.meta)) {
    throw ValidationError(kModule, "metadata file '" + cfg.meta + "' does not exist");
  }
  if (!cfg.scheme.empty() && cfg.scheme != "sector" && cfg.scheme != "country" &&
      cfg.scheme != "stat") {
    throw ValidationError(kModule, "scheme must be sector, country or stat");
  }
  if ((cfg.scheme == "sector" || cfg.scheme == "country") && cfg.meta.empty()) {
    throw ValidationError(kModule, "scheme '" + cfg.scheme + "' needs --meta");
  }
  if (cfg.k < 1) throw ValidationError(kModule, "--k must be >= 1");
  if (cfg.window < 2) throw ValidationError(kModule, "--window must be >= 2");
  if (cfg.rebalance < 1) throw ValidationError(kModule, "--rebalance must be >= 1");
  if (cfg.cost_bps < 0.0) throw ValidationError(kModule, "--cost-bps must be >= 0");
}

fs::path output_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out);
  return fs::path(cfg.out) / name;
}

template <typename Writer>
void write_file(const RunConfig& cfg, const std::string& name, std::ostream& log, Writer&& writer) {
  const auto path = output_path(cfg, name);
  std::ofstream f(path);
  if (!f) throw ValidationError("io", "cannot write '" + path.string() + "'");
  writer(f);
  log << "wrote " << path.string() << '\n';
}

struct Inputs {
  StandardizedPanel panel;
  std::vector<AssetMeta> meta;
};

Inputs load_inputs(const RunConfig& cfg) {
  Inputs in;
  in.panel = standardize(load_prices(cfg.prices, cfg.min_history), ReturnKind::log);
  if (!cfg.meta.empty()) in.meta = load_meta(cfg.meta);
  return in;
}

std::vector<std::string> echo_with(const RunConfig& cfg, const StandardizedPanel& panel) {
  auto lines = cfg.echo();
  lines.push_back("n_assets=" + std::to_string(panel.num_assets()));
  lines.push_back("n_periods=" + std::to_string(panel.num_periods()));
  return lines;
}

ClusterMap make_map(const RunConfig& cfg, const Inputs& in, const EigenSystem& es,
                    std::ostream& err) {
  if (cfg.scheme == "stat") {
    auto sc = sign_clusters(es, cfg.k);
    for (const auto& w : sc.warnings) err << "warning: " << w << '\n';
    return sc.map;
  }
  PartitionOptions opts;
  opts.scheme = cfg.scheme == "country" ? ClusterScheme::country : ClusterScheme::sector;
  return partition(in.panel.tickers, in.meta, opts);
}

void cmd_spectrum(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  const auto in = load_inputs(cfg);
  const auto comments = echo_with(cfg, in.panel);
  const auto es = eigendecompose(correlation_matrix(in.panel));
  write_file(cfg, "spectrum_pca.csv", log,
             [&](std::ostream& f) { reports::write_spectrum(f, es, comments); });
  if (!cfg.scheme.empty()) {
    const auto model = build_hpca(in.panel, make_map(cfg, in, es, err));
    const auto es_hat = eigendecompose(CorrelationMatrix(model.c_hat));
    write_file(cfg, "spectrum_hpca.csv", log,
               [&](std::ostream& f) { reports::write_spectrum(f, es_hat, comments); });
  }
  if (cfg.window <= in.panel.num_periods()) {
    const auto series = rolling_diversity(in.panel, cfg.window, cfg.rebalance);
    write_file(cfg, "diversity.csv", log, [&](std::ostream& f) {
      reports::write_dated_series(f, series, "diversity", comments);
    });
  } else {
    err << "warning: window " << cfg.window << " exceeds " << in.panel.num_periods()
        << " periods; diversity series skipped\n";
  }
}

void cmd_cluster(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  const auto in = load_inputs(cfg);
  const auto comments = echo_with(cfg, in.panel);
  const auto es = eigendecompose(correlation_matrix(in.panel));
  const auto sc = sign_clusters(es, cfg.k);
  for (const auto& w : sc.warnings) err << "warning: " << w << '\n';
  write_file(cfg, "clusters.csv", log, [&](std::ostream& f) {
    reports::write_cluster_map(f, sc.map, in.panel.tickers, comments);
  });
  write_file(cfg, "signatures.csv", log, [&](std::ostream& f) {
    reports::write_signatures(f, sc, in.panel.tickers, comments);
  });
  if (!in.meta.empty()) {
    const auto report = cluster_composition(sc.map, in.panel.tickers, in.meta);
    write_file(cfg, "composition.csv", log,
               [&](std::ostream& f) { reports::write_composition(f, report, comments); });
  }
  log << sc.map.num_clusters() << " nonempty clusters from K=" << cfg.k << '\n';
}

int cmd_hpca(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  if (cfg.scheme.empty()) throw ValidationError(kModule, "hpca needs --scheme");
  const auto in = load_inputs(cfg);
  const auto comments = echo_with(cfg, in.panel);
  const auto c = correlation_matrix(in.panel);
  const auto es = eigendecompose(c);
  const auto map = make_map(cfg, in, es, err);
  const auto pcas = cluster_pca(in.panel, map);
  const auto model = assemble_hpca(c, pcas, inter_cluster_corr(pcas), map);
  if (model.psd_repaired) {
    err << "warning: model matrix repaired to PSD (min eigenvalue " << model.min_eigenvalue
        << ")\n";
  }
  const auto es_hat = eigendecompose(CorrelationMatrix(model.c_hat));
  const auto& tickers = in.panel.tickers;
  const int ranks = static_cast<int>(std::min<Eigen::Index>(50, es.dim()));

  write_file(cfg, "empirical_corr.csv", log,
             [&](std::ostream& f) { reports::write_matrix(f, c.values(), tickers, comments); });
  write_file(cfg, "model_corr.csv", log,
             [&](std::ostream& f) { reports::write_matrix(f, model.c_hat, tickers, comments); });
  write_file(cfg, "cluster_report.csv", log,
             [&](std::ostream& f) { reports::write_cluster_report(f, model, comments); });
  write_file(cfg, "localization.csv", log, [&](std::ostream& f) {
    reports::write_localization(f, es, es_hat, map, ranks, cfg.threshold, comments);
  });
  write_file(cfg, "eigenvectors_pca.csv", log, [&](std::ostream& f) {
    reports::write_eigenvectors(f, es, tickers, map, cfg.eigvecs, comments);
  });
  write_file(cfg, "eigenvectors_hpca.csv", log, [&](std::ostream& f) {
    reports::write_eigenvectors(f, es_hat, tickers, map, cfg.eigvecs, comments);
  });

  if (in.panel.num_assets() >= 2) {
    FactorModel fm;
    const int k = select_k(in.panel);
    fm.covariance = truncate_model(es_hat, k);
    const Eigen::MatrixXd loadings =
        in.panel.vols.cwiseInverse().asDiagonal() * fm.covariance.loadings;
    fm.regression = expected_returns(in.panel, in.panel.raw_returns() * loadings);
    write_file(cfg, "factor_report.csv", log,
               [&](std::ostream& f) { reports::write_factor_report(f, es_hat, k, comments); });
    write_file(cfg, "loadings.csv", log,
               [&](std::ostream& f) { reports::write_loadings(f, fm, tickers, comments); });
  }

  if (cfg.verify) {
    const auto check = verify_gaussian(model.c_hat, cfg.verify_samples, cfg.seed);
    write_file(cfg, "verify.csv", log, [&](std::ostream& f) {
      csv::write_comment_header(f, comments);
      f << "samples,max_abs_dev,tolerance,pass\n"
        << check.samples << ',' << csv::format_number(check.max_abs_deviation) << ','
        << csv::format_number(check.tolerance) << ',' << (check.passed ? 1 : 0) << '\n';
    });
    log << "gaussian check: max deviation " << check.max_abs_deviation << " vs tolerance "
        << check.tolerance << (check.passed ? " (pass)" : " (FAIL)") << '\n';
    if (!check.passed) return kNumericalError;
  }
  return kOk;
}

void cmd_backtest(const RunConfig& cfg, std::ostream& log, std::ostream&) {
  const auto prices = load_prices(cfg.prices, cfg.min_history);
  std::vector<AssetMeta> meta;
  if (!cfg.meta.empty()) meta = load_meta(cfg.meta);

  std::vector<std::string> names = cfg.strategies;
  if (names.empty()) {
    names = {"first_eigen", "hpca_stat"};
    if (!meta.empty()) names.push_back("hpca_gics");
    names.insert(names.end(), {"shrinkage", "index_proxy"});
  }

  BacktestConfig bc;
  bc.window = cfg.window;
  bc.rebalance = cfg.rebalance;
  bc.cost_bps = cfg.cost_bps;
  bc.stat_k = cfg.k;
  bc.optimizer = {cfg.long_only, cfg.ridge};

  std::vector<BacktestResult> results;
  std::vector<std::pair<std::string, PerfStats>> stats;
  for (const auto& name : names) {
    const auto strategy = parse_strategy(name);
    if (strategy == Strategy::hpca_gics && !bc.sector_map) {
      if (meta.empty()) throw ValidationError(kModule, "strategy hpca_gics needs --meta");
      PartitionOptions opts;
      opts.scheme = cfg.scheme == "country" ? ClusterScheme::country : ClusterScheme::sector;
      bc.sector_map = partition(prices.tickers, meta, opts);
    }
    results.push_back(backtest(prices, strategy, bc));
    const std::string label =
        strategy == Strategy::index_proxy ? "index_proxy (equal-weight buy-and-hold)" : name;
    stats.emplace_back(name, perf_stats(results.back()));
    log << label << ": final equity " << results.back().equity.back() << '\n';
  }

  auto comments = cfg.echo();
  comments.push_back("n_assets=" + std::to_string(prices.num_assets()));
  comments.push_back("n_dates=" + std::to_string(prices.num_dates()));
  comments.push_back("benchmark=index_proxy is an equal-weight buy-and-hold of the universe");
  write_file(cfg, "equity.csv", log,
             [&](std::ostream& f) { reports::write_equity(f, results, comments); });
  write_file(cfg, "stats.csv", log,
             [&](std::ostream& f) { reports::write_stats(f, stats, comments); });
}

void cmd_synth(const RunConfig& cfg, std::ostream& log) {
  auto sc = cfg.synth;
  sc.seed = cfg.seed;
  const auto data = generate_synthetic(sc);
  const auto comments = cfg.echo();
  const auto prices_path = output_path(cfg, "prices.csv");
  const auto meta_path = output_path(cfg, "meta.csv");
  write_prices(prices_path.string(), data.prices, comments);
  write_meta(meta_path.string(), data.meta, comments);
  log << "wrote " << prices_path.string() << '\n' << "wrote " << meta_path.string() << '\n';
}

}  // namespace

std::vector<std::string> RunConfig::echo() const {
  std::vector<std::string> lines{
      "command=" + command,          "prices=" + prices,
      "meta=" + meta,                "scheme=" + scheme,
      "k=" + std::to_string(k),      "window=" + std::to_string(window),
      "rebalance=" + std::to_string(rebalance),
      "cost_bps=" + csv::format_number(cost_bps, 10),
      "seed=" + std::to_string(seed), "min_history=" + std::to_string(min_history)};
  if (command == "hpca") {
    lines.push_back("eigvecs=" + join_ints(eigvecs));
    lines.push_back("threshold=" + csv::format_number(threshold, 10));
    lines.push_back("verify=" + std::string(verify ? "1" : "0"));
    if (verify) lines.push_back("verify_samples=" + std::to_string(verify_samples));
  }
  if (command == "backtest") {
    lines.push_back("strategies=" + join_strings(strategies));
    lines.push_back("long_only=" + std::string(long_only ? "1" : "0"));
    lines.push_back("ridge=" + csv::format_number(ridge, 10));
  }
  if (command == "synth") {
    std::vector<int> sizes = synth.cluster_sizes;
    lines.push_back("clusters=" + std::to_string(synth.clusters));
    lines.push_back("cluster_sizes=" + join_ints(sizes));
    lines.push_back("periods=" + std::to_string(synth.periods));
    lines.push_back("global_strength=" + csv::format_number(synth.global_strength, 10));
    lines.push_back("cluster_strength=" + csv::format_number(synth.cluster_strength, 10));
    lines.push_back("noise=" + csv::format_number(synth.noise, 10));
    lines.push_back("loading_jitter=" + csv::format_number(synth.loading_jitter, 10));
    lines.push_back("daily_vol=" + csv::format_number(synth.daily_vol, 10));
    lines.push_back("drift=" + csv::format_number(synth.drift, 10));
    lines.push_back("countries=" + std::to_string(synth.countries));
  }
  return lines;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hierarchical PCA toolkit: correlation models, statistical clusters, backtests"};
  app.require_subcommand(1);

  // Every flag writes into `flags`; only the ones actually given are copied
  // over the defaults-plus-config result.
  RunConfig flags;
  std::string config_path;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> bindings;
  const auto bind = [&](CLI::Option* opt, auto member) {
    bindings.emplace_back(opt, [member, &flags](RunConfig& cfg) { cfg.*member = flags.*member; });
    return opt;
  };
  const auto bind_synth = [&](CLI::Option* opt, auto member) {
    bindings.emplace_back(opt, [member, &flags](RunConfig& cfg) {
      cfg.synth.*member = flags.synth.*member;
    });
  };

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file; flags override its values");
    bind(sub->add_option("--prices", flags.prices, "prices CSV (date,<ticker>...)"),
         &RunConfig::prices);
    bind(sub->add_option("--meta", flags.meta, "metadata CSV (ticker,sector,country)"),
         &RunConfig::meta);
    bind(sub->add_option("--scheme", flags.scheme, "cluster scheme: sector, country or stat"),
         &RunConfig::scheme);
    bind(sub->add_option("--k", flags.k, "eigenvectors used for statistical clusters"),
         &RunConfig::k);
    bind(sub->add_option("--window", flags.window, "estimation / rolling window length"),
         &RunConfig::window);
    bind(sub->add_option("--rebalance", flags.rebalance, "rebalance / rolling step in periods"),
         &RunConfig::rebalance);
    bind(sub->add_option("--cost-bps", flags.cost_bps, "proportional cost per unit turnover"),
         &RunConfig::cost_bps);
    bind(sub->add_option("--out", flags.out, "output directory"), &RunConfig::out);
    bind(sub->add_option("--seed", flags.seed, "random seed"), &RunConfig::seed);
    bind(sub->add_flag("--verify", flags.verify, "run the Gaussian sampling check"),
         &RunConfig::verify);
    bind(sub->add_option("--verify-samples", flags.verify_samples, "samples for --verify"),
         &RunConfig::verify_samples);
    bind(sub->add_option("--min-history", flags.min_history, "minimum observations per asset"),
         &RunConfig::min_history);
    bind(sub->add_option("--strategies", flags.strategies, "backtest strategies")->delimiter(','),
         &RunConfig::strategies);
    bind(sub->add_option("--eigvecs", flags.eigvecs, "eigenvector orders to export")
             ->delimiter(','),
         &RunConfig::eigvecs);
    bind(sub->add_option("--threshold", flags.threshold, "localization share threshold"),
         &RunConfig::threshold);
    bind(sub->add_flag("--long-only", flags.long_only, "clip short positions"),
         &RunConfig::long_only);
    bind(sub->add_option("--ridge", flags.ridge, "ridge added to the covariance"),
         &RunConfig::ridge);
  };

  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"spectrum", "PCA/HPCA spectra, explained variance and rolling diversity"},
           {"cluster", "statistical clusters from eigenvector signs"},
           {"hpca", "HPCA model matrix, localization and factor reports"},
           {"backtest", "monthly-rebalanced strategy backtests"},
           {"synth", "generate a synthetic hierarchical price panel"}}) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub);
    subs.push_back(sub);
  }
  auto* synth = subs.back();
  bind_synth(synth->add_option("--clusters", flags.synth.clusters, "number of clusters"),
             &SynthConfig::clusters);
  bind_synth(synth->add_option("--cluster-size", flags.synth.cluster_sizes,
                               "assets per cluster (one value or one per cluster)")
                 ->delimiter(','),
             &SynthConfig::cluster_sizes);
  bind_synth(synth->add_option("--periods", flags.synth.periods, "number of returns"),
             &SynthConfig::periods);
  bind_synth(synth->add_option("--global-strength", flags.synth.global_strength,
                               "global factor loading"),
             &SynthConfig::global_strength);
  bind_synth(synth->add_option("--cluster-strength", flags.synth.cluster_strength,
                               "cluster factor loading"),
             &SynthConfig::cluster_strength);
  bind_synth(synth->add_option("--noise", flags.synth.noise, "idiosyncratic loading"),
             &SynthConfig::noise);
  bind_synth(synth->add_option("--jitter", flags.synth.loading_jitter,
                               "per-asset loading spread in [0, 1)"),
             &SynthConfig::loading_jitter);
  bind_synth(synth->add_option("--vol", flags.synth.daily_vol, "base daily volatility"),
             &SynthConfig::daily_vol);
  bind_synth(synth->add_option("--drift", flags.synth.drift, "daily log drift"),
             &SynthConfig::drift);
  bind_synth(synth->add_option("--countries", flags.synth.countries,
                               "countries assigned round-robin"),
             &SynthConfig::countries);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  try {
    RunConfig cfg;
    for (auto* sub : subs) {
      if (sub->parsed()) cfg.command = sub->get_name();
    }
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ValidationError(kModule, "cannot open config '" + config_path + "'");
      apply_json(cfg, json::parse(f));
    }
    for (const auto& [opt, apply] : bindings) {
      if (opt->count() > 0) apply(cfg);
    }
    validate(cfg);

    if (cfg.command == "spectrum") cmd_spectrum(cfg, out, err);
    else if (cfg.command == "cluster") cmd_cluster(cfg, out, err);
    else if (cfg.command == "hpca") return cmd_hpca(cfg, out, err);
    else if (cfg.command == "backtest") cmd_backtest(cfg, out, err);
    else if (cfg.command == "synth") cmd_synth(cfg, out);
    return kOk;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const json::exception& e) {
    err << "error: [cli] invalid config: " << e.what() << '\n';
    return kValidationError;
  } catch (const fs::filesystem_error& e) {
    err << "error: [io] " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}

}  // namespace hpca::cli
