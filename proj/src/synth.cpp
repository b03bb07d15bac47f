#include "hpca/synth.h"

#include <cmath>
#include <cstdio>
#include <random>

#include "hpca/error.h"

namespace hpca {

namespace {

constexpr const char* kModule = "synth";

std::vector<Date> business_days(int count) {
  using namespace std::chrono;
  std::vector<Date> out;
  out.reserve(static_cast<std::size_t>(count));
  sys_days day{year{2010} / January / 4};
  while (static_cast<int>(out.size()) < count) {
    const weekday wd{day};
    if (wd != Saturday && wd != Sunday) out.emplace_back(day);
    day += days{1};
  }
  return out;
}

std::string label(const char* prefix, int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%02d", prefix, index);
  return buf;
}

}  // namespace

SynthData generate_synthetic(const SynthConfig& config) {
  if (config.clusters < 1) throw ValidationError(kModule, "need at least one cluster");
  if (config.periods < 1) throw ValidationError(kModule, "need at least one period");
  if (config.cluster_sizes.empty() ||
      (config.cluster_sizes.size() != 1 &&
       static_cast<int>(config.cluster_sizes.size()) != config.clusters)) {
    throw ValidationError(kModule, "cluster_sizes must have 1 or `clusters` entries");
  }
  if (config.countries < 1) throw ValidationError(kModule, "need at least one country");
  if (config.daily_vol <= 0.0) throw ValidationError(kModule, "daily_vol must be positive");
  if (config.loading_jitter < 0.0 || config.loading_jitter >= 1.0) {
    throw ValidationError(kModule, "loading_jitter must be in [0, 1)");
  }

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> jitter(1.0 - config.loading_jitter,
                                                1.0 + config.loading_jitter);
  std::uniform_real_distribution<double> vol_scale(0.5, 1.5);

  SynthData data;
  std::vector<double> global, local, vols;
  for (int k = 0; k < config.clusters; ++k) {
    const int size = config.cluster_sizes.size() == 1 ? config.cluster_sizes[0]
                                                      : config.cluster_sizes[static_cast<std::size_t>(k)];
    if (size < 1) throw ValidationError(kModule, "cluster sizes must be >= 1");
    for (int j = 0; j < size; ++j) {
      char ticker[32];
      std::snprintf(ticker, sizeof(ticker), "K%02d_%03d", k + 1, j + 1);
      data.meta.push_back({ticker, label("Sector", k + 1),
                           label("Country", k % config.countries + 1)});
      data.cluster_of.push_back(k);
      global.push_back(config.global_strength * jitter(rng));
      local.push_back(config.cluster_strength * jitter(rng));
      vols.push_back(config.daily_vol * vol_scale(rng));
    }
  }

  const auto n = static_cast<Eigen::Index>(data.meta.size());
  const auto t = static_cast<Eigen::Index>(config.periods);
  Eigen::MatrixXd prices(t + 1, n);
  prices.row(0).setConstant(100.0);
  Eigen::VectorXd cluster_draw(config.clusters);
  for (Eigen::Index s = 0; s < t; ++s) {
    const double g = normal(rng);
    for (int k = 0; k < config.clusters; ++k) cluster_draw(k) = normal(rng);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const double shock = global[ui] * g + local[ui] * cluster_draw(data.cluster_of[ui]) +
                           config.noise * normal(rng);
      prices(s + 1, i) = prices(s, i) * std::exp(vols[ui] * shock + config.drift);
    }
  }

  data.prices.dates = business_days(config.periods + 1);
  for (const auto& m : data.meta) data.prices.tickers.push_back(m.ticker);
  data.prices.prices = std::move(prices);
  data.prices.validate();
  return data;
}

}  // namespace hpca
