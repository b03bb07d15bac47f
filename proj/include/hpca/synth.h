#pragma once

#include <cstdint>
#include <vector>

#include "hpca/returns.h"

namespace hpca {

/// Hierarchical factor model for synthetic log returns:
///
///   r_{t,i} = vol_i * (g_i * G_t + c_i * F^{k(i)}_t + e * Z_{t,i}) + drift
///
/// with independent standard normal G (global), F^k (one per cluster) and
/// Z (idiosyncratic). Loadings g_i and c_i are the configured strengths
/// scaled by a per-asset factor drawn from [1 - jitter, 1 + jitter].
struct SynthConfig {
  int clusters = 3;
  /// Assets per cluster; one entry per cluster, or a single entry used for
  /// every cluster.
  std::vector<int> cluster_sizes{10};
  int periods = 1000;  // number of returns; prices have periods + 1 rows
  double global_strength = 0.6;
  double cluster_strength = 0.5;
  double noise = 0.6;
  double loading_jitter = 0.2;
  double daily_vol = 0.01;
  double drift = 0.0003;
  int countries = 2;  // countries assigned round-robin over clusters
  std::uint64_t seed = 42;
};

struct SynthData {
  PricePanel prices;
  std::vector<AssetMeta> meta;
  std::vector<int> cluster_of;  // generating cluster per asset
};

/// Deterministic for a fixed config (including seed) on a given build.
SynthData generate_synthetic(const SynthConfig& config);

}  // namespace hpca
