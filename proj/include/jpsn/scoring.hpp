#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jpsn/baselines.hpp"
#include "jpsn/core.hpp"
#include "jpsn/mcmc.hpp"
#include "jpsn/rng.hpp"

namespace jpsn {

struct HoldoutEntry {
  std::size_t t = 0;
  bool circular = false;
  std::size_t index = 0;
  double truth = 0.0;
};

struct HoldoutPlan {
  double fraction = 0.0;
  std::vector<HoldoutEntry> entries;
  /// Set when the requested fraction masks nothing.
  std::optional<std::string> warning;
};

struct HoldoutSplit {
  PolyCylDataset masked;
  HoldoutPlan plan;
};

/// Masks round(fraction * observed entries) scalar entries chosen uniformly
/// at random without replacement.
HoldoutSplit holdout_split(const PolyCylDataset& data, double fraction, Rng& rng);

double crps_circular(Angle truth, std::span<const double> draws);
double crps_linear(double truth, std::span<const double> draws);

/// Maps a masked dataset to predictive values for its masked entries:
/// result[k][e] for draw k and entry e of missing_entries(masked).
using Predictor = std::function<std::vector<std::vector<double>>(const PolyCylDataset&)>;

struct ModelFitter {
  std::string name;
  Predictor predict;
};

struct EntryScore {
  HoldoutEntry entry;
  double crps = 0.0;
};

struct ScoreRow {
  std::string model;
  /// NaN when no entry of that kind was held out.
  double crps_circular = 0.0;
  double crps_linear = 0.0;
  std::size_t n_circular = 0;
  std::size_t n_linear = 0;
  std::vector<EntryScore> entries;
};

struct ScoreTable {
  std::vector<ScoreRow> rows;
};

/// Fits every model on the masked data and scores its predictions of the
/// held-out entries. Errors keep their type and gain the model name.
/// With `concurrent`, each fitter runs on its own thread; results are identical.
ScoreTable compare_models(const HoldoutSplit& split, const std::vector<ModelFitter>& fitters,
                          bool concurrent = false);

ModelFitter make_jpsn_fitter(const ChainConfig& config, std::optional<PriorSpec> prior = std::nullopt);

/// Empty blocks means unit blocks.
ModelFitter make_cyl_jpsn_fitter(const ChainConfig& config, std::vector<CylBlock> blocks = {},
                                 std::optional<PriorSpec> prior = std::nullopt);

/// One Abe-Ley fit per unit block; block k uses stream k under seed.
ModelFitter make_abeley_fitter(const MhConfig& config, std::uint64_t seed, AbeLeyPrior prior = {},
                               std::vector<CylBlock> blocks = {});

/// Predictive values of a cylindrical fit, in missing_entries(data) order.
std::vector<std::vector<double>> cylindrical_predictions(const PolyCylDataset& data,
                                                         const std::vector<CylBlock>& blocks,
                                                         const std::vector<std::vector<std::vector<double>>>& per_block);

}  // namespace jpsn
