#include "jpsn/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <thread>
#include <tuple>

#include "jpsn/errors.hpp"

namespace jpsn {

namespace {

using EntryKey = std::tuple<std::size_t, bool, std::size_t>;

template <class F>
auto annotate(const std::string& model, F&& f) {
  const auto tag = [&](const std::exception& e) { return model + ": " + e.what(); };
  try {
    return f();
  } catch (const ParseError& e) {
    throw ParseError(tag(e), 0);
  } catch (const DomainError& e) {
    throw DomainError(tag(e));
  } catch (const NumericalError& e) {
    throw NumericalError(tag(e));
  } catch (const InsufficientData& e) {
    throw InsufficientData(tag(e));
  } catch (const InitializationError& e) {
    throw InitializationError(tag(e));
  } catch (const IoError& e) {
    throw IoError(tag(e));
  } catch (const Error& e) {
    throw Error(tag(e));
  }
}

}  // namespace

HoldoutSplit holdout_split(const PolyCylDataset& data, double fraction, Rng& rng) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw DomainError("holdout fraction must lie in (0, 1)");
  HoldoutSplit out{data, {fraction, {}, std::nullopt}};
  std::size_t eligible = 0;
  for (const auto& obs : data.observations()) eligible += obs.observed_count();
  if (std::llround(fraction * static_cast<double>(eligible)) == 0) {
    out.plan.warning = "holdout fraction " + std::to_string(fraction) + " masks no entries of " +
                       std::to_string(eligible);
    return out;
  }
  // Exactly round(fraction * eligible) entries, chosen uniformly without
  // replacement, then listed in row order.
  std::vector<HoldoutEntry> pool;
  pool.reserve(eligible);
  for (std::size_t t = 0; t < data.size(); ++t) {
    const auto& obs = data[t];
    for (std::size_t i = 0; i < data.p(); ++i)
      if (!obs.angle_missing[i]) pool.push_back({t, true, i, obs.angles[i].value()});
    for (std::size_t j = 0; j < data.q(); ++j)
      if (!obs.linear_missing[j]) pool.push_back({t, false, j, obs.linears[j]});
  }
  const auto m = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(eligible)));
  std::vector<std::size_t> order(pool.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  for (std::size_t k = 0; k < m; ++k) std::swap(order[k], order[k + rng.below(order.size() - k)]);
  std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
  for (std::size_t k = 0; k < m; ++k) {
    const HoldoutEntry& e = pool[order[k]];
    auto& obs = out.masked[e.t];
    if (e.circular)
      obs.angle_missing[e.index] = true;
    else
      obs.linear_missing[e.index] = true;
    out.plan.entries.push_back(e);
  }
  return out;
}

double crps_circular(Angle truth, std::span<const double> draws) {
  if (draws.empty()) throw DomainError("crps_circular: no draws");
  const double b = static_cast<double>(draws.size());
  double first = 0.0;
  for (double v : draws) first += angular_distance(truth, Angle(v));
  // Each unordered pair counted once, so the halved double sum is sum / B^2.
  double pairs = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const Angle a(draws[i]);
    for (std::size_t j = i + 1; j < draws.size(); ++j) pairs += angular_distance(a, Angle(draws[j]));
  }
  return std::max(0.0, first / b - pairs / (b * b));
}

double crps_linear(double truth, std::span<const double> draws) {
  if (draws.empty()) throw DomainError("crps_linear: no draws");
  const std::size_t n = draws.size();
  const double b = static_cast<double>(n);
  std::vector<double> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end());
  double first = 0.0;
  double weighted = 0.0;
  // Centred on the truth so a point mass at the truth scores exactly zero.
  for (std::size_t i = 0; i < n; ++i) {
    const double z = sorted[i] - truth;
    first += std::abs(z);
    weighted += (2.0 * static_cast<double>(i) - b + 1.0) * z;
  }
  // sum_i sum_j |x_i - x_j| = 2 * weighted
  return std::max(0.0, first / b - weighted / (b * b));
}

std::vector<std::vector<double>> cylindrical_predictions(
    const PolyCylDataset& data, const std::vector<CylBlock>& blocks,
    const std::vector<std::vector<std::vector<double>>>& per_block) {
  if (per_block.size() != blocks.size()) throw DomainError("cylindrical_predictions: one result per block needed");
  const auto entries = missing_entries(data);
  std::map<EntryKey, std::size_t> column;
  for (std::size_t e = 0; e < entries.size(); ++e)
    column[{entries[e].t, entries[e].circular, entries[e].index}] = e;
  const std::size_t draws = per_block.empty() ? 0 : per_block.front().size();
  std::vector<std::vector<double>> out(draws, std::vector<double>(entries.size(), 0.0));
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (per_block[k].size() != draws) throw DomainError("cylindrical_predictions: blocks differ in draw count");
    const auto local = missing_entries(data.subset(blocks[k].circular, blocks[k].linear));
    for (std::size_t e = 0; e < local.size(); ++e) {
      const auto& le = local[e];
      const std::size_t global = le.circular ? blocks[k].circular[le.index] : blocks[k].linear[le.index];
      const std::size_t col = column.at({le.t, le.circular, global});
      for (std::size_t d = 0; d < draws; ++d) out[d][col] = per_block[k][d][e];
    }
  }
  return out;
}

ScoreTable compare_models(const HoldoutSplit& split, const std::vector<ModelFitter>& fitters, bool concurrent) {
  if (fitters.empty()) throw DomainError("compare_models: no models");
  const auto entries = missing_entries(split.masked);
  std::map<EntryKey, std::size_t> column;
  for (std::size_t e = 0; e < entries.size(); ++e)
    column[{entries[e].t, entries[e].circular, entries[e].index}] = e;

  // Fitters carry their own seeds, so running them on threads changes nothing
  // but wall time.
  std::vector<std::vector<std::vector<double>>> all(fitters.size());
  auto run = [&](std::size_t k) {
    all[k] = annotate(fitters[k].name, [&] { return fitters[k].predict(split.masked); });
  };
  if (concurrent && fitters.size() > 1) {
    std::vector<std::exception_ptr> errors(fitters.size());
    std::vector<std::thread> threads;
    for (std::size_t k = 0; k < fitters.size(); ++k)
      threads.emplace_back([&, k] {
        try {
          run(k);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      });
    for (auto& t : threads) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  } else {
    for (std::size_t k = 0; k < fitters.size(); ++k) run(k);
  }

  ScoreTable table;
  for (std::size_t k = 0; k < fitters.size(); ++k) {
    const ModelFitter& fitter = fitters[k];
    const auto& preds = all[k];
    ScoreRow row;
    row.model = fitter.name;
    double sum_c = 0.0, sum_l = 0.0;
    std::vector<double> values(preds.size());
    for (const auto& h : split.plan.entries) {
      const std::size_t col = column.at({h.t, h.circular, h.index});
      for (std::size_t d = 0; d < preds.size(); ++d) values[d] = preds[d].at(col);
      const double s = annotate(fitter.name, [&] {
        return h.circular ? crps_circular(Angle(h.truth), values) : crps_linear(h.truth, values);
      });
      row.entries.push_back({h, s});
      if (h.circular) {
        sum_c += s;
        ++row.n_circular;
      } else {
        sum_l += s;
        ++row.n_linear;
      }
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.crps_circular = row.n_circular ? sum_c / static_cast<double>(row.n_circular) : nan;
    row.crps_linear = row.n_linear ? sum_l / static_cast<double>(row.n_linear) : nan;
    table.rows.push_back(std::move(row));
  }
  return table;
}

ModelFitter make_jpsn_fitter(const ChainConfig& config, std::optional<PriorSpec> prior) {
  return {"jpsn", [config, prior](const PolyCylDataset& data) {
            const PriorSpec pr = prior.value_or(PriorSpec::defaults(data.p(), data.q()));
            Rng rng(config.seed, config.stream);
            ChainConfig cfg = config;
            cfg.store_latents = false;
            return run_gibbs(data, pr, cfg, rng).imputed;
          }};
}

ModelFitter make_cyl_jpsn_fitter(const ChainConfig& config, std::vector<CylBlock> blocks,
                                 std::optional<PriorSpec> prior) {
  return {"cyl-jpsn", [config, blocks, prior](const PolyCylDataset& data) {
            const auto bl = blocks.empty() ? unit_blocks(data.p(), data.q()) : blocks;
            const PriorSpec pr = prior.value_or(PriorSpec::defaults(data.p(), data.q()));
            ChainConfig cfg = config;
            cfg.store_latents = false;
            const CylindricalFit fit = fit_cylindrical_jpsn(data, bl, pr, cfg);
            std::vector<std::vector<std::vector<double>>> per_block;
            for (const auto& f : fit.fits) per_block.push_back(f.imputed);
            return cylindrical_predictions(data, bl, per_block);
          }};
}

ModelFitter make_abeley_fitter(const MhConfig& config, std::uint64_t seed, AbeLeyPrior prior,
                               std::vector<CylBlock> blocks) {
  return {"abeley", [config, seed, prior, blocks](const PolyCylDataset& data) {
            const auto bl = blocks.empty() ? unit_blocks(data.p(), data.q()) : blocks;
            validate_partition(bl, data.p(), data.q());
            std::vector<std::vector<std::vector<double>>> per_block;
            for (std::size_t k = 0; k < bl.size(); ++k) {
              Rng rng(seed, k);
              per_block.push_back(
                  fit_abeley_mh(data.subset(bl[k].circular, bl[k].linear), prior, config, rng).imputed);
            }
            return cylindrical_predictions(data, bl, per_block);
          }};
}

}  // namespace jpsn
