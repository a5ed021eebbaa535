#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "jpsn/core.hpp"
#include "jpsn/dists.hpp"
#include "jpsn/mcmc.hpp"
#include "jpsn/rng.hpp"

namespace jpsn {

/// Inverse-gamma(shape, scale) on alpha, beta and kappa; flat on mu and lambda.
struct AbeLeyPrior {
  double shape = 1.0;
  double scale = 1.0;
};

/// Coordinates are log alpha, log beta, log kappa, mu, atanh lambda.
struct MhConfig {
  std::size_t iterations = 12000;
  std::size_t burnin = 8000;
  std::size_t thin = 2;
  std::array<double, 5> scales{0.1, 0.1, 0.1, 0.1, 0.1};
  std::size_t window = 50;
  double target_acceptance = 0.3;
  std::optional<AbeLeyParams> initial;

  void validate() const;
};

struct AbeLeyDraws {
  std::vector<std::size_t> iterations;
  std::vector<AbeLeyParams> draws;
  /// Per-coordinate acceptance after burnin, and the frozen step scales.
  std::array<double, 5> acceptance{};
  std::array<double, 5> scales{};
  std::vector<MissingEntry> missing;
  std::vector<std::vector<double>> imputed;

  std::size_t size() const noexcept { return draws.size(); }
};

/// Random-walk Metropolis within Gibbs for one circular and one linear series.
/// Masked entries are redrawn from their exact conditionals each iteration.
/// Throws InitializationError if the starting likelihood is not finite.
AbeLeyDraws fit_abeley_mh(const PolyCylDataset& data, const AbeLeyPrior& prior, const MhConfig& config,
                          Rng& rng);

/// (θ, y = log x) pairs: θ exactly from its marginal (a half-angle Cauchy
/// draw plus sine-skew reflection), then x | θ Weibull.
PolyCylDataset simulate_abeley(const AbeLeyParams& params, std::size_t T, Rng& rng);

/// Best-Fisher rejection sampler.
double sample_von_mises(double mu, double kappa, Rng& rng);

/// Draws θ | y or y | θ (or both) for every masked entry, one row per draw.
std::vector<std::vector<double>> predict_abeley(const PolyCylDataset& data, const std::vector<AbeLeyParams>& draws,
                                                Rng& rng);

struct CylBlock {
  std::vector<std::size_t> circular;
  std::vector<std::size_t> linear;
};

/// Block k pairs angle k with linear k. Requires p == q.
std::vector<CylBlock> unit_blocks(std::size_t p, std::size_t q);

/// Throws DomainError unless the blocks partition the p + q dimensions.
void validate_partition(const std::vector<CylBlock>& blocks, std::size_t p, std::size_t q);

struct CylindricalFit {
  std::vector<CylBlock> blocks;
  std::vector<PosteriorDraws> fits;
};

/// Independent Gibbs runs per block under the marginal of the full prior.
/// Block k uses stream config.stream + k.
CylindricalFit fit_cylindrical_jpsn(const PolyCylDataset& data, const std::vector<CylBlock>& blocks,
                                    const PriorSpec& full_prior, const ChainConfig& config);

}  // namespace jpsn
