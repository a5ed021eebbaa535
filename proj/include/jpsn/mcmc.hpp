#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "jpsn/core.hpp"
#include "jpsn/dists.hpp"
#include "jpsn/model.hpp"
#include "jpsn/rng.hpp"

namespace jpsn {

struct PriorSpec {
  NiwParams niw;
  Eigen::VectorXd lambda_mean;
  Eigen::MatrixXd lambda_cov;

  /// NIW(0, 0.001, 2p + q + 10, I) and λ ~ N(0, 100 I).
  static PriorSpec defaults(std::size_t p, std::size_t q);

  /// Prior of the sub-model on the listed dimensions. The inverse-Wishart
  /// degrees of freedom drop by the number of discarded coordinates.
  PriorSpec marginal(std::size_t p, const std::vector<std::size_t>& circular,
                     const std::vector<std::size_t>& linear) const;

  void validate(std::size_t p, std::size_t q) const;
};

enum class InitMode { Default, Supplied };

struct ChainConfig {
  std::size_t iterations = 12000;
  std::size_t burnin = 8000;
  std::size_t thin = 2;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  InitMode init = InitMode::Default;
  /// Unconstrained starting values, used when init is Supplied.
  std::optional<JpsnParams> initial;
  /// Optional starting latents (T x p radii, T x q skew latents) for a
  /// supplied start; the defaults are r = 1 and d = sqrt(2/pi).
  std::optional<LatentState> initial_latents;
  std::size_t slice_steps = 1;
  bool store_latents = true;

  void validate() const;
  std::size_t stored_count() const noexcept { return (iterations - burnin) / thin; }
};

struct RawDraw {
  std::size_t iteration = 0;
  JpsnParams params;
  LatentState latents;
};

struct IdentifiedDraw {
  std::size_t iteration = 0;
  JpsnParams params;
  CMatrix c;
  /// Radii divided by c; skew latents unchanged.
  LatentState latents;
};

/// One masked scalar entry: angle `index` or linear `index` of row t.
struct MissingEntry {
  std::size_t t = 0;
  bool circular = false;
  std::size_t index = 0;

  bool operator==(const MissingEntry&) const = default;
};

/// Masked entries of a dataset, row by row, angles before linears.
std::vector<MissingEntry> missing_entries(const PolyCylDataset& data);

struct PosteriorDraws {
  std::size_t p = 0;
  std::size_t q = 0;
  std::size_t T = 0;
  ChainConfig config;
  std::vector<RawDraw> raw;
  std::vector<IdentifiedDraw> identified;
  std::vector<MissingEntry> missing;
  /// imputed[k][e]: value of missing entry e at stored draw k.
  std::vector<std::vector<double>> imputed;

  std::size_t size() const noexcept { return raw.size(); }
  std::vector<JpsnParams> identified_params() const;
  std::vector<JpsnParams> raw_params() const;
};

NiwParams niw_full_conditional(const PolyCylDataset& data, const LatentState& latents,
                               const Eigen::VectorXd& lambda, const PriorSpec& prior);

struct NormalParams {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

NormalParams lambda_full_conditional(const PolyCylDataset& data, const LatentState& latents,
                                     const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                                     const PriorSpec& prior);

/// One coordinate sweep of the positive-orthant truncated normal for D_t,
/// starting from d_current.
Eigen::VectorXd sample_d(const PolyCylObservation& obs, const Eigen::VectorXd& r,
                         const Eigen::VectorXd& d_current, const JpsnParams& params, Rng& rng);

/// One slice transition for the density proportional to
/// r exp(-(A/2)(r - B/A)^2) on r > 0.
double slice_update_r(double r_current, double A, double B, Rng& rng);

struct RCoefficients {
  double A = 0.0;
  double B = 0.0;
};

RCoefficients compute_r_coefficients(const PolyCylObservation& obs, std::size_t i,
                                     const JpsnParams& params, const Eigen::VectorXd& r,
                                     const Eigen::VectorXd& d);

/// Redraws the masked entries of obs from their Gaussian conditional given
/// the observed coordinates and d. Masked angles also get a new radius.
void impute_missing(PolyCylObservation& obs, Eigen::VectorXd& r, const Eigen::VectorXd& d,
                    const JpsnParams& params, Rng& rng);

PosteriorDraws run_gibbs(const PolyCylDataset& data, const PriorSpec& prior, const ChainConfig& config,
                         Rng& rng);

/// Posterior predictive values for the masked entries of data, one per
/// parameter draw, from a short latent-only sampler with parameters fixed.
std::vector<std::vector<double>> predict_missing(const PolyCylDataset& data,
                                                 const std::vector<JpsnParams>& draws,
                                                 std::size_t sweeps, Rng& rng);

}  // namespace jpsn
