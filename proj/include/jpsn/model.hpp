#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include <Eigen/Dense>

#include "jpsn/core.hpp"
#include "jpsn/rng.hpp"

namespace jpsn {

/// Parameters of the joint projected-normal / skew-normal model for p angles
/// and q reals. The mean and covariance are ordered (w_1, ..., w_p, y) where
/// each w_i is the 2-d Gaussian whose direction is angle i.
struct JpsnParams {
  std::size_t p = 0;
  std::size_t q = 0;
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  Eigen::VectorXd lambda;
  /// True when the second variance of every w_i block is pinned to one.
  bool constrained = false;

  JpsnParams() = default;
  JpsnParams(std::size_t p_, std::size_t q_, Eigen::VectorXd mu_, Eigen::MatrixXd sigma_,
             Eigen::VectorXd lambda_, bool constrained_ = false);

  Eigen::Index dim() const noexcept { return static_cast<Eigen::Index>(2 * p + q); }
  Eigen::Index wdim() const noexcept { return static_cast<Eigen::Index>(2 * p); }

  /// Throws DomainError on shape errors, asymmetry, or a violated constraint.
  void validate() const;

  Eigen::VectorXd mu_w() const { return mu.head(wdim()); }
  Eigen::VectorXd mu_y() const { return mu.tail(static_cast<Eigen::Index>(q)); }
  Eigen::MatrixXd sigma_w() const { return sigma.topLeftCorner(wdim(), wdim()); }
  Eigen::MatrixXd sigma_wy() const { return sigma.topRightCorner(wdim(), static_cast<Eigen::Index>(q)); }
  Eigen::MatrixXd sigma_y() const {
    return sigma.bottomRightCorner(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q));
  }
};

/// Per-observation latent radii (T x p) and skew latents (T x q).
struct LatentState {
  Eigen::MatrixXd r;
  Eigen::MatrixXd d;

  /// Throws DomainError unless every entry is strictly positive.
  void validate() const;
};

/// Per-angle radial scales c_i of the identification transform.
struct CMatrix {
  Eigen::VectorXd c;

  /// Full diagonal of C: (c_1, c_1, ..., c_p, c_p, 1, ..., 1).
  Eigen::VectorXd diagonal(std::size_t q) const;
};

struct Simulation {
  PolyCylDataset data;
  LatentState latents;
};

/// Draws T observations, returning the data and the latents that produced them.
Simulation simulate_jpsn(const JpsnParams& params, std::size_t T, Rng& rng);

/// Stacked (w, y) for one observation given its radii. Masked entries keep
/// their stored values.
Eigen::VectorXd stack_wy(const PolyCylObservation& obs, const Eigen::VectorXd& r);

/// Log of the augmented joint density of (θ, r, y, d). Masked coordinates are
/// integrated out, which drops their Gaussian block and radius Jacobian.
double jpsn_aug_log_density(const PolyCylObservation& obs, const Eigen::VectorXd& r,
                            const Eigen::VectorXd& d, const JpsnParams& params);

struct PnParams {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Parameters of the projected normal for θ given y and d.
PnParams conditional_circular_params(const JpsnParams& params, const Eigen::VectorXd& y,
                                     const Eigen::VectorXd& d);

struct SsnParams {
  Eigen::VectorXd location;
  Eigen::MatrixXd scale;
  Eigen::VectorXd lambda;

  Eigen::VectorXd mean() const;
};

/// Skew-normal parameters of y given θ and r, with d integrated out.
SsnParams conditional_linear_params(const JpsnParams& params, std::span<const Angle> theta,
                                    const Eigen::VectorXd& r);

struct Moments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Mean and covariance of the linear block.
Moments ssn_moments(const JpsnParams& params);

struct Identified {
  JpsnParams params;
  CMatrix c;
};

/// Maps unconstrained (mu, sigma) onto the constrained representative.
/// Throws DomainError if any pinned variance is not positive.
Identified identify(const JpsnParams& params);

/// Inverse of identify: mu = C mu~, sigma = C sigma~ C.
JpsnParams unidentify(const JpsnParams& constrained, const CMatrix& c);

/// Parameters of δ(Θ + ξ) when Θ ~ PN(mu, sigma). delta must be ±1.
std::pair<Eigen::Vector2d, Eigen::Matrix2d> transform_pn_params(const Eigen::Vector2d& mu,
                                                                const Eigen::Matrix2d& sigma,
                                                                Angle xi, int delta);

/// The three (2, 1) synthetic parameter sets (k = 1, 2, 3), constrained form.
JpsnParams synthetic_example(int k);

}  // namespace jpsn
