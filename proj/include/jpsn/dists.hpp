#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "jpsn/core.hpp"
#include "jpsn/rng.hpp"

namespace jpsn {

double std_normal_cdf(double x);
double std_normal_log_pdf(double x);
/// Inverse of std_normal_cdf on (0, 1).
double std_normal_quantile(double p);

/// Mean and covariance of a multivariate normal with a cached square-root factor.
class MvnParams {
 public:
  enum class Symmetry { Reject, Symmetrize };

  /// Throws NumericalError for an asymmetric covariance under Symmetry::Reject,
  /// or when no factor exists after jitter escalation.
  MvnParams(Eigen::VectorXd mean, Eigen::MatrixXd cov, Symmetry policy = Symmetry::Reject);

  Eigen::Index dim() const noexcept { return mean_.size(); }
  const Eigen::VectorXd& mean() const noexcept { return mean_; }
  const Eigen::MatrixXd& cov() const noexcept { return cov_; }
  /// F with F F^T = cov; lower triangular unless cov is singular.
  const Eigen::MatrixXd& factor() const noexcept { return factor_; }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd factor_;
};

Eigen::VectorXd sample_mvn(const MvnParams& params, Rng& rng);

/// Exact draw from N(mean, var) restricted to (lower, ∞). `lower` may be -infinity.
double sample_trunc_normal_lower(double mean, double var, double lower, Rng& rng);

/// |Z| for standard normal Z.
double sample_half_normal(Rng& rng);

struct NiwParams {
  Eigen::VectorXd mu0;
  double kappa0 = 1.0;
  double nu0 = 1.0;
  Eigen::MatrixXd psi0;

  Eigen::Index dim() const noexcept { return mu0.size(); }
  /// Throws DomainError on kappa0 <= 0, nu0 <= d - 1, or mismatched shapes.
  void validate() const;
};

struct NiwDraw {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
};

/// Inverse-Wishart via Bartlett decomposition of a Wishart draw with scale psi^{-1}.
Eigen::MatrixXd sample_inverse_wishart(double nu, const Eigen::MatrixXd& psi, Rng& rng);

/// sigma ~ IW(nu0, psi0), then mu | sigma ~ N(mu0, sigma / kappa0).
NiwDraw sample_niw(const NiwParams& params, Rng& rng);

/// Log density of the univariate projected normal PN(mu, sigma) at theta.
double pn1_log_density(Angle theta, const Eigen::Vector2d& mu, const Eigen::Matrix2d& sigma);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// P(Z <= upper) for Z ~ N(0, corr) by Monte Carlo over `pairs` antithetic
/// pairs (2 * pairs evaluations). The reported standard error is at most
/// 1 / (2 sqrt(pairs)).
McEstimate mvn_cdf_mc(const Eigen::VectorXd& upper, const Eigen::MatrixXd& corr,
                      std::size_t pairs, Rng& rng);

struct SsnDensity {
  double log_density = 0.0;
  /// Estimate of the q-variate normal CDF factor and its standard error
  /// (the error is zero on the exact q = 1 path).
  double cdf_factor = 0.0;
  double cdf_std_error = 0.0;
};

struct McOptions {
  std::size_t pairs = 4096;
  std::uint64_t seed = 0x5eed;
};

/// Skew-normal log density with diagonal skewness diag(lambda).
SsnDensity ssn_log_density(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                           const Eigen::MatrixXd& sigma, const Eigen::VectorXd& lambda,
                           McOptions mc = {});

/// y = mu + diag(lambda) |Z| + H, H ~ N(0, sigma).
Eigen::VectorXd simulate_ssn(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                             const Eigen::VectorXd& lambda, Rng& rng);

/// Abe-Ley cylindrical parameters for the log-transformed linear part.
class AbeLeyParams {
 public:
  /// Throws DomainError unless alpha > 0, beta > 0, kappa >= 0, |lambda| <= 1.
  AbeLeyParams(double alpha, double beta, Angle mu, double kappa, double lambda_skew);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  Angle mu() const noexcept { return mu_; }
  double kappa() const noexcept { return kappa_; }
  double lambda_skew() const noexcept { return lambda_; }

 private:
  double alpha_;
  double beta_;
  Angle mu_;
  double kappa_;
  double lambda_;
};

double abeley_log_density(Angle theta, double y, const AbeLeyParams& params);

}  // namespace jpsn
