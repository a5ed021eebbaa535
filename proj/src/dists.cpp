#include "jpsn/dists.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/erf.hpp>

#include "jpsn/errors.hpp"
#include "jpsn/linalg.hpp"

namespace jpsn {

namespace {

constexpr double kLogSqrtTwoPi = 0.91893853320467274178;

// Square root of a symmetric non-negative definite matrix. Positive definite
// input gets a plain Cholesky factor; exactly semidefinite input (e.g. a zero
// covariance) gets the pivoted LDL^T root so draws stay on the support.
Eigen::MatrixXd sqrt_factor(const Eigen::MatrixXd& cov) {
  if (cov.size() == 0) return cov;
  if (!cov.allFinite()) throw NumericalError("covariance has non-finite entries");
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
  if (ldlt.info() == Eigen::Success) {
    const Eigen::VectorXd d = ldlt.vectorD();
    const double tol = 1e-12 * std::max(1.0, cov.diagonal().cwiseAbs().maxCoeff());
    if (d.minCoeff() >= -tol) {
      Eigen::MatrixXd f = Eigen::MatrixXd(ldlt.matrixL()) * d.cwiseMax(0.0).cwiseSqrt().asDiagonal();
      f = ldlt.transpositionsP().transpose() * f;
      return f;
    }
  }
  return linalg::cholesky_lower(cov);
}

// log(1 + d Φ(d) / φ(d)), the mean-shift factor of the projected normal.
double log_pn_shift(double d) {
  if (d > -5.0) {
    const double log_phi = -0.5 * d * d - kLogSqrtTwoPi;
    const double g = std::exp(log_phi) + d * std_normal_cdf(d);
    return std::log(g) - log_phi;
  }
  // 1 - x R(x) with R the Mills ratio, written as t / (x + t) where t is the
  // tail of the continued fraction R(x) = 1/(x + 1/(x + 2/(x + ...))).
  const double x = -d;
  double t = 0.0;
  for (int k = 200; k >= 2; --k) t = k / (x + t);
  t = 1.0 / (x + t);
  return std::log(t / (x + t));
}

}  // namespace

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double std_normal_log_pdf(double x) { return -0.5 * x * x - kLogSqrtTwoPi; }

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("std_normal_quantile: p must lie in (0, 1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

MvnParams::MvnParams(Eigen::VectorXd mean, Eigen::MatrixXd cov, Symmetry policy)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (cov_.rows() != cov_.cols() || cov_.rows() != mean_.size())
    throw DomainError("MvnParams: mean and covariance dimensions differ");
  if (!linalg::is_symmetric(cov_)) {
    if (policy == Symmetry::Reject) throw NumericalError("MvnParams: covariance is not symmetric");
    cov_ = linalg::symmetrize(cov_);
  }
  factor_ = sqrt_factor(cov_);
}

Eigen::VectorXd sample_mvn(const MvnParams& params, Rng& rng) {
  Eigen::VectorXd z(params.dim());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  return params.mean() + params.factor() * z;
}

double sample_trunc_normal_lower(double mean, double var, double lower, Rng& rng) {
  if (!(var > 0.0)) throw DomainError("truncated normal: variance must be positive");
  const double sd = std::sqrt(var);
  if (lower == -std::numeric_limits<double>::infinity()) return mean + sd * rng.normal();
  const double a = (lower - mean) / sd;
  for (;;) {
    double z;
    if (a > 5.0) {
      // Exponential rejection with the optimal rate for the tail beyond a.
      const double rate = 0.5 * (a + std::sqrt(a * a + 4.0));
      do {
        z = a + rng.exponential() / rate;
      } while (rng.uniform() > std::exp(-0.5 * (z - rate) * (z - rate)));
    } else {
      const double tail = std_normal_cdf(-a);
      z = std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * rng.uniform() * tail);
    }
    const double x = mean + sd * z;
    if (x > lower) return x;
  }
}

double sample_half_normal(Rng& rng) { return std::abs(rng.normal()); }

void NiwParams::validate() const {
  const auto d = static_cast<double>(mu0.size());
  if (!(kappa0 > 0.0)) throw DomainError("NIW: kappa0 must be positive");
  if (!(nu0 > d - 1.0)) throw DomainError("NIW: nu0 must exceed d - 1");
  if (psi0.rows() != mu0.size() || psi0.cols() != mu0.size())
    throw DomainError("NIW: psi0 dimension mismatch");
  if (!linalg::is_symmetric(psi0)) throw DomainError("NIW: psi0 is not symmetric");
}

Eigen::MatrixXd sample_inverse_wishart(double nu, const Eigen::MatrixXd& psi, Rng& rng) {
  const Eigen::Index d = psi.rows();
  if (!(nu > static_cast<double>(d) - 1.0)) throw DomainError("inverse-Wishart: nu must exceed d - 1");
  const Eigen::MatrixXd scale_lower = linalg::cholesky_lower(linalg::spd_inverse(psi));
  Eigen::MatrixXd bartlett = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    bartlett(i, i) = std::sqrt(2.0 * rng.gamma(0.5 * (nu - static_cast<double>(i))));
    for (Eigen::Index j = 0; j < i; ++j) bartlett(i, j) = rng.normal();
  }
  const Eigen::MatrixXd m = scale_lower * bartlett;
  const Eigen::MatrixXd minv =
      m.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(d, d));
  return linalg::symmetrize(minv.transpose() * minv);
}

NiwDraw sample_niw(const NiwParams& params, Rng& rng) {
  params.validate();
  NiwDraw out;
  out.sigma = sample_inverse_wishart(params.nu0, params.psi0, rng);
  const Eigen::MatrixXd lower = linalg::cholesky_lower(out.sigma);
  Eigen::VectorXd z(params.dim());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  out.mu = params.mu0 + lower * z / std::sqrt(params.kappa0);
  return out;
}

double pn1_log_density(Angle theta, const Eigen::Vector2d& mu, const Eigen::Matrix2d& sigma) {
  const double det = sigma(0, 0) * sigma(1, 1) - sigma(0, 1) * sigma(1, 0);
  if (!(det > 0.0) || !(sigma(0, 0) > 0.0) || std::abs(sigma(0, 1) - sigma(1, 0)) > 1e-10)
    throw NumericalError("pn1_log_density: covariance is not positive definite");
  Eigen::Matrix2d prec;
  prec << sigma(1, 1), -sigma(0, 1), -sigma(1, 0), sigma(0, 0);
  prec /= det;
  const Eigen::Vector2d u(std::cos(theta.value()), std::sin(theta.value()));
  const double a = u.dot(prec * u);
  const double b = u.dot(prec * mu);
  const double c = mu.dot(prec * mu);
  const double d = b / std::sqrt(a);
  return -std::log(kTwoPi) - 0.5 * std::log(det) - std::log(a) - 0.5 * c + log_pn_shift(d);
}

McEstimate mvn_cdf_mc(const Eigen::VectorXd& upper, const Eigen::MatrixXd& corr,
                      std::size_t pairs, Rng& rng) {
  const Eigen::Index q = upper.size();
  if (corr.rows() != q || corr.cols() != q) throw NumericalError("mvn_cdf_mc: dimension mismatch");
  if (!linalg::is_symmetric(corr)) throw NumericalError("mvn_cdf_mc: correlation is not symmetric");
  if (q > 0 && ((corr.diagonal().array() - 1.0).abs().maxCoeff() > 1e-8))
    throw NumericalError("mvn_cdf_mc: correlation must have unit diagonal");
  if (pairs == 0) throw DomainError("mvn_cdf_mc: need at least one sample pair");
  const Eigen::MatrixXd lower = linalg::cholesky_lower(corr);
  Eigen::VectorXd z(q);
  Eigen::VectorXd x(q);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < pairs; ++s) {
    for (Eigen::Index i = 0; i < q; ++i) z(i) = rng.normal();
    x.noalias() = lower * z;
    const bool hit = (x.array() <= upper.array()).all();
    const bool hit_anti = ((-x).array() <= upper.array()).all();
    const double y = 0.5 * (static_cast<double>(hit) + static_cast<double>(hit_anti));
    sum += y;
    sum_sq += y * y;
  }
  const auto n = static_cast<double>(pairs);
  McEstimate out;
  out.estimate = sum / n;
  // Population variance of values in [0, 1] is at most 1/4, which bounds the error.
  const double var = std::max(0.0, sum_sq / n - out.estimate * out.estimate);
  out.std_error = std::sqrt(var / n);
  return out;
}

SsnDensity ssn_log_density(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                           const Eigen::MatrixXd& sigma, const Eigen::VectorXd& lambda,
                           McOptions mc) {
  const Eigen::Index q = y.size();
  if (mu.size() != q || lambda.size() != q || sigma.rows() != q || sigma.cols() != q)
    throw DomainError("ssn_log_density: dimension mismatch");
  Eigen::MatrixXd upsilon = sigma;
  upsilon.diagonal() += lambda.cwiseAbs2();
  auto llt = linalg::strict_llt(upsilon);
  const Eigen::MatrixXd lower = llt.matrixL();
  const Eigen::MatrixXd prec = llt.solve(Eigen::MatrixXd::Identity(q, q));
  const Eigen::VectorXd arg = lambda.asDiagonal() * (prec * (y - mu));
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Identity(q, q) -
                          lambda.asDiagonal() * prec * lambda.asDiagonal();
  gamma = linalg::symmetrize(gamma);

  SsnDensity out;
  const double log_phi = linalg::mvn_log_density_lower(y, mu, lower);
  if (q == 1) {
    out.cdf_factor = std_normal_cdf(arg(0) / std::sqrt(gamma(0, 0)));
  } else {
    const Eigen::VectorXd sd = gamma.diagonal().cwiseSqrt();
    const Eigen::VectorXd upper = arg.cwiseQuotient(sd);
    const Eigen::MatrixXd corr = sd.cwiseInverse().asDiagonal() * gamma * sd.cwiseInverse().asDiagonal();
    Rng rng(mc.seed);
    const McEstimate est = mvn_cdf_mc(upper, linalg::symmetrize(corr), mc.pairs, rng);
    out.cdf_factor = est.estimate;
    out.cdf_std_error = est.std_error;
  }
  out.log_density = static_cast<double>(q) * std::log(2.0) + log_phi + std::log(out.cdf_factor);
  return out;
}

Eigen::VectorXd simulate_ssn(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                             const Eigen::VectorXd& lambda, Rng& rng) {
  MvnParams noise(Eigen::VectorXd::Zero(mu.size()), sigma);
  Eigen::VectorXd y = mu;
  for (Eigen::Index j = 0; j < y.size(); ++j) y(j) += lambda(j) * sample_half_normal(rng);
  return y + sample_mvn(noise, rng);
}

AbeLeyParams::AbeLeyParams(double alpha, double beta, Angle mu, double kappa, double lambda_skew)
    : alpha_(alpha), beta_(beta), mu_(mu), kappa_(kappa), lambda_(lambda_skew) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("Abe-Ley: alpha must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("Abe-Ley: beta must be positive");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw DomainError("Abe-Ley: kappa must be non-negative");
  if (!(lambda_skew >= -1.0 && lambda_skew <= 1.0))
    throw DomainError("Abe-Ley: lambda must lie in [-1, 1]");
}

double abeley_log_density(Angle theta, double y, const AbeLeyParams& params) {
  const double a = params.alpha();
  const double b = params.beta();
  const double k = params.kappa();
  const double delta = theta.value() - params.mu().value();
  const double skew = 1.0 + params.lambda_skew() * std::sin(delta);
  // log cosh, stable for large kappa.
  const double log_cosh = k + std::log1p(std::exp(-2.0 * k)) - std::log(2.0);
  const double scaled = std::exp(a * (std::log(b) + y));
  // 1 - tanh(k) cos(delta), split to avoid cancellation.
  const double sh = std::sin(0.5 * delta);
  const double modulation = 2.0 / (1.0 + std::exp(2.0 * k)) + std::tanh(k) * 2.0 * sh * sh;
  return std::log(a) + a * std::log(b) - std::log(kTwoPi) - log_cosh + std::log(skew) +
         y * (a - 1.0) - scaled * modulation + y;
}

}  // namespace jpsn
