#include "jpsn/model.hpp"

#include <cmath>
#include <vector>

#include "jpsn/dists.hpp"
#include "jpsn/errors.hpp"
#include "jpsn/linalg.hpp"

namespace jpsn {

namespace {

constexpr double kSqrtTwoOverPi = 0.79788456080286535588;

}  // namespace

JpsnParams::JpsnParams(std::size_t p_, std::size_t q_, Eigen::VectorXd mu_, Eigen::MatrixXd sigma_,
                       Eigen::VectorXd lambda_, bool constrained_)
    : p(p_), q(q_), mu(std::move(mu_)), sigma(std::move(sigma_)), lambda(std::move(lambda_)),
      constrained(constrained_) {
  validate();
}

void JpsnParams::validate() const {
  if (p + q < 1) throw DomainError("JpsnParams: p + q must be at least one");
  if (mu.size() != dim()) throw DomainError("JpsnParams: mu must have length 2p + q");
  if (sigma.rows() != dim() || sigma.cols() != dim())
    throw DomainError("JpsnParams: sigma must be (2p + q) x (2p + q)");
  if (lambda.size() != static_cast<Eigen::Index>(q)) throw DomainError("JpsnParams: lambda must have length q");
  if (!mu.allFinite() || !sigma.allFinite() || !lambda.allFinite())
    throw DomainError("JpsnParams: non-finite entries");
  if (!linalg::is_symmetric(sigma)) throw DomainError("JpsnParams: sigma is not symmetric");
  if (constrained) {
    for (std::size_t i = 0; i < p; ++i) {
      const auto k = static_cast<Eigen::Index>(2 * i + 1);
      if (std::abs(sigma(k, k) - 1.0) >= 1e-10)
        throw DomainError("JpsnParams: constrained variance is not one");
    }
  }
}

void LatentState::validate() const {
  if ((r.size() > 0 && !(r.array() > 0.0).all()) || (d.size() > 0 && !(d.array() > 0.0).all()))
    throw DomainError("latent radii and skew latents must be strictly positive");
}

Eigen::VectorXd CMatrix::diagonal(std::size_t q) const {
  Eigen::VectorXd diag = Eigen::VectorXd::Ones(2 * c.size() + static_cast<Eigen::Index>(q));
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    diag(2 * i) = c(i);
    diag(2 * i + 1) = c(i);
  }
  return diag;
}

Simulation simulate_jpsn(const JpsnParams& params, std::size_t T, Rng& rng) {
  params.validate();
  const auto p = static_cast<Eigen::Index>(params.p);
  const auto q = static_cast<Eigen::Index>(params.q);
  MvnParams noise(Eigen::VectorXd::Zero(params.dim()), params.sigma);
  Simulation sim{PolyCylDataset(params.p, params.q), {}};
  sim.latents.r.resize(static_cast<Eigen::Index>(T), p);
  sim.latents.d.resize(static_cast<Eigen::Index>(T), q);
  for (std::size_t t = 0; t < T; ++t) {
    const auto row = static_cast<Eigen::Index>(t);
    Eigen::VectorXd d(q);
    for (Eigen::Index j = 0; j < q; ++j) d(j) = sample_half_normal(rng);
    Eigen::VectorXd x;
    // A w-block at the exact origin has no direction; it has probability zero.
    bool degenerate = true;
    while (degenerate) {
      x = params.mu + sample_mvn(noise, rng);
      degenerate = false;
      for (Eigen::Index i = 0; i < p; ++i)
        if (x(2 * i) == 0.0 && x(2 * i + 1) == 0.0) degenerate = true;
    }
    x.tail(q) += params.lambda.cwiseProduct(d);
    PolyCylObservation obs;
    for (Eigen::Index i = 0; i < p; ++i) {
      obs.angles.push_back(atan_star(x(2 * i + 1), x(2 * i)));
      sim.latents.r(row, i) = std::hypot(x(2 * i), x(2 * i + 1));
    }
    for (Eigen::Index j = 0; j < q; ++j) obs.linears.push_back(x(2 * p + j));
    sim.latents.d.row(row) = d.transpose();
    sim.data.add(std::move(obs));
  }
  return sim;
}

Eigen::VectorXd stack_wy(const PolyCylObservation& obs, const Eigen::VectorXd& r) {
  const auto p = static_cast<Eigen::Index>(obs.angles.size());
  const auto q = static_cast<Eigen::Index>(obs.linears.size());
  Eigen::VectorXd x(2 * p + q);
  for (Eigen::Index i = 0; i < p; ++i) {
    const double th = obs.angles[static_cast<std::size_t>(i)].value();
    x(2 * i) = r(i) * std::cos(th);
    x(2 * i + 1) = r(i) * std::sin(th);
  }
  for (Eigen::Index j = 0; j < q; ++j) x(2 * p + j) = obs.linears[static_cast<std::size_t>(j)];
  return x;
}

double jpsn_aug_log_density(const PolyCylObservation& obs, const Eigen::VectorXd& r,
                            const Eigen::VectorXd& d, const JpsnParams& params) {
  const auto p = static_cast<Eigen::Index>(params.p);
  const auto q = static_cast<Eigen::Index>(params.q);
  if (obs.angles.size() != params.p || obs.linears.size() != params.q || r.size() != p || d.size() != q)
    throw DomainError("jpsn_aug_log_density: dimension mismatch");
  if ((p > 0 && !(r.array() > 0.0).all()) || (q > 0 && !(d.array() > 0.0).all()))
    throw DomainError("jpsn_aug_log_density: latents must be strictly positive");

  const Eigen::VectorXd x = stack_wy(obs, r);
  Eigen::VectorXd mean = params.mu;
  mean.tail(q) += params.lambda.cwiseProduct(d);

  std::vector<Eigen::Index> idx;
  double log_jacobian = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) {
    if (obs.angle_missing[static_cast<std::size_t>(i)]) continue;
    idx.push_back(2 * i);
    idx.push_back(2 * i + 1);
    log_jacobian += std::log(r(i));
  }
  for (Eigen::Index j = 0; j < q; ++j)
    if (!obs.linear_missing[static_cast<std::size_t>(j)]) idx.push_back(2 * p + j);

  double log_d = 0.0;
  for (Eigen::Index j = 0; j < q; ++j) log_d += std_normal_log_pdf(d(j));

  const double log_phi = idx.empty() ? 0.0
                                     : linalg::mvn_log_density(linalg::select(x, idx),
                                                               linalg::select(mean, idx),
                                                               linalg::select(params.sigma, idx, idx));
  return static_cast<double>(q) * std::log(2.0) + log_phi + log_d + log_jacobian;
}

PnParams conditional_circular_params(const JpsnParams& params, const Eigen::VectorXd& y,
                                     const Eigen::VectorXd& d) {
  params.validate();
  const auto q = static_cast<Eigen::Index>(params.q);
  if (y.size() != q || d.size() != q) throw DomainError("conditional_circular_params: dimension mismatch");
  PnParams out{params.mu_w(), params.sigma_w()};
  if (q == 0) return out;
  auto llt = linalg::strict_llt(params.sigma_y());
  const Eigen::MatrixXd swy = params.sigma_wy();
  const Eigen::VectorXd resid = y - params.mu_y() - params.lambda.cwiseProduct(d);
  out.mean += swy * llt.solve(resid);
  out.cov -= swy * llt.solve(swy.transpose());
  out.cov = linalg::symmetrize(out.cov);
  return out;
}

Eigen::VectorXd SsnParams::mean() const { return location + kSqrtTwoOverPi * lambda; }

SsnParams conditional_linear_params(const JpsnParams& params, std::span<const Angle> theta,
                                    const Eigen::VectorXd& r) {
  params.validate();
  const auto p = static_cast<Eigen::Index>(params.p);
  if (theta.size() != params.p || r.size() != p)
    throw DomainError("conditional_linear_params: dimension mismatch");
  SsnParams out{params.mu_y(), params.sigma_y(), params.lambda};
  if (p == 0) return out;
  Eigen::VectorXd w(2 * p);
  for (Eigen::Index i = 0; i < p; ++i) w.segment<2>(2 * i) = polar_embed(theta[static_cast<std::size_t>(i)], r(i));
  auto llt = linalg::strict_llt(params.sigma_w());
  const Eigen::MatrixXd swy = params.sigma_wy();
  out.location += swy.transpose() * llt.solve(w - params.mu_w());
  out.scale -= swy.transpose() * llt.solve(swy);
  out.scale = linalg::symmetrize(out.scale);
  return out;
}

Moments ssn_moments(const JpsnParams& params) {
  params.validate();
  Moments m{params.mu_y() + kSqrtTwoOverPi * params.lambda, params.sigma_y()};
  m.cov.diagonal() += (1.0 - 2.0 / kPi) * params.lambda.cwiseAbs2();
  return m;
}

Identified identify(const JpsnParams& params) {
  params.validate();
  Identified out;
  out.c.c.resize(static_cast<Eigen::Index>(params.p));
  for (std::size_t i = 0; i < params.p; ++i) {
    const auto k = static_cast<Eigen::Index>(2 * i + 1);
    if (!(params.sigma(k, k) > 0.0)) throw DomainError("identify: pinned variance must be positive");
    out.c.c(static_cast<Eigen::Index>(i)) = std::sqrt(params.sigma(k, k));
  }
  const Eigen::VectorXd inv = out.c.diagonal(params.q).cwiseInverse();
  out.params.p = params.p;
  out.params.q = params.q;
  out.params.mu = params.mu.cwiseProduct(inv);
  // inv(i) * inv(j) is commutative in floating point, so the result stays
  // exactly symmetric.
  out.params.sigma = params.sigma.cwiseProduct(inv * inv.transpose());
  for (std::size_t i = 0; i < params.p; ++i) {
    const auto k = static_cast<Eigen::Index>(2 * i + 1);
    out.params.sigma(k, k) = 1.0;
  }
  out.params.lambda = params.lambda;
  out.params.constrained = true;
  return out;
}

JpsnParams unidentify(const JpsnParams& constrained, const CMatrix& c) {
  if (c.c.size() != static_cast<Eigen::Index>(constrained.p)) throw DomainError("unidentify: c has wrong length");
  if (constrained.p > 0 && !(c.c.array() > 0.0).all()) throw DomainError("unidentify: c must be positive");
  const Eigen::VectorXd diag = c.diagonal(constrained.q);
  JpsnParams out = constrained;
  out.mu = constrained.mu.cwiseProduct(diag);
  out.sigma = constrained.sigma.cwiseProduct(diag * diag.transpose());
  out.constrained = false;
  return out;
}

std::pair<Eigen::Vector2d, Eigen::Matrix2d> transform_pn_params(const Eigen::Vector2d& mu,
                                                                const Eigen::Matrix2d& sigma,
                                                                Angle xi, int delta) {
  if (delta != 1 && delta != -1) throw DomainError("transform_pn_params: delta must be +1 or -1");
  const double c = std::cos(xi.value());
  const double s = std::sin(xi.value());
  Eigen::Matrix2d m;
  m << c, -s, delta * s, delta * c;
  Eigen::Matrix2d out = m * sigma * m.transpose();
  return {m * mu, linalg::symmetrize(out)};
}

JpsnParams synthetic_example(int k) {
  Eigen::VectorXd mu(5);
  Eigen::MatrixXd sigma(5, 5);
  Eigen::VectorXd lambda(1);
  switch (k) {
    case 1:
      mu << 0.5, -1.0, -0.1, 0.1, -5.0;
      sigma = Eigen::VectorXd((Eigen::VectorXd(5) << 2.0, 1.0, 0.2, 1.0, 2.0).finished()).asDiagonal();
      lambda << -5.0;
      break;
    case 2:
      mu << 0.2, 0.2, 0.0, 0.1, -5.0;
      sigma << 3.000, 0.000, 0.551, 0.779, 0.857,
               0.000, 1.000, -0.318, 0.450, 0.495,
               0.551, -0.318, 0.500, 0.000, -0.318,
               0.779, 0.450, 0.000, 1.000, 0.450,
               0.857, 0.495, -0.318, 0.450, 1.000;
      lambda << 5.0;
      break;
    case 3:
      mu << 0.5, 0.5, 0.0, 0.5, 5.0;
      sigma << 3.000, -0.783, 0.377, 0.684, 0.781,
               -0.783, 1.000, 0.214, 0.335, -0.092,
               0.377, 0.214, 0.200, 0.231, 0.209,
               0.684, 0.335, 0.231, 1.000, -0.382,
               0.781, -0.092, 0.209, -0.382, 1.000;
      lambda << 6.0;
      break;
    default:
      throw DomainError("synthetic_example: k must be 1, 2 or 3");
  }
  return JpsnParams(2, 1, mu, sigma, lambda, true);
}

}  // namespace jpsn
