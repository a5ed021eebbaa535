#include "jpsn/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "jpsn/errors.hpp"
#include "jpsn/linalg.hpp"

namespace jpsn {

namespace {

constexpr double kSqrtTwoOverPi = 0.79788456080286535588;

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Index idx(std::size_t i) { return static_cast<Index>(i); }

/// Quantities that depend only on (mu, sigma, lambda) and are shared by all
/// latent updates of one scan.
struct ScanCache {
  std::size_t p = 0;
  std::size_t q = 0;
  MatrixXd precision;
  /// Σ_yw Σ_w^{-1}
  MatrixXd gain;
  /// Σ_{y|w}^{-1}
  MatrixXd cond_y_precision;
  /// Λ Σ_{y|w}^{-1} Λ + I
  MatrixXd d_precision;

  explicit ScanCache(const JpsnParams& params) : p(params.p), q(params.q) {
    precision = linalg::spd_inverse(params.sigma);
    if (q == 0) return;
    MatrixXd cond_y = params.sigma_y();
    if (p > 0) {
      auto llt = linalg::strict_llt(params.sigma_w());
      gain = llt.solve(params.sigma_wy()).transpose();
      cond_y -= gain * params.sigma_wy();
    } else {
      gain = MatrixXd::Zero(idx(q), 0);
    }
    cond_y_precision = linalg::spd_inverse(linalg::symmetrize(cond_y));
    d_precision = params.lambda.asDiagonal() * cond_y_precision * params.lambda.asDiagonal();
    d_precision += MatrixXd::Identity(idx(q), idx(q));
  }

  /// E(y | w) without the skew shift.
  VectorXd cond_y_mean(const JpsnParams& params, const VectorXd& x) const {
    VectorXd m = params.mu_y();
    if (p > 0) m += gain * (x.head(idx(2 * p)) - params.mu_w());
    return m;
  }
};

VectorXd shifted_mean(const JpsnParams& params, const VectorXd& d) {
  VectorXd m = params.mu;
  m.tail(idx(params.q)) += params.lambda.cwiseProduct(d);
  return m;
}

VectorXd sample_d_cached(const PolyCylObservation& obs, const VectorXd& r, const VectorXd& d_current,
                         const JpsnParams& params, const ScanCache& cache, Rng& rng) {
  const std::size_t q = params.q;
  VectorXd d = d_current;
  if (q == 0) return d;
  const VectorXd x = stack_wy(obs, r);
  const VectorXd resid = x.tail(idx(q)) - cache.cond_y_mean(params, x);
  const VectorXd b = params.lambda.cwiseProduct(cache.cond_y_precision * resid);
  const MatrixXd& Q = cache.d_precision;
  for (Index j = 0; j < idx(q); ++j) {
    const double qjj = Q(j, j);
    const double off = Q.row(j).dot(d) - qjj * d(j);
    d(j) = sample_trunc_normal_lower((b(j) - off) / qjj, 1.0 / qjj, 0.0, rng);
  }
  return d;
}

/// Slice-updates every observed radius of one row in place.
void update_radii(const PolyCylObservation& obs, VectorXd& r, const VectorXd& d, const JpsnParams& params,
                  const ScanCache& cache, std::size_t steps, Rng& rng) {
  const std::size_t p = params.p;
  if (p == 0) return;
  VectorXd x = stack_wy(obs, r);
  VectorXd z = cache.precision * (x - shifted_mean(params, d));
  for (std::size_t i = 0; i < p; ++i) {
    if (obs.angle_missing[i]) continue;
    const Index a = idx(2 * i);
    const double th = obs.angles[i].value();
    const Eigen::Vector2d u(std::cos(th), std::sin(th));
    const Eigen::Matrix2d Paa = cache.precision.block<2, 2>(a, a);
    const double A = u.dot(Paa * u);
    double ri = r(a / 2);
    for (std::size_t s = 0; s < steps; ++s) {
      const double B = ri * A - u.dot(z.segment<2>(a));
      const double r_new = slice_update_r(ri, A, B, rng);
      const Eigen::Vector2d delta = (r_new - ri) * u;
      z += cache.precision.col(a) * delta(0) + cache.precision.col(a + 1) * delta(1);
      ri = r_new;
    }
    r(a / 2) = ri;
  }
}

std::vector<Index> coordinate_split(const PolyCylObservation& obs, std::vector<Index>& observed) {
  std::vector<Index> miss;
  const std::size_t p = obs.angles.size();
  for (std::size_t i = 0; i < p; ++i) {
    auto& dst = obs.angle_missing[i] ? miss : observed;
    dst.push_back(idx(2 * i));
    dst.push_back(idx(2 * i + 1));
  }
  for (std::size_t j = 0; j < obs.linears.size(); ++j)
    (obs.linear_missing[j] ? miss : observed).push_back(idx(2 * p + j));
  return miss;
}

/// Starting values for masked entries that do not depend on what the masked
/// cells happen to contain.
void initialize_missing(PolyCylDataset& work, Eigen::MatrixXd& r) {
  const std::size_t q = work.q();
  std::vector<double> fill(q, 0.0);
  for (std::size_t j = 0; j < q; ++j) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& obs : work.observations())
      if (!obs.linear_missing[j]) {
        sum += obs.linears[j];
        ++n;
      }
    if (n > 0) fill[j] = sum / static_cast<double>(n);
  }
  for (std::size_t t = 0; t < work.size(); ++t) {
    auto& obs = work[t];
    for (std::size_t i = 0; i < work.p(); ++i)
      if (obs.angle_missing[i]) {
        obs.angles[i] = Angle(0.0);
        r(idx(t), idx(i)) = 1.0;
      }
    for (std::size_t j = 0; j < q; ++j)
      if (obs.linear_missing[j]) obs.linears[j] = fill[j];
  }
}

double entry_value(const PolyCylObservation& obs, const MissingEntry& e) {
  return e.circular ? obs.angles[e.index].value() : obs.linears[e.index];
}

}  // namespace

std::vector<MissingEntry> missing_entries(const PolyCylDataset& data) {
  std::vector<MissingEntry> out;
  for (std::size_t t = 0; t < data.size(); ++t) {
    const auto& obs = data[t];
    for (std::size_t i = 0; i < data.p(); ++i)
      if (obs.angle_missing[i]) out.push_back({t, true, i});
    for (std::size_t j = 0; j < data.q(); ++j)
      if (obs.linear_missing[j]) out.push_back({t, false, j});
  }
  return out;
}

PriorSpec PriorSpec::defaults(std::size_t p, std::size_t q) {
  const Index d = idx(2 * p + q);
  PriorSpec prior;
  prior.niw.mu0 = VectorXd::Zero(d);
  prior.niw.kappa0 = 0.001;
  prior.niw.nu0 = static_cast<double>(d) + 10.0;
  prior.niw.psi0 = MatrixXd::Identity(d, d);
  prior.lambda_mean = VectorXd::Zero(idx(q));
  prior.lambda_cov = 100.0 * MatrixXd::Identity(idx(q), idx(q));
  return prior;
}

PriorSpec PriorSpec::marginal(std::size_t p, const std::vector<std::size_t>& circular,
                              const std::vector<std::size_t>& linear) const {
  std::vector<Index> coords;
  for (std::size_t i : circular) {
    if (i >= p) throw DomainError("PriorSpec::marginal: circular index out of range");
    coords.push_back(idx(2 * i));
    coords.push_back(idx(2 * i + 1));
  }
  std::vector<Index> lam;
  for (std::size_t j : linear) {
    if (idx(j) >= lambda_mean.size()) throw DomainError("PriorSpec::marginal: linear index out of range");
    coords.push_back(idx(2 * p + j));
    lam.push_back(idx(j));
  }
  PriorSpec out;
  out.niw.mu0 = linalg::select(niw.mu0, coords);
  out.niw.kappa0 = niw.kappa0;
  out.niw.nu0 = niw.nu0 - static_cast<double>(niw.mu0.size() - idx(coords.size()));
  out.niw.psi0 = linalg::select(niw.psi0, coords, coords);
  out.lambda_mean = linalg::select(lambda_mean, lam);
  out.lambda_cov = linalg::select(lambda_cov, lam, lam);
  return out;
}

void PriorSpec::validate(std::size_t p, std::size_t q) const {
  niw.validate();
  if (niw.mu0.size() != idx(2 * p + q)) throw DomainError("prior: NIW dimension does not match (p, q)");
  if (lambda_mean.size() != idx(q) || lambda_cov.rows() != idx(q) || lambda_cov.cols() != idx(q))
    throw DomainError("prior: lambda hyperparameters do not match q");
  if (!linalg::is_symmetric(lambda_cov)) throw DomainError("prior: lambda covariance is not symmetric");
}

void ChainConfig::validate() const {
  if (thin < 1) throw DomainError("chain: thin must be at least 1");
  if (burnin >= iterations) throw DomainError("chain: burnin must be smaller than iterations");
  if (slice_steps < 1) throw DomainError("chain: slice_steps must be at least 1");
  if (init == InitMode::Supplied && !initial) throw DomainError("chain: supplied init without initial values");
}

std::vector<JpsnParams> PosteriorDraws::identified_params() const {
  std::vector<JpsnParams> out;
  out.reserve(identified.size());
  for (const auto& d : identified) out.push_back(d.params);
  return out;
}

std::vector<JpsnParams> PosteriorDraws::raw_params() const {
  std::vector<JpsnParams> out;
  out.reserve(raw.size());
  for (const auto& d : raw) out.push_back(d.params);
  return out;
}

NiwParams niw_full_conditional(const PolyCylDataset& data, const LatentState& latents,
                               const VectorXd& lambda, const PriorSpec& prior) {
  const std::size_t T = data.size();
  const NiwParams& p0 = prior.niw;
  if (T == 0) return p0;
  const Index dim = p0.mu0.size();
  const Index q = idx(data.q());
  MatrixXd eta(dim, idx(T));
  for (std::size_t t = 0; t < T; ++t) {
    VectorXd x = stack_wy(data[t], latents.r.row(idx(t)).transpose());
    if (q > 0) x.tail(q) -= lambda.cwiseProduct(latents.d.row(idx(t)).transpose());
    eta.col(idx(t)) = x;
  }
  const double n = static_cast<double>(T);
  const VectorXd bar = eta.rowwise().mean();
  const MatrixXd centered = eta.colwise() - bar;
  NiwParams post;
  post.kappa0 = p0.kappa0 + n;
  post.nu0 = p0.nu0 + n;
  post.mu0 = (p0.kappa0 * p0.mu0 + n * bar) / post.kappa0;
  const VectorXd diff = bar - p0.mu0;
  post.psi0 = p0.psi0 + centered * centered.transpose() + (p0.kappa0 * n / post.kappa0) * diff * diff.transpose();
  post.psi0 = linalg::symmetrize(post.psi0);
  return post;
}

NormalParams lambda_full_conditional(const PolyCylDataset& data, const LatentState& latents,
                                     const VectorXd& mu, const MatrixXd& sigma, const PriorSpec& prior) {
  JpsnParams params(data.p(), data.q(), mu, sigma, VectorXd::Zero(idx(data.q())));
  const ScanCache cache(params);
  const Index q = idx(data.q());
  auto prior_llt = linalg::strict_llt(prior.lambda_cov);
  MatrixXd post_prec = prior_llt.solve(MatrixXd::Identity(q, q));
  VectorXd rhs = prior_llt.solve(prior.lambda_mean);
  MatrixXd dd = MatrixXd::Zero(q, q);
  for (std::size_t t = 0; t < data.size(); ++t) {
    const VectorXd d = latents.d.row(idx(t)).transpose();
    const VectorXd x = stack_wy(data[t], latents.r.row(idx(t)).transpose());
    const VectorXd resid = x.tail(q) - cache.cond_y_mean(params, x);
    dd += d * d.transpose();
    rhs += d.cwiseProduct(cache.cond_y_precision * resid);
  }
  post_prec += cache.cond_y_precision.cwiseProduct(dd);
  post_prec = linalg::symmetrize(post_prec);
  auto llt = linalg::strict_llt(post_prec);
  NormalParams out;
  out.cov = linalg::symmetrize(llt.solve(MatrixXd::Identity(q, q)));
  out.mean = llt.solve(rhs);
  return out;
}

VectorXd sample_d(const PolyCylObservation& obs, const VectorXd& r, const VectorXd& d_current,
                  const JpsnParams& params, Rng& rng) {
  const ScanCache cache(params);
  return sample_d_cached(obs, r, d_current, params, cache, rng);
}

double slice_update_r(double r_current, double A, double B, Rng& rng) {
  if (!(A > 0.0)) throw DomainError("slice_update_r: A must be positive");
  if (!(r_current > 0.0)) throw DomainError("slice_update_r: r must be positive");
  const double centre = B / A;
  const double dev = r_current - centre;
  const double log_v = -0.5 * A * dev * dev + std::log(rng.uniform());
  const double half = std::sqrt(-2.0 * log_v / A);
  const double rho1 = centre + std::max(-centre, -half);
  const double rho2 = centre + half;
  const double v_star = rng.uniform();
  return std::sqrt((rho2 * rho2 - rho1 * rho1) * v_star + rho1 * rho1);
}

RCoefficients compute_r_coefficients(const PolyCylObservation& obs, std::size_t i, const JpsnParams& params,
                                     const VectorXd& r, const VectorXd& d) {
  if (i >= params.p) throw DomainError("compute_r_coefficients: angle index out of range");
  const MatrixXd P = linalg::spd_inverse(params.sigma);
  const VectorXd x = stack_wy(obs, r);
  const VectorXd z = P * (x - shifted_mean(params, d));
  const Index a = idx(2 * i);
  const double th = obs.angles[i].value();
  const Eigen::Vector2d u(std::cos(th), std::sin(th));
  RCoefficients out;
  out.A = u.dot(P.block<2, 2>(a, a) * u);
  out.B = r(idx(i)) * out.A - u.dot(z.segment<2>(a));
  return out;
}

void impute_missing(PolyCylObservation& obs, VectorXd& r, const VectorXd& d, const JpsnParams& params,
                    Rng& rng) {
  std::vector<Index> observed;
  const std::vector<Index> miss = coordinate_split(obs, observed);
  if (miss.empty()) return;
  const std::size_t p = params.p;
  const VectorXd x = stack_wy(obs, r);
  const VectorXd m = shifted_mean(params, d);
  VectorXd cmean = linalg::select(m, miss);
  MatrixXd ccov = linalg::select(params.sigma, miss, miss);
  if (!observed.empty()) {
    const MatrixXd s_mo = linalg::select(params.sigma, miss, observed);
    auto llt = linalg::strict_llt(linalg::select(params.sigma, observed, observed));
    cmean += s_mo * llt.solve(linalg::select(x, observed) - linalg::select(m, observed));
    ccov -= s_mo * llt.solve(s_mo.transpose());
  }
  const VectorXd draw = sample_mvn(MvnParams(cmean, ccov, MvnParams::Symmetry::Symmetrize), rng);
  std::size_t k = 0;
  for (std::size_t i = 0; i < p; ++i) {
    if (!obs.angle_missing[i]) continue;
    double w1 = draw(idx(k));
    double w2 = draw(idx(k + 1));
    k += 2;
    if (w1 == 0.0 && w2 == 0.0) w1 = std::numeric_limits<double>::min();
    obs.angles[i] = atan_star(w2, w1);
    r(idx(i)) = std::hypot(w1, w2);
  }
  for (std::size_t j = 0; j < params.q; ++j)
    if (obs.linear_missing[j]) obs.linears[j] = draw(idx(k++));
}

PosteriorDraws run_gibbs(const PolyCylDataset& data, const PriorSpec& prior, const ChainConfig& config,
                         Rng& rng) {
  config.validate();
  const std::size_t p = data.p();
  const std::size_t q = data.q();
  const std::size_t T = data.size();
  prior.validate(p, q);
  if (T == 0) throw InsufficientData("run_gibbs: empty dataset");

  JpsnParams params;
  if (config.init == InitMode::Supplied) {
    params = *config.initial;
    if (params.p != p || params.q != q) throw DomainError("run_gibbs: initial values do not match (p, q)");
    params.constrained = false;
  } else {
    const Index dim = idx(2 * p + q);
    params = JpsnParams(p, q, VectorXd::Zero(dim), MatrixXd::Identity(dim, dim), VectorXd::Zero(idx(q)));
  }

  PolyCylDataset work = data;
  LatentState latents{MatrixXd::Ones(idx(T), idx(p)), MatrixXd::Constant(idx(T), idx(q), kSqrtTwoOverPi)};
  initialize_missing(work, latents.r);
  if (config.init == InitMode::Supplied && config.initial_latents) {
    const LatentState& l = *config.initial_latents;
    if (l.r.rows() != idx(T) || l.r.cols() != idx(p) || l.d.rows() != idx(T) || l.d.cols() != idx(q))
      throw DomainError("run_gibbs: initial latents do not match the data");
    l.validate();
    latents = l;
  }

  PosteriorDraws out;
  out.p = p;
  out.q = q;
  out.T = T;
  out.config = config;
  out.missing = missing_entries(data);
  std::vector<std::size_t> rows_with_missing;
  for (std::size_t t = 0; t < T; ++t)
    if (data[t].any_missing()) rows_with_missing.push_back(t);
  out.raw.reserve(config.stored_count());
  out.identified.reserve(config.stored_count());

  for (std::size_t it = 0; it < config.iterations; ++it) {
    try {
      const ScanCache cache(params);
      for (std::size_t t = 0; t < T; ++t) {
        const VectorXd r = latents.r.row(idx(t)).transpose();
        if (q > 0)
          latents.d.row(idx(t)) =
              sample_d_cached(work[t], r, latents.d.row(idx(t)).transpose(), params, cache, rng).transpose();
      }
      for (std::size_t t = 0; t < T; ++t) {
        VectorXd r = latents.r.row(idx(t)).transpose();
        update_radii(work[t], r, latents.d.row(idx(t)).transpose(), params, cache, config.slice_steps, rng);
        latents.r.row(idx(t)) = r.transpose();
      }
      for (std::size_t t : rows_with_missing) {
        VectorXd r = latents.r.row(idx(t)).transpose();
        impute_missing(work[t], r, latents.d.row(idx(t)).transpose(), params, rng);
        latents.r.row(idx(t)) = r.transpose();
      }

      const NiwDraw nd = sample_niw(niw_full_conditional(work, latents, params.lambda, prior), rng);
      params.mu = nd.mu;
      params.sigma = linalg::symmetrize(nd.sigma);
      if (q > 0) {
        const NormalParams lp = lambda_full_conditional(work, latents, params.mu, params.sigma, prior);
        params.lambda = sample_mvn(MvnParams(lp.mean, lp.cov, MvnParams::Symmetry::Symmetrize), rng);
      }
    } catch (const NumericalError& e) {
      throw NumericalError("iteration " + std::to_string(it + 1) + ": " + e.what());
    }

    if (it < config.burnin || (it - config.burnin + 1) % config.thin != 0) continue;
    RawDraw raw{it + 1, params, {}};
    const Identified ident = identify(params);
    IdentifiedDraw id{it + 1, ident.params, ident.c, {}};
    if (config.store_latents) {
      raw.latents = latents;
      id.latents = latents;
      for (std::size_t i = 0; i < p; ++i) id.latents.r.col(idx(i)) /= ident.c.c(idx(i));
    }
    std::vector<double> imp;
    imp.reserve(out.missing.size());
    for (const auto& e : out.missing) imp.push_back(entry_value(work[e.t], e));
    out.raw.push_back(std::move(raw));
    out.identified.push_back(std::move(id));
    out.imputed.push_back(std::move(imp));
  }
  return out;
}

std::vector<std::vector<double>> predict_missing(const PolyCylDataset& data, const std::vector<JpsnParams>& draws,
                                                 std::size_t sweeps, Rng& rng) {
  if (sweeps < 1) throw DomainError("predict_missing: sweeps must be at least 1");
  const std::size_t p = data.p();
  const std::size_t q = data.q();
  const auto entries = missing_entries(data);
  std::vector<std::size_t> rows;
  for (std::size_t t = 0; t < data.size(); ++t)
    if (data[t].any_missing()) rows.push_back(t);

  PolyCylDataset work = data;
  LatentState latents{MatrixXd::Ones(idx(data.size()), idx(p)),
                      MatrixXd::Constant(idx(data.size()), idx(q), kSqrtTwoOverPi)};
  initialize_missing(work, latents.r);

  std::vector<std::vector<double>> out;
  out.reserve(draws.size());
  for (const auto& params : draws) {
    if (params.p != p || params.q != q) throw DomainError("predict_missing: draw does not match (p, q)");
    const ScanCache cache(params);
    for (std::size_t t : rows) {
      VectorXd r = latents.r.row(idx(t)).transpose();
      VectorXd d = latents.d.row(idx(t)).transpose();
      for (std::size_t s = 0; s < sweeps; ++s) {
        d = sample_d_cached(work[t], r, d, params, cache, rng);
        update_radii(work[t], r, d, params, cache, 1, rng);
        impute_missing(work[t], r, d, params, rng);
      }
      latents.r.row(idx(t)) = r.transpose();
      latents.d.row(idx(t)) = d.transpose();
    }
    std::vector<double> row;
    row.reserve(entries.size());
    for (const auto& e : entries) row.push_back(entry_value(work[e.t], e));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace jpsn
