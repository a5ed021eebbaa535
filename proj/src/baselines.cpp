#include "jpsn/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jpsn/errors.hpp"

namespace jpsn {

namespace {

double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

/// 1 - tanh(κ) cos(δ) without cancellation for large κ or small δ.
double weibull_modulation(double kappa, double delta) {
  const double sh = std::sin(0.5 * delta);
  return 2.0 / (1.0 + std::exp(2.0 * kappa)) + std::tanh(kappa) * 2.0 * sh * sh;
}

/// Abe-Ley log-likelihood with sums over the data cached so that updates of
/// beta and kappa cost O(1). The modulation is split as
/// (1 - tanh κ) + tanh κ (1 - cos δ) to stay accurate for concentrated data.
class AbeLeyLik {
 public:
  AbeLeyLik(const std::vector<double>& theta, const std::vector<double>& y) : theta_(theta), y_(y) {
    sum_y_ = 0.0;
    for (double v : y_) sum_y_ += v;
    ea_.resize(y_.size());
  }

  /// Recomputes everything that depends on alpha, mu or lambda.
  void set(double alpha, double mu, double lambda) {
    alpha_ = alpha;
    s0_ = hav_ = skew_ = 0.0;
    for (std::size_t t = 0; t < y_.size(); ++t) {
      ea_[t] = std::exp(alpha * y_[t]);
      s0_ += ea_[t];
    }
    set_location(mu, lambda);
  }

  void set_location(double mu, double lambda) {
    hav_ = skew_ = 0.0;
    for (std::size_t t = 0; t < y_.size(); ++t) {
      const double delta = theta_[t] - mu;
      const double sh = std::sin(0.5 * delta);
      hav_ += ea_[t] * 2.0 * sh * sh;
      skew_ += std::log1p(lambda * std::sin(delta));
    }
  }

  double value(double beta, double kappa) const {
    const double n = static_cast<double>(y_.size());
    const double weibull = s0_ * 2.0 / (1.0 + std::exp(2.0 * kappa)) + std::tanh(kappa) * hav_;
    return n * (std::log(alpha_) + alpha_ * std::log(beta) - std::log(kTwoPi) - log_cosh(kappa)) + skew_ +
           alpha_ * sum_y_ - std::pow(beta, alpha_) * weibull;
  }

 private:
  std::vector<double> theta_, y_, ea_;
  double sum_y_ = 0.0;
  double alpha_ = 1.0;
  double s0_ = 0.0, hav_ = 0.0, skew_ = 0.0;
};

double reflect_skew(double base, double mu, double lambda, Rng& rng) {
  if (rng.uniform() < 0.5 * (1.0 + lambda * std::sin(base - mu))) return wrap_angle(base);
  return wrap_angle(2.0 * mu - base);
}

double sample_theta_given_y(double y, const AbeLeyParams& pr, Rng& rng) {
  const double conc = std::exp(pr.alpha() * (std::log(pr.beta()) + y)) * std::tanh(pr.kappa());
  const double base = sample_von_mises(pr.mu().value(), conc, rng);
  return reflect_skew(base, pr.mu().value(), pr.lambda_skew(), rng);
}

double sample_y_given_theta(double theta, const AbeLeyParams& pr, Rng& rng) {
  const double g = weibull_modulation(pr.kappa(), theta - pr.mu().value());
  const double e = rng.exponential();
  return (std::log(e) - std::log(g)) / pr.alpha() - std::log(pr.beta());
}

/// Exact draw from the circular marginal. With s = tan((θ - μ)/2) the
/// unskewed marginal is Cauchy in s with scale exp(-κ); the sine factor is
/// added by reflection.
double sample_theta_marginal(const AbeLeyParams& pr, Rng& rng) {
  const double s = std::exp(-pr.kappa()) * std::tan(kPi * (rng.uniform() - 0.5));
  const double base = pr.mu().value() + 2.0 * std::atan(s);
  return reflect_skew(base, pr.mu().value(), pr.lambda_skew(), rng);
}

void impute_row(PolyCylObservation& obs, const AbeLeyParams& pr, Rng& rng) {
  const bool mt = obs.angle_missing[0];
  const bool my = obs.linear_missing[0];
  if (mt && my) {
    const double th = sample_theta_marginal(pr, rng);
    obs.angles[0] = Angle(th);
    obs.linears[0] = sample_y_given_theta(th, pr, rng);
  } else if (mt) {
    obs.angles[0] = Angle(sample_theta_given_y(obs.linears[0], pr, rng));
  } else if (my) {
    obs.linears[0] = sample_y_given_theta(obs.angles[0].value(), pr, rng);
  }
}

void require_cylindrical(const PolyCylDataset& data) {
  if (data.p() != 1 || data.q() != 1) throw DomainError("Abe-Ley model needs exactly one angle and one linear");
}

}  // namespace

void MhConfig::validate() const {
  if (thin < 1) throw DomainError("mh: thin must be at least 1");
  if (burnin >= iterations) throw DomainError("mh: burnin must be smaller than iterations");
  if (window < 1) throw DomainError("mh: adaptation window must be at least 1");
  if (!(target_acceptance > 0.0 && target_acceptance < 1.0))
    throw DomainError("mh: target acceptance must lie in (0, 1)");
  for (double s : scales)
    if (!(s > 0.0)) throw DomainError("mh: step scales must be positive");
}

double sample_von_mises(double mu, double kappa, Rng& rng) {
  if (!(kappa >= 0.0)) throw DomainError("von Mises: kappa must be non-negative");
  if (kappa < 1e-8) return wrap_angle(kTwoPi * rng.uniform());
  // Best-Fisher loses precision here; the wrapped-normal limit is exact to O(1/kappa).
  if (kappa > 1e8) return wrap_angle(mu + rng.normal() / std::sqrt(kappa));
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  double f;
  for (;;) {
    const double z = std::cos(kPi * rng.uniform());
    f = (1.0 + r * z) / (r + z);
    const double c = kappa * (r - f);
    const double u2 = rng.uniform();
    if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) break;
  }
  const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
  return wrap_angle(mu + sign * std::acos(std::clamp(f, -1.0, 1.0)));
}

PolyCylDataset simulate_abeley(const AbeLeyParams& params, std::size_t T, Rng& rng) {
  PolyCylDataset out(1, 1);
  for (std::size_t t = 0; t < T; ++t) {
    const double th = sample_theta_marginal(params, rng);
    out.add(PolyCylObservation({Angle(th)}, {sample_y_given_theta(th, params, rng)}));
  }
  return out;
}

AbeLeyDraws fit_abeley_mh(const PolyCylDataset& data, const AbeLeyPrior& prior, const MhConfig& config,
                          Rng& rng) {
  require_cylindrical(data);
  config.validate();
  if (!(prior.shape > 0.0 && prior.scale > 0.0)) throw DomainError("Abe-Ley prior: shape and scale must be positive");
  if (data.empty()) throw InsufficientData("fit_abeley_mh: empty dataset");

  PolyCylDataset work = data;
  AbeLeyDraws out;
  out.missing = missing_entries(data);
  std::vector<std::size_t> rows;
  for (std::size_t t = 0; t < data.size(); ++t)
    if (data[t].any_missing()) rows.push_back(t);

  // Starting point from the observed entries only.
  double sy = 0.0, ss = 0.0, sc = 0.0;
  std::size_t ny = 0;
  for (const auto& obs : data.observations()) {
    if (!obs.linear_missing[0]) {
      sy += obs.linears[0];
      ++ny;
    }
    if (!obs.angle_missing[0]) {
      ss += std::sin(obs.angles[0].value());
      sc += std::cos(obs.angles[0].value());
    }
  }
  const double mean_y = ny > 0 ? sy / static_cast<double>(ny) : 0.0;
  const double mu0 = (ss == 0.0 && sc == 0.0) ? 0.0 : wrap_angle(std::atan2(ss, sc));
  const double beta0 = std::exp(-mean_y);
  if (!config.initial && !(beta0 > 0.0 && std::isfinite(beta0)))
    throw InitializationError("Abe-Ley: linear values are too extreme for the default starting scale");
  AbeLeyParams current = config.initial ? *config.initial : AbeLeyParams(1.0, beta0, Angle(mu0), 0.5, 0.0);
  for (std::size_t t : rows) impute_row(work[t], current, rng);

  std::array<double, 5> u{std::log(current.alpha()), std::log(current.beta()),
                          std::log(std::max(current.kappa(), 1e-300)), current.mu().value(),
                          std::atanh(std::clamp(current.lambda_skew(), -1.0 + 1e-12, 1.0 - 1e-12))};
  std::array<double, 5> log_scale;
  for (std::size_t k = 0; k < 5; ++k) log_scale[k] = std::log(config.scales[k]);

  auto log_prior = [&](const std::array<double, 5>& v) {
    double lp = 0.0;
    for (std::size_t k = 0; k < 3; ++k) lp += -prior.shape * v[k] - prior.scale * std::exp(-v[k]);
    return lp - 2.0 * log_cosh(v[4]);
  };

  std::vector<double> theta(data.size()), y(data.size());
  auto load = [&] {
    for (std::size_t t = 0; t < work.size(); ++t) {
      theta[t] = work[t].angles[0].value();
      y[t] = work[t].linears[0];
    }
  };
  load();
  AbeLeyLik lik(theta, y);
  lik.set(std::exp(u[0]), u[3], std::tanh(u[4]));
  double cur_ll = lik.value(std::exp(u[1]), std::exp(u[2]));
  if (!std::isfinite(cur_ll)) throw InitializationError("Abe-Ley likelihood is not finite at the starting values");

  std::array<std::size_t, 5> batch_acc{}, post_acc{};
  std::size_t batch_index = 0, post_iters = 0;

  for (std::size_t it = 0; it < config.iterations; ++it) {
    if (!rows.empty()) {
      const AbeLeyParams pr(std::exp(u[0]), std::exp(u[1]), Angle(u[3]), std::exp(u[2]), std::tanh(u[4]));
      for (std::size_t t : rows) impute_row(work[t], pr, rng);
      load();
      lik = AbeLeyLik(theta, y);
      lik.set(std::exp(u[0]), u[3], std::tanh(u[4]));
      cur_ll = lik.value(std::exp(u[1]), std::exp(u[2]));
    }

    for (std::size_t k = 0; k < 5; ++k) {
      std::array<double, 5> prop = u;
      prop[k] += std::exp(log_scale[k]) * rng.normal();
      if (k == 3) prop[3] = wrap_angle(prop[3]);
      if (k == 0) lik.set(std::exp(prop[0]), prop[3], std::tanh(prop[4]));
      if (k == 3 || k == 4) lik.set_location(prop[3], std::tanh(prop[4]));
      const double prop_ll = lik.value(std::exp(prop[1]), std::exp(prop[2]));
      const double log_ratio = prop_ll + log_prior(prop) - cur_ll - log_prior(u);
      if (std::isfinite(prop_ll) && std::log(rng.uniform()) < log_ratio) {
        u = prop;
        cur_ll = prop_ll;
        ++batch_acc[k];
        if (it >= config.burnin) ++post_acc[k];
      } else {
        if (k == 0) lik.set(std::exp(u[0]), u[3], std::tanh(u[4]));
        if (k == 3 || k == 4) lik.set_location(u[3], std::tanh(u[4]));
      }
    }

    if (it < config.burnin && (it + 1) % config.window == 0) {
      ++batch_index;
      const double step = std::min(0.25, 1.0 / std::sqrt(static_cast<double>(batch_index)));
      for (std::size_t k = 0; k < 5; ++k) {
        const double rate = static_cast<double>(batch_acc[k]) / static_cast<double>(config.window);
        log_scale[k] += rate > config.target_acceptance ? step : -step;
        batch_acc[k] = 0;
      }
    }
    if (it >= config.burnin) ++post_iters;

    if (it < config.burnin || (it - config.burnin + 1) % config.thin != 0) continue;
    out.iterations.push_back(it + 1);
    out.draws.emplace_back(std::exp(u[0]), std::exp(u[1]), Angle(u[3]), std::exp(u[2]), std::tanh(u[4]));
    std::vector<double> imp;
    imp.reserve(out.missing.size());
    for (const auto& e : out.missing)
      imp.push_back(e.circular ? work[e.t].angles[0].value() : work[e.t].linears[0]);
    out.imputed.push_back(std::move(imp));
  }
  for (std::size_t k = 0; k < 5; ++k) {
    out.acceptance[k] = post_iters ? static_cast<double>(post_acc[k]) / static_cast<double>(post_iters) : 0.0;
    out.scales[k] = std::exp(log_scale[k]);
  }
  return out;
}

std::vector<std::vector<double>> predict_abeley(const PolyCylDataset& data, const std::vector<AbeLeyParams>& draws,
                                                Rng& rng) {
  require_cylindrical(data);
  const auto entries = missing_entries(data);
  std::vector<std::vector<double>> out;
  out.reserve(draws.size());
  PolyCylDataset work = data;
  for (const auto& pr : draws) {
    std::vector<double> row;
    row.reserve(entries.size());
    std::size_t last_t = std::numeric_limits<std::size_t>::max();
    for (const auto& e : entries) {
      if (e.t != last_t) {
        work[e.t] = data[e.t];
        impute_row(work[e.t], pr, rng);
        last_t = e.t;
      }
      row.push_back(e.circular ? work[e.t].angles[0].value() : work[e.t].linears[0]);
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<CylBlock> unit_blocks(std::size_t p, std::size_t q) {
  if (p != q) throw DomainError("unit blocks need as many angles as linears");
  std::vector<CylBlock> out;
  for (std::size_t k = 0; k < p; ++k) out.push_back({{k}, {k}});
  return out;
}

void validate_partition(const std::vector<CylBlock>& blocks, std::size_t p, std::size_t q) {
  std::vector<int> seen_c(p, 0), seen_l(q, 0);
  for (const auto& b : blocks) {
    if (b.circular.empty() && b.linear.empty()) throw DomainError("partition: empty block");
    for (std::size_t i : b.circular) {
      if (i >= p) throw DomainError("partition: circular index out of range");
      ++seen_c[i];
    }
    for (std::size_t j : b.linear) {
      if (j >= q) throw DomainError("partition: linear index out of range");
      ++seen_l[j];
    }
  }
  const auto once = [](int n) { return n == 1; };
  if (!std::all_of(seen_c.begin(), seen_c.end(), once) || !std::all_of(seen_l.begin(), seen_l.end(), once))
    throw DomainError("partition: every dimension must appear in exactly one block");
}

CylindricalFit fit_cylindrical_jpsn(const PolyCylDataset& data, const std::vector<CylBlock>& blocks,
                                    const PriorSpec& full_prior, const ChainConfig& config) {
  validate_partition(blocks, data.p(), data.q());
  full_prior.validate(data.p(), data.q());
  CylindricalFit out;
  out.blocks = blocks;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const auto& b = blocks[k];
    const PolyCylDataset sub = data.subset(b.circular, b.linear);
    const PriorSpec prior = full_prior.marginal(data.p(), b.circular, b.linear);
    ChainConfig cfg = config;
    cfg.stream = config.stream + k;
    if (cfg.init == InitMode::Supplied) throw DomainError("cylindrical fit supports default initialization only");
    Rng rng(cfg.seed, cfg.stream);
    out.fits.push_back(run_gibbs(sub, prior, cfg, rng));
  }
  return out;
}

}  // namespace jpsn
