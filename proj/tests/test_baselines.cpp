#include <doctest.h>

#include <cmath>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "jpsn/baselines.hpp"
#include "jpsn/diagnostics.hpp"
#include "jpsn/errors.hpp"
#include "test_helpers.hpp"

using namespace jpsn;

namespace {

bool covers(std::vector<double> v, double truth) {
  return quantile(v, 0.025) <= truth && truth <= quantile(v, 0.975);
}

// Circular credible interval centred on the truth's opposite point.
bool covers_angle(const std::vector<double>& v, double truth) {
  std::vector<double> shifted;
  for (double a : v) shifted.push_back(wrap_angle(a - truth + kPi));
  return covers(shifted, kPi);
}

double weibull_mean(double theta, const AbeLeyParams& p) {
  const double m = 1.0 - std::tanh(p.kappa()) * std::cos(theta - p.mu().value());
  return std::tgamma(1.0 + 1.0 / p.alpha()) / (p.beta() * std::pow(m, 1.0 / p.alpha()));
}

}  // namespace

TEST_CASE("von Mises sampler") {
  Rng rng(51);
  std::vector<double> x(20000);
  for (auto& v : x) v = sample_von_mises(1.0, 2.0, rng);
  // CDF by quadrature of the normalized density.
  const double norm = std::cyl_bessel_i(0.0, 2.0) * kTwoPi;
  const testing::TabulatedCdf cdf([&](double s) { return std::exp(2.0 * std::cos(s - 1.0)) / norm; }, 0.0, kTwoPi);
  CHECK(std::abs(cdf.knots.back() - 1.0) < 1e-10);
  CHECK(testing::ks_one_sample(x, cdf) > 0.01);
  for (double v : x) {
    CHECK(v >= 0.0);
    CHECK(v < kTwoPi);
  }
}

TEST_CASE("Abe-Ley simulation") {
  Rng rng(52);
  SUBCASE("uniform angles without concentration or skew") {
    const auto d = simulate_abeley(AbeLeyParams(1.5, 0.8, Angle(1.0), 0.0, 0.0), 100000, rng);
    std::vector<double> obs(36, 0.0), exp(36, 100000.0 / 36.0);
    for (double a : d.angle_column(0)) obs[std::min<std::size_t>(35, static_cast<std::size_t>(a / kTwoPi * 36.0))] += 1.0;
    CHECK(testing::chi_square_pvalue(obs, exp) > 0.01);
  }
  SUBCASE("sharp circular marginal") {
    for (double kappa : {3.0, 6.0, 9.0}) {
      const AbeLeyParams pr(1.0, 1.0, Angle(2.0), kappa, 0.6);
      const auto d = simulate_abeley(pr, 20000, rng);
      // Marginal density in closed form, tabulated finely around the mode.
      const double tk = std::tanh(kappa);
      auto dens = [&](double t) {
        return (1.0 + 0.6 * std::sin(t - 2.0)) / (1.0 - tk * std::cos(t - 2.0)) / (kTwoPi * std::cosh(kappa));
      };
      const testing::TabulatedCdf cdf(dens, 0.0, kTwoPi, 200000);
      CHECK(std::abs(cdf.knots.back() - 1.0) < 1e-6);
      CHECK(testing::ks_one_sample(d.angle_column(0), cdf) > 0.01);
    }
  }
  SUBCASE("histogram agrees with the density") {
    const AbeLeyParams pr(2.0, 1.0, Angle(kPi), 1.0, 0.3);
    const std::size_t n = 1000000;
    const auto d = simulate_abeley(pr, n, rng);
    const auto th = d.angle_column(0), y = d.linear_column(0);
    auto ys = y;
    const double lo = quantile(ys, 0.0005), hi = quantile(ys, 0.9995);
    const int nb = 50;
    std::vector<double> counts(nb * nb, 0.0);
    double outside = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] < lo || y[t] >= hi) {
        outside += 1.0;
        continue;
      }
      const int i = std::min(nb - 1, static_cast<int>(th[t] / kTwoPi * nb));
      const int j = std::min(nb - 1, static_cast<int>((y[t] - lo) / (hi - lo) * nb));
      counts[static_cast<std::size_t>(i * nb + j)] += 1.0;
    }
    const double ht = kTwoPi / nb, hy = (hi - lo) / nb;
    double tv = 0.0, inside_mass = 0.0;
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j) {
        // 4 x 4 Gauss-Legendre per cell.
        static const double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
        static const double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
        double mass = 0.0;
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) {
            const double t = (i + 0.5 + 0.5 * gx[a]) * ht, v = lo + (j + 0.5 + 0.5 * gx[b]) * hy;
            mass += gw[a] * gw[b] * 0.25 * ht * hy * std::exp(abeley_log_density(Angle(t), v, pr));
          }
        inside_mass += mass;
        tv += std::abs(counts[static_cast<std::size_t>(i * nb + j)] / static_cast<double>(n) - mass);
      }
    tv += std::abs(outside / static_cast<double>(n) - (1.0 - inside_mass));
    CHECK(0.5 * tv < 0.02);
  }
  SUBCASE("Weibull conditional mean") {
    const AbeLeyParams pr(1.7, 0.6, Angle(2.0), 1.5, -0.4);
    const auto d = simulate_abeley(pr, 1000000, rng);
    for (double th0 : {0.5, 2.0, 4.0}) {
      std::vector<double> x;
      double implied = 0.0;
      for (std::size_t t = 0; t < d.size(); ++t) {
        const double a = d[t].angles[0].value();
        if (std::abs(a - th0) < 0.02) {
          x.push_back(std::exp(d[t].linears[0]));
          implied += weibull_mean(a, pr);
        }
      }
      REQUIRE(x.size() > 500);
      implied /= static_cast<double>(x.size());
      CHECK(std::abs(testing::sample_mean(x) - implied) <
            3.0 * testing::sample_sd(x) / std::sqrt(static_cast<double>(x.size())));
    }
  }
}

TEST_CASE("Abe-Ley MH recovery") {
  const AbeLeyParams truth(2.0, 1.0, Angle(kPi), 1.0, 0.3);
  MhConfig cfg;
  int good = 0;
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    Rng rng(100 + rep);
    const auto data = simulate_abeley(truth, 2000, rng);
    const auto fit = fit_abeley_mh(data, AbeLeyPrior{}, cfg, rng);
    REQUIRE(fit.size() == 2000);
    std::vector<double> a, b, m, k, l;
    for (const auto& d : fit.draws) {
      a.push_back(d.alpha());
      b.push_back(d.beta());
      m.push_back(d.mu().value());
      k.push_back(d.kappa());
      l.push_back(d.lambda_skew());
      CHECK(std::abs(d.lambda_skew()) <= 1.0);
    }
    for (double acc : fit.acceptance) {
      CHECK(acc >= 0.15);
      CHECK(acc <= 0.5);
    }
    if (covers(a, 2.0) && covers(b, 1.0) && covers_angle(m, kPi) && covers(k, 1.0) && covers(l, 0.3)) ++good;
  }
  CHECK(good >= 8);
}

TEST_CASE("Abe-Ley MH leaves the prior invariant without data") {
  // Every entry masked: the chain alternates exact imputation with MH on the
  // parameters, so its parameter marginals must be the prior. A concentrated
  // inverse-gamma prior keeps the augmented chain mixing.
  Rng rng(53);
  PolyCylDataset data(1, 1);
  for (int t = 0; t < 5; ++t) {
    PolyCylObservation o({Angle(0.0)}, {0.0});
    o.angle_missing = {true};
    o.linear_missing = {true};
    data.add(o);
  }
  const AbeLeyPrior prior{12.0, 11.0};
  MhConfig cfg;
  cfg.iterations = 102000;
  cfg.burnin = 2000;
  cfg.thin = 25;
  cfg.initial = AbeLeyParams(1.0, 1.0, Angle(kPi), 1.0, 0.0);
  const auto fit = fit_abeley_mh(data, prior, cfg, rng);
  std::vector<double> a, b, k, m, l;
  for (const auto& d : fit.draws) {
    a.push_back(d.alpha());
    b.push_back(d.beta());
    k.push_back(d.kappa());
    m.push_back(d.mu().value());
    l.push_back(d.lambda_skew());
  }
  auto inv_gamma_cdf = [&](double x) { return x <= 0.0 ? 0.0 : boost::math::gamma_q(prior.shape, prior.scale / x); };
  CHECK(testing::ks_one_sample(a, inv_gamma_cdf) > 0.01);
  CHECK(testing::ks_one_sample(b, inv_gamma_cdf) > 0.01);
  CHECK(testing::ks_one_sample(k, inv_gamma_cdf) > 0.01);
  CHECK(testing::ks_one_sample(m, [](double x) { return std::clamp(x / kTwoPi, 0.0, 1.0); }) > 0.01);
  CHECK(testing::ks_one_sample(l, [](double x) { return std::clamp((x + 1.0) / 2.0, 0.0, 1.0); }) > 0.01);
}

TEST_CASE("Abe-Ley density stays accurate when concentrated") {
  const AbeLeyParams pr(1.0, 1.0, Angle(1.0), 30.0, 0.0);
  // At delta = 1e-9 the modulation is about 2e-26 + 1e-18.
  const double lp = abeley_log_density(Angle(1.0 + 1e-9), 0.0, pr);
  const double ref = -std::log(kTwoPi) - (30.0 - std::log(2.0)) - (2.0 / (1.0 + std::exp(60.0)) + 0.5e-18);
  CHECK(std::abs(lp - ref) < 1e-9);
  Rng rng(57);
  const auto d = simulate_abeley(pr, 1000, rng);
  for (const auto& o : d.observations()) CHECK(std::isfinite(o.linears[0]));
}

TEST_CASE("Abe-Ley fits are seed-deterministic") {
  Rng g(54);
  const auto data = simulate_abeley(AbeLeyParams(2.0, 1.0, Angle(1.0), 0.5, 0.1), 200, g);
  MhConfig cfg;
  cfg.iterations = 600;
  cfg.burnin = 200;
  Rng a(7), b(7);
  const auto x = fit_abeley_mh(data, AbeLeyPrior{}, cfg, a);
  const auto y = fit_abeley_mh(data, AbeLeyPrior{}, cfg, b);
  REQUIRE(x.size() == y.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    CHECK(x.draws[k].alpha() == y.draws[k].alpha());
    CHECK(x.draws[k].mu().value() == y.draws[k].mu().value());
  }
  CHECK_THROWS_AS(fit_abeley_mh(PolyCylDataset(2, 1), AbeLeyPrior{}, cfg, a), DomainError);
  PolyCylDataset huge(1, 1);
  huge.add(PolyCylObservation({Angle(0.1)}, {800.0}));
  MhConfig fixed = cfg;
  fixed.initial = AbeLeyParams(1.0, 1.0, Angle(0.0), 1.0, 0.0);
  CHECK_THROWS_AS(fit_abeley_mh(huge, AbeLeyPrior{}, fixed, a), InitializationError);
  MhConfig bad = cfg;
  bad.target_acceptance = 1.0;
  CHECK_THROWS_AS(fit_abeley_mh(data, AbeLeyPrior{}, bad, a), DomainError);
}

TEST_CASE("Abe-Ley prediction") {
  Rng rng(55);
  const AbeLeyParams pr(2.0, 1.0, Angle(1.0), 1.0, 0.3);
  PolyCylDataset data(1, 1);
  PolyCylObservation o({Angle(0.0)}, {0.2});
  o.angle_missing = {true};
  data.add(o);
  const std::vector<AbeLeyParams> draws(20000, pr);
  const auto pred = predict_abeley(data, draws, rng);
  REQUIRE(pred.size() == 20000);
  std::vector<double> th;
  for (const auto& row : pred) th.push_back(row[0]);
  // θ | y density is proportional to the joint density at y = 0.2.
  const double z = testing::integrate([&](double t) { return std::exp(abeley_log_density(Angle(t), 0.2, pr)); }, 0.0, kTwoPi);
  const testing::TabulatedCdf cdf([&](double s) { return std::exp(abeley_log_density(Angle(s), 0.2, pr)) / z; }, 0.0,
                                  kTwoPi);
  CHECK(testing::ks_one_sample(th, cdf) > 0.01);
}

TEST_CASE("cylindrical JPSN") {
  Rng rng(56);
  CHECK(unit_blocks(2, 2).size() == 2);
  CHECK(unit_blocks(2, 2)[1].circular == std::vector<std::size_t>{1});
  CHECK_THROWS_AS(unit_blocks(2, 1), DomainError);
  CHECK_THROWS_AS(validate_partition({{{0}, {0}}}, 2, 2), DomainError);
  CHECK_THROWS_AS(validate_partition({{{0}, {0}}, {{0}, {1}}}, 2, 2), DomainError);
  validate_partition({{{0, 1}, {1}}, {{}, {0}}}, 2, 2);

  const auto sim = simulate_jpsn(synthetic_example(1).p == 2 ? JpsnParams(1, 1, Eigen::Vector3d(0.5, 1.0, -1.0),
                                                                          Eigen::Matrix3d::Identity(), Eigen::VectorXd::Constant(1, 1.0))
                                                              : JpsnParams(),
                                 100, rng);
  ChainConfig cfg;
  cfg.iterations = 200;
  cfg.burnin = 100;
  cfg.thin = 5;
  cfg.seed = 3;
  const PriorSpec prior = PriorSpec::defaults(1, 1);
  const auto cyl = fit_cylindrical_jpsn(sim.data, unit_blocks(1, 1), prior, cfg);
  Rng direct(3, 0);
  const auto ref = run_gibbs(sim.data, prior, cfg, direct);
  REQUIRE(cyl.fits.size() == 1);
  REQUIRE(cyl.fits[0].size() == ref.size());
  for (std::size_t k = 0; k < ref.size(); ++k) {
    CHECK(cyl.fits[0].raw[k].params.mu == ref.raw[k].params.mu);
    CHECK(cyl.fits[0].raw[k].params.sigma == ref.raw[k].params.sigma);
  }

  // Two units: each block only carries its own parameters.
  Eigen::VectorXd mu(6);
  mu << 0.5, 0.5, -0.5, 0.2, 1.0, -1.0;
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(6, 6);
  s(0, 4) = s(4, 0) = 0.5;
  const auto two = simulate_jpsn(JpsnParams(2, 2, mu, s, Eigen::Vector2d(1.0, -1.0)), 80, rng);
  const auto fit2 = fit_cylindrical_jpsn(two.data, unit_blocks(2, 2), PriorSpec::defaults(2, 2), cfg);
  REQUIRE(fit2.fits.size() == 2);
  for (const auto& f : fit2.fits) {
    CHECK(f.p == 1);
    CHECK(f.q == 1);
    CHECK(f.raw[0].params.sigma.rows() == 3);
  }
  CHECK_THROWS_AS(fit_cylindrical_jpsn(two.data, unit_blocks(1, 1), PriorSpec::defaults(2, 2), cfg), DomainError);
}
