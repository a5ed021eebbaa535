#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "jpsn/dists.hpp"
#include "jpsn/errors.hpp"
#include "test_helpers.hpp"

using namespace jpsn;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

Eigen::Matrix2d random_spd2(Rng& rng) {
  Eigen::Matrix2d a;
  a << rng.normal(), rng.normal(), rng.normal(), rng.normal();
  return a * a.transpose() + 0.2 * Eigen::Matrix2d::Identity();
}

}  // namespace

TEST_CASE("std_normal_cdf") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(std::abs(std_normal_cdf(1.959964) - 0.975) < 1e-6);
  const double quad = testing::integrate(normal_pdf, -40.0, 1.959964);
  CHECK(std::abs(std_normal_cdf(1.959964) - quad) < 1e-10);
  Rng rng(1);
  for (int k = 0; k < 1000; ++k) {
    const double x = 6.0 * rng.normal();
    CHECK(std::abs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0) < 1e-12);
  }
  for (double x : {-8.0, -3.0, -1.0, 0.5, 2.5}) CHECK(std::abs(std_normal_cdf(x) - testing::integrate(normal_pdf, -60.0, x)) < 1e-10);
  CHECK(std::abs(std_normal_quantile(0.975) - 1.959963984540054) < 1e-12);
}

TEST_CASE("sample_mvn") {
  Rng rng(2);
  const VectorXd mean = (VectorXd(3) << 1.0, -2.0, 3.5).finished();
  const MvnParams degenerate(mean, MatrixXd::Zero(3, 3));
  CHECK(sample_mvn(degenerate, rng) == mean);

  const MvnParams id(VectorXd::Zero(2), MatrixXd::Identity(2, 2));
  const int n = 100000;
  Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
  Eigen::Vector2d s = Eigen::Vector2d::Zero();
  for (int k = 0; k < n; ++k) {
    const VectorXd x = sample_mvn(id, rng);
    acc += x * x.transpose();
    s += x;
  }
  const Eigen::Vector2d m = s / n;
  const Eigen::Matrix2d cov = acc / n - m * m.transpose();
  CHECK((cov - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 0.03);

  MatrixXd asym(2, 2);
  asym << 1.0, 0.5, 0.4, 1.0;
  CHECK_THROWS_AS(MvnParams(VectorXd::Zero(2), asym), NumericalError);
  const MvnParams sym(VectorXd::Zero(2), asym, MvnParams::Symmetry::Symmetrize);
  CHECK(sym.cov()(0, 1) == doctest::Approx(0.45));

  MatrixXd neg(2, 2);
  neg << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(MvnParams(VectorXd::Zero(2), neg), NumericalError);
}

TEST_CASE("truncated normal") {
  Rng rng(3);
  const int n = 100000;
  std::vector<double> x(n);
  for (auto& v : x) v = sample_trunc_normal_lower(0.0, 1.0, 0.0, rng);
  const double se = testing::sample_sd(x) / std::sqrt(n);
  CHECK(std::abs(testing::sample_mean(x) - std::sqrt(2.0 / kPi)) < 3.0 * se);
  CHECK(*std::min_element(x.begin(), x.end()) > 0.0);

  // A rejection oracle: plain normals kept above zero.
  std::vector<double> oracle;
  while (oracle.size() < 20000) {
    const double z = rng.normal();
    if (z > 0) oracle.push_back(z);
  }
  CHECK(testing::ks_two_sample(std::vector<double>(x.begin(), x.begin() + 20000), oracle) > 0.01);

  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> plain(20000);
  for (auto& v : plain) v = sample_trunc_normal_lower(1.0, 4.0, ninf, rng);
  CHECK(testing::ks_one_sample(plain, [](double v) { return std_normal_cdf((v - 1.0) / 2.0); }) > 0.01);

  for (int k = 0; k < 10000; ++k) CHECK(sample_trunc_normal_lower(0.0, 1.0, 8.0, rng) > 8.0);

  bool ok = true;
  for (int k = 0; k < 1000000; ++k) {
    const double off = (k % 3 == 0) ? 40.0 : (k % 3 == 1 ? -40.0 : 6.0 * (rng.uniform() - 0.5));
    const double lower = 1.5 + off * 0.7;
    const double v = sample_trunc_normal_lower(1.5, 0.49, lower, rng);
    if (!(v > lower) || !std::isfinite(v)) ok = false;
  }
  CHECK(ok);
  CHECK_THROWS_AS(sample_trunc_normal_lower(0.0, 0.0, 0.0, rng), DomainError);
}

TEST_CASE("normal-inverse-Wishart") {
  Rng rng(4);
  NiwParams p{VectorXd::Zero(2), 1.0, 10.0, MatrixXd::Identity(2, 2)};
  const int n = 100000;
  std::vector<double> s00(n), s01(n), s11(n);
  for (int k = 0; k < n; ++k) {
    const NiwDraw d = sample_niw(p, rng);
    if (k < 2000) {
      CHECK((d.sigma - d.sigma.transpose()).cwiseAbs().maxCoeff() == 0.0);
      CHECK(d.sigma.llt().info() == Eigen::Success);
    }
    s00[k] = d.sigma(0, 0);
    s01[k] = d.sigma(0, 1);
    s11[k] = d.sigma(1, 1);
  }
  auto within = [&](const std::vector<double>& v, double target) {
    return std::abs(testing::sample_mean(v) - target) < 3.0 * testing::sample_sd(v) / std::sqrt(n);
  };
  CHECK(within(s00, 1.0 / 7.0));
  CHECK(within(s11, 1.0 / 7.0));
  CHECK(within(s01, 0.0));

  NiwParams tight{(VectorXd(2) << 0.3, -0.7).finished(), 1e12, 5.0, MatrixXd::Identity(2, 2)};
  for (int k = 0; k < 100; ++k) CHECK((sample_niw(tight, rng).mu - tight.mu0).cwiseAbs().maxCoeff() < 1e-5);

  NiwParams bad{VectorXd::Zero(3), 1.0, 2.0, MatrixXd::Identity(3, 3)};
  CHECK_THROWS_AS(sample_niw(bad, rng), DomainError);
}

TEST_CASE("univariate projected normal density") {
  for (int k = 0; k < 64; ++k) {
    const double th = kTwoPi * k / 64.0;
    CHECK(std::abs(std::exp(pn1_log_density(Angle(th), Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity())) -
                   1.0 / kTwoPi) < 1e-12);
  }
  Rng rng(5);
  for (int k = 0; k < 25; ++k) {
    const Eigen::Vector2d mu(2.0 * rng.normal(), 2.0 * rng.normal());
    const Eigen::Matrix2d s = random_spd2(rng);
    const double total =
        testing::integrate([&](double t) { return std::exp(pn1_log_density(Angle(t), mu, s)); }, 0.0, kTwoPi);
    CHECK(std::abs(total - 1.0) < 1e-6);
    // The radial scale cancels.
    const double c = 0.3 + 3.0 * rng.uniform();
    const Angle th(kTwoPi * rng.uniform());
    CHECK(std::abs(pn1_log_density(th, c * mu, c * c * s) - pn1_log_density(th, mu, s)) < 1e-10);
  }

  Eigen::Matrix2d s;
  s << 1.0, -0.9, -0.9, 1.0;
  const Eigen::Vector2d mu(-0.1, -0.2);
  const int n = 2048;
  std::vector<double> f(n);
  for (int k = 0; k < n; ++k) f[k] = pn1_log_density(Angle(kTwoPi * k / n), mu, s);
  int maxima = 0;
  for (int k = 0; k < n; ++k)
    if (f[k] > f[(k + n - 1) % n] && f[k] > f[(k + 1) % n]) ++maxima;
  CHECK(maxima == 2);

  CHECK_THROWS_AS(pn1_log_density(Angle(0.0), mu, Eigen::Matrix2d::Zero()), NumericalError);
  // Far in the tail the density stays finite and positive.
  CHECK(std::isfinite(pn1_log_density(Angle(kPi), Eigen::Vector2d(30.0, 0.0), Eigen::Matrix2d::Identity())));
}

TEST_CASE("skew-normal density") {
  Rng rng(6);
  SUBCASE("no skew reduces to the normal") {
    for (int k = 0; k < 20; ++k) {
      const double y = 3.0 * rng.normal(), m = rng.normal(), v = 0.2 + rng.uniform();
      const auto d = ssn_log_density(VectorXd::Constant(1, y), VectorXd::Constant(1, m), MatrixXd::Constant(1, 1, v),
                                     VectorXd::Zero(1));
      CHECK(std::abs(d.log_density - (std_normal_log_pdf((y - m) / std::sqrt(v)) - 0.5 * std::log(v))) < 1e-10);
    }
  }
  SUBCASE("q = 1 integrates to one") {
    auto total = [](double m, double v, double l) {
      return testing::integrate(
          [&](double y) {
            return std::exp(ssn_log_density(VectorXd::Constant(1, y), VectorXd::Constant(1, m),
                                            MatrixXd::Constant(1, 1, v), VectorXd::Constant(1, l))
                                .log_density);
          },
          m - 60.0 - 10.0 * std::abs(l), m + 60.0 + 10.0 * std::abs(l));
    };
    CHECK(std::abs(total(-2.0, 1.0, 3.0) - 1.0) < 1e-6);
    for (int k = 0; k < 25; ++k) {
      const double m = 3.0 * rng.normal(), v = 0.1 + 3.0 * rng.uniform(), l = 6.0 * rng.normal();
      CHECK(std::abs(total(m, v, l) - 1.0) < 1e-6);
    }
  }
  SUBCASE("q = 2 agrees with simulation") {
    const VectorXd mu = (VectorXd(2) << 0.5, -1.0).finished();
    MatrixXd s(2, 2);
    s << 1.0, 0.4, 0.4, 0.8;
    const VectorXd lam = (VectorXd(2) << 1.5, -1.0).finished();
    const int n = 1000000;
    std::vector<Eigen::Vector2d> draws(n);
    for (auto& d : draws) d = simulate_ssn(mu, s, lam, rng);
    const double h = 0.1;
    int checked = 0;
    for (int k = 0; k < 20; ++k) {
      const VectorXd pt = mu + (VectorXd(2) << 0.8 * std::cos(k) + 0.6, -0.6 * std::sin(1.3 * k) - 0.3).finished();
      const auto dens = ssn_log_density(pt, mu, s, lam, {16384, 99});
      const double f = std::exp(dens.log_density);
      std::size_t count = 0;
      for (const auto& d : draws)
        if (std::abs(d(0) - pt(0)) < h / 2 && std::abs(d(1) - pt(1)) < h / 2) ++count;
      const double est = static_cast<double>(count) / (n * h * h);
      const double se = std::sqrt(std::max<double>(count, 1.0)) / (n * h * h);
      CHECK(std::abs(est - f) < 4.0 * se + 0.03 * f + 4.0 * dens.cdf_std_error * f / std::max(dens.cdf_factor, 1e-12));
      ++checked;
    }
    CHECK(checked == 20);
  }
  CHECK_THROWS_AS(ssn_log_density(VectorXd::Zero(2), VectorXd::Zero(2), MatrixXd::Identity(2, 2), VectorXd::Zero(1)),
                  DomainError);
}

TEST_CASE("Monte Carlo normal CDF") {
  Rng rng(7);
  const std::size_t pairs = 4096;
  for (double u : {-1.0, 0.0, 0.7, 2.0}) {
    const auto e = mvn_cdf_mc(VectorXd::Constant(1, u), MatrixXd::Identity(1, 1), pairs, rng);
    CHECK(std::abs(e.estimate - std_normal_cdf(u)) <= 3.0 * e.std_error + 1e-12);
    CHECK(e.std_error <= 0.5 / std::sqrt(static_cast<double>(pairs)));
  }
  const auto one = mvn_cdf_mc((VectorXd(2) << 10.0, 10.0).finished(), MatrixXd::Identity(2, 2), pairs, rng);
  CHECK(std::abs(one.estimate - 1.0) < 1e-6);
  const VectorXd up = (VectorXd(3) << 0.3, -0.5, 1.1).finished();
  const auto ind = mvn_cdf_mc(up, MatrixXd::Identity(3, 3), pairs, rng);
  const double prod = std_normal_cdf(0.3) * std_normal_cdf(-0.5) * std_normal_cdf(1.1);
  CHECK(std::abs(ind.estimate - prod) < 3.0 * ind.std_error);
  CHECK(ind.std_error <= 0.5 / std::sqrt(static_cast<double>(pairs)));

  MatrixXd bad(2, 2);
  bad << 1.0, 1.5, 1.5, 1.0;
  CHECK_THROWS_AS(mvn_cdf_mc(VectorXd::Zero(2), bad, pairs, rng), NumericalError);
}

TEST_CASE("Abe-Ley density") {
  const AbeLeyParams flat(1.5, 0.7, Angle(0.0), 0.0, 0.0);
  for (double y : {-1.0, 0.0, 1.2}) {
    const double ref = abeley_log_density(Angle(0.0), y, flat);
    for (int k = 1; k < 16; ++k) CHECK(std::abs(abeley_log_density(Angle(k * 0.4), y, flat) - ref) < 1e-12);
  }

  const AbeLeyParams pr(1.0, 1.0, Angle(0.0), 1.0, 0.5);
  const double total = testing::integrate(
      [&](double th) {
        return testing::integrate([&](double y) { return std::exp(abeley_log_density(Angle(th), y, pr)); }, -20.0,
                                  20.0);
      },
      0.0, kTwoPi);
  CHECK(std::abs(total - 1.0) < 1e-4);

  Rng rng(8);
  for (int k = 0; k < 20; ++k) {
    const AbeLeyParams r(0.2 + 3.0 * rng.uniform(), 0.2 + 3.0 * rng.uniform(), Angle(kTwoPi * rng.uniform()),
                         3.0 * rng.uniform(), 2.0 * rng.uniform() - 1.0);
    bool ok = true;
    for (int i = 0; i < 200; ++i)
      for (int j = 0; j < 200; ++j) {
        const double f = std::exp(abeley_log_density(Angle(kTwoPi * i / 200.0), -10.0 + 20.0 * j / 199.0, r));
        if (!(f >= 0.0)) ok = false;
      }
    CHECK(ok);
  }
  CHECK_THROWS_AS(AbeLeyParams(0.0, 1.0, Angle(0.0), 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(AbeLeyParams(1.0, 1.0, Angle(0.0), -1.0, 0.0), DomainError);
  CHECK_THROWS_AS(AbeLeyParams(1.0, 1.0, Angle(0.0), 1.0, 1.5), DomainError);
}
