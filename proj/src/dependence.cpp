#include "jpsn/dependence.hpp"

#include <algorithm>
#include <cmath>

#include "jpsn/diagnostics.hpp"
#include "jpsn/errors.hpp"

namespace jpsn {

namespace {

void check_lengths(std::size_t a, std::size_t b, std::size_t min_len, const char* what) {
  if (a != b) throw DomainError(std::string(what) + ": sample lengths differ");
  if (a < min_len) throw DomainError(std::string(what) + ": too few samples");
}

double circular_mean(std::span<const double> theta) {
  double s = 0.0, c = 0.0;
  for (double t : theta) {
    s += std::sin(t);
    c += std::cos(t);
  }
  if (s == 0.0 && c == 0.0) throw DomainError("circular mean undefined for a balanced sample");
  return std::atan2(s, c);
}

bool excludes_zero(const DependenceCell& c) { return c.lower > 0.0 || c.upper < 0.0; }

DependenceCell summarize(const std::vector<double>& values) {
  DependenceCell c;
  c.mean = mean(values);
  c.lower = quantile(values, 0.025);
  c.upper = quantile(values, 0.975);
  return c;
}

}  // namespace

double circ_circ_corr(std::span<const double> theta_a, std::span<const double> theta_b) {
  check_lengths(theta_a.size(), theta_b.size(), 2, "circ_circ_corr");
  const double ma = circular_mean(theta_a);
  const double mb = circular_mean(theta_b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t t = 0; t < theta_a.size(); ++t) {
    const double a = std::sin(theta_a[t] - ma);
    const double b = std::sin(theta_b[t] - mb);
    sab += a * b;
    saa += a * a;
    sbb += b * b;
  }
  if (!(saa > 0.0 && sbb > 0.0)) throw DomainError("circ_circ_corr: degenerate series");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double pearson(std::span<const double> a, std::span<const double> b) {
  check_lengths(a.size(), b.size(), 2, "pearson");
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    sab += (a[t] - ma) * (b[t] - mb);
    saa += (a[t] - ma) * (a[t] - ma);
    sbb += (b[t] - mb) * (b[t] - mb);
  }
  if (!(saa > 0.0 && sbb > 0.0)) throw DomainError("pearson: zero variance");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double circ_lin_r2(std::span<const double> theta, std::span<const double> y) {
  check_lengths(theta.size(), y.size(), 3, "circ_lin_r2");
  const double my = mean(y);
  double syy = 0.0;
  for (double v : y) syy += (v - my) * (v - my);
  if (!(syy > 0.0)) throw DomainError("circ_lin_r2: zero variance in y");
  std::vector<double> c(theta.size()), s(theta.size());
  for (std::size_t t = 0; t < theta.size(); ++t) {
    c[t] = std::cos(theta[t]);
    s[t] = std::sin(theta[t]);
  }
  const double rcy = pearson(c, y);
  const double rsy = pearson(s, y);
  const double rcs = pearson(c, s);
  const double denom = 1.0 - rcs * rcs;
  if (!(denom > 0.0)) throw DomainError("circ_lin_r2: cos and sin are collinear");
  return std::clamp((rcy * rcy + rsy * rsy - 2.0 * rcy * rsy * rcs) / denom, 0.0, 1.0);
}

DependenceMatrix dependence_matrix(std::span<const JpsnParams> draws, std::size_t mc_n, Rng& rng) {
  if (draws.empty()) throw DomainError("dependence_matrix: no draws");
  if (mc_n < 3) throw DomainError("dependence_matrix: mc_n must be at least 3");
  const std::size_t p = draws.front().p;
  const std::size_t q = draws.front().q;
  const std::size_t k = p + q;
  std::vector<std::vector<double>> values(k * k);

  for (const auto& params : draws) {
    if (params.p != p || params.q != q) throw DomainError("dependence_matrix: draws differ in shape");
    Rng local = rng.spawn(rng.stream());
    const Simulation sim = simulate_jpsn(params, mc_n, local);
    std::vector<std::vector<double>> cols;
    for (std::size_t i = 0; i < p; ++i) cols.push_back(sim.data.angle_column(i));
    for (std::size_t j = 0; j < q; ++j) cols.push_back(sim.data.linear_column(j));
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        double v;
        if (b < p)
          v = circ_circ_corr(cols[a], cols[b]);
        else if (a < p)
          v = circ_lin_r2(cols[a], cols[b]);
        else
          v = pearson(cols[a], cols[b]);
        values[a * k + b].push_back(v);
      }
    }
  }

  DependenceMatrix out{p, q, std::vector<DependenceCell>(k * k)};
  for (std::size_t a = 0; a < k; ++a) {
    out(a, a) = DependenceCell{1.0, 1.0, 1.0, false};
    for (std::size_t b = a + 1; b < k; ++b) {
      DependenceCell cell = summarize(values[a * k + b]);
      if (a < p && b >= p) {
        // ρ² is non-negative, so its interval never straddles zero; use the
        // covariances between the W_i block and Y_j instead.
        const std::size_t j = b - p;
        for (std::size_t comp = 0; comp < 2 && !cell.flagged; ++comp) {
          std::vector<double> cov;
          cov.reserve(draws.size());
          for (const auto& params : draws)
            cov.push_back(params.sigma(static_cast<Eigen::Index>(2 * a + comp), static_cast<Eigen::Index>(2 * p + j)));
          cell.flagged = excludes_zero(summarize(cov));
        }
      } else {
        cell.flagged = excludes_zero(cell);
      }
      out(a, b) = cell;
      out(b, a) = cell;
    }
  }
  return out;
}

}  // namespace jpsn
