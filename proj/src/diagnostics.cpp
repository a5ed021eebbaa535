#include "jpsn/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "jpsn/errors.hpp"

namespace jpsn {

double mean(std::span<const double> values) {
  if (values.empty()) throw DomainError("mean of an empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double ess(std::span<const double> chain) {
  const std::size_t n = chain.size();
  if (n < 10) throw DomainError("ess needs at least 10 draws");
  const double m = mean(chain);
  std::vector<double> centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = chain[i] - m;

  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += centered[i] * centered[i + lag];
    return s / static_cast<double>(n);
  };
  const double gamma0 = autocov(0);
  if (!(gamma0 > 0.0)) throw DomainError("ess of a constant chain");

  // Sum consecutive lag pairs while they stay positive.
  double sum_pairs = 0.0;
  for (std::size_t k = 0; k + 1 < n; k += 2) {
    const double pair = autocov(k) + autocov(k + 1);
    if (!(pair > 0.0)) break;
    sum_pairs += pair;
  }
  const double tau = (-gamma0 + 2.0 * sum_pairs) / gamma0;
  return static_cast<double>(n) / std::max(tau, std::numeric_limits<double>::min());
}

double quantile(std::vector<double> values, double prob) {
  if (values.empty()) throw DomainError("quantile of an empty sample");
  if (!(prob >= 0.0 && prob <= 1.0)) throw DomainError("quantile probability outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = prob * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<ParamSummary> summarize_columns(const std::vector<std::string>& names,
                                            const std::vector<std::vector<double>>& columns) {
  if (names.size() != columns.size()) throw DomainError("summarize_columns: names and columns differ in count");
  std::vector<ParamSummary> out;
  out.reserve(names.size());
  for (std::size_t k = 0; k < names.size(); ++k) {
    const auto& col = columns[k];
    ParamSummary s;
    s.name = names[k];
    s.mean = mean(col);
    s.lower = quantile(col, 0.025);
    s.upper = quantile(col, 0.975);
    const bool constant = std::all_of(col.begin(), col.end(), [&](double v) { return v == col.front(); });
    if (constant || col.size() < 10)
      s.ess = std::numeric_limits<double>::quiet_NaN();
    else
      s.ess = ess(col);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace jpsn
