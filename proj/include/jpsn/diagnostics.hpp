#pragma once

#include <span>
#include <string>
#include <vector>

namespace jpsn {

/// Effective sample size by Geyer's initial positive sequence.
/// Throws DomainError for chains shorter than 10 or with zero variance.
double ess(std::span<const double> chain);

/// Sample quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double prob);

double mean(std::span<const double> values);

struct ParamSummary {
  std::string name;
  double mean = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  /// NaN for a constant column.
  double ess = 0.0;
};

/// Posterior mean, central 95% interval and ESS for each named column.
std::vector<ParamSummary> summarize_columns(const std::vector<std::string>& names,
                                            const std::vector<std::vector<double>>& columns);

}  // namespace jpsn
