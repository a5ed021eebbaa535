#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "jpsn/model.hpp"
#include "jpsn/rng.hpp"

namespace jpsn {

/// Sample circular-circular correlation, each series centred on its sample
/// circular mean. Throws DomainError on length mismatch or a degenerate series.
double circ_circ_corr(std::span<const double> theta_a, std::span<const double> theta_b);

/// Squared circular-linear correlation built from the Pearson correlations of
/// (cos θ, sin θ, y). Clamped to [0, 1].
double circ_lin_r2(std::span<const double> theta, std::span<const double> y);

double pearson(std::span<const double> a, std::span<const double> b);

struct DependenceCell {
  double mean = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool flagged = false;
};

/// (p + q) x (p + q) matrix, circular dimensions first. Circular pairs hold
/// circ_circ_corr, mixed pairs circ_lin_r2 and linear pairs Pearson.
struct DependenceMatrix {
  std::size_t p = 0;
  std::size_t q = 0;
  std::vector<DependenceCell> cells;

  std::size_t size() const noexcept { return p + q; }
  const DependenceCell& operator()(std::size_t a, std::size_t b) const { return cells[a * size() + b]; }
  DependenceCell& operator()(std::size_t a, std::size_t b) { return cells[a * size() + b]; }
};

/// Forward-simulates mc_n observations per posterior draw and summarizes the
/// sample dependence measures across draws. Each draw gets its own stream
/// spawned from rng in order.
DependenceMatrix dependence_matrix(std::span<const JpsnParams> draws, std::size_t mc_n, Rng& rng);

}  // namespace jpsn
