#include "jpsn/core.hpp"

#include <algorithm>
#include <cmath>

#include "jpsn/errors.hpp"

namespace jpsn {

double wrap_angle(double radians) {
  if (!std::isfinite(radians)) throw DomainError("angle is not finite");
  double v = std::fmod(radians, kTwoPi);
  if (v < 0.0) v += kTwoPi;
  // fmod of a tiny negative plus 2π can round up to 2π itself.
  if (v >= kTwoPi) v = 0.0;
  return v;
}

Angle::Angle(double radians) : value_(wrap_angle(radians)) {}

Angle atan_star(double s, double c) {
  if (c > 0.0 && s >= 0.0) return Angle(std::atan(s / c));
  if (c == 0.0 && s > 0.0) return Angle(kPi / 2.0);
  if (c < 0.0) return Angle(std::atan(s / c) + kPi);
  if (c >= 0.0 && s < 0.0) return Angle(std::atan(s / c) + kTwoPi);
  throw DomainError("atan_star: undefined at (0, 0)");
}

Eigen::Vector2d polar_embed(Angle theta, double r) {
  if (!(r > 0.0)) throw DomainError("polar_embed: radius must be positive");
  return {r * std::cos(theta.value()), r * std::sin(theta.value())};
}

double angular_distance(Angle a, Angle b) {
  return kPi - std::abs(kPi - std::abs(a.value() - b.value()));
}

PolyCylObservation::PolyCylObservation(std::vector<Angle> a, std::vector<double> y)
    : angles(std::move(a)),
      linears(std::move(y)),
      angle_missing(angles.size(), false),
      linear_missing(linears.size(), false) {}

bool PolyCylObservation::any_missing() const { return missing_count() > 0; }

std::size_t PolyCylObservation::missing_count() const {
  return static_cast<std::size_t>(std::count(angle_missing.begin(), angle_missing.end(), true) +
                                  std::count(linear_missing.begin(), linear_missing.end(), true));
}

std::size_t PolyCylObservation::observed_count() const {
  return angles.size() + linears.size() - missing_count();
}

PolyCylDataset::PolyCylDataset(std::size_t p, std::size_t q, std::vector<std::string> labels)
    : p_(p), q_(q), labels_(std::move(labels)) {
  if (p + q < 1) throw DomainError("dataset needs at least one dimension");
  if (labels_.empty()) {
    for (std::size_t i = 0; i < p; ++i) labels_.push_back("theta" + std::to_string(i + 1));
    for (std::size_t j = 0; j < q; ++j) labels_.push_back("y" + std::to_string(j + 1));
  }
  if (labels_.size() != p + q) throw DomainError("dataset labels must number p + q");
}

void PolyCylDataset::add(PolyCylObservation obs) {
  if (obs.angles.size() != p_ || obs.linears.size() != q_)
    throw DomainError("observation does not conform to the dataset dimensions");
  if (obs.angle_missing.empty()) obs.angle_missing.assign(p_, false);
  if (obs.linear_missing.empty()) obs.linear_missing.assign(q_, false);
  if (obs.angle_missing.size() != p_ || obs.linear_missing.size() != q_)
    throw DomainError("observation missing mask does not conform to the dataset dimensions");
  obs_.push_back(std::move(obs));
}

std::size_t PolyCylDataset::missing_count() const {
  std::size_t n = 0;
  for (const auto& o : obs_) n += o.missing_count();
  return n;
}

PolyCylDataset PolyCylDataset::subset(const std::vector<std::size_t>& circular,
                                      const std::vector<std::size_t>& linear) const {
  std::vector<std::string> names;
  for (auto i : circular) {
    if (i >= p_) throw DomainError("subset: circular index out of range");
    names.push_back(labels_[i]);
  }
  for (auto j : linear) {
    if (j >= q_) throw DomainError("subset: linear index out of range");
    names.push_back(labels_[p_ + j]);
  }
  PolyCylDataset out(circular.size(), linear.size(), std::move(names));
  for (const auto& o : obs_) {
    PolyCylObservation s;
    for (auto i : circular) {
      s.angles.push_back(o.angles[i]);
      s.angle_missing.push_back(o.angle_missing[i]);
    }
    for (auto j : linear) {
      s.linears.push_back(o.linears[j]);
      s.linear_missing.push_back(o.linear_missing[j]);
    }
    out.add(std::move(s));
  }
  return out;
}

std::vector<double> PolyCylDataset::angle_column(std::size_t i) const {
  std::vector<double> col;
  col.reserve(obs_.size());
  for (const auto& o : obs_) col.push_back(o.angles[i].value());
  return col;
}

std::vector<double> PolyCylDataset::linear_column(std::size_t j) const {
  std::vector<double> col;
  col.reserve(obs_.size());
  for (const auto& o : obs_) col.push_back(o.linears[j]);
  return col;
}

TrackFeatures derive_track_features(std::span<const Eigen::Vector2d> positions) {
  if (positions.size() < 3) throw InsufficientData("a track needs at least three positions");
  const std::size_t n_steps = positions.size() - 1;
  std::vector<double> step(n_steps);
  std::vector<double> heading(n_steps, 0.0);
  std::vector<bool> degenerate(n_steps, false);
  TrackFeatures out;
  for (std::size_t s = 0; s < n_steps; ++s) {
    const Eigen::Vector2d delta = positions[s + 1] - positions[s];
    step[s] = delta.norm();
    if (step[s] == 0.0) {
      degenerate[s] = true;
      ++out.degenerate_steps;
      continue;
    }
    heading[s] = atan_star(delta.y(), delta.x()).value();
  }
  const std::size_t n = positions.size() - 2;
  out.turning_angles.resize(n, 0.0);
  out.log_step_lengths.resize(n, 0.0);
  out.turning_missing.resize(n, false);
  out.step_missing.resize(n, false);
  for (std::size_t t = 0; t < n; ++t) {
    if (degenerate[t] || degenerate[t + 1]) {
      out.turning_missing[t] = true;
    } else {
      out.turning_angles[t] = wrap_angle(heading[t + 1] - heading[t]);
    }
    if (degenerate[t + 1]) {
      out.step_missing[t] = true;
    } else {
      out.log_step_lengths[t] = std::log(step[t + 1]);
    }
  }
  return out;
}

PolyCylDataset tracks_to_dataset(const std::vector<TrackFeatures>& tracks,
                                 const std::vector<std::string>& names) {
  if (tracks.empty()) throw InsufficientData("no tracks");
  const std::size_t k = tracks.size();
  std::vector<std::string> labels;
  if (!names.empty()) {
    if (names.size() != k) throw DomainError("one name per track is required");
    for (const auto& n : names) labels.push_back("turn_" + n);
    for (const auto& n : names) labels.push_back("logstep_" + n);
  }
  PolyCylDataset data(k, k, labels);
  std::size_t len = tracks.front().size();
  for (const auto& tr : tracks) len = std::min(len, tr.size());
  for (std::size_t t = 0; t < len; ++t) {
    PolyCylObservation o;
    for (const auto& tr : tracks) {
      o.angles.emplace_back(tr.turning_angles[t]);
      o.angle_missing.push_back(tr.turning_missing[t]);
    }
    for (const auto& tr : tracks) {
      o.linears.push_back(tr.log_step_lengths[t]);
      o.linear_missing.push_back(tr.step_missing[t]);
    }
    data.add(std::move(o));
  }
  return data;
}

}  // namespace jpsn
