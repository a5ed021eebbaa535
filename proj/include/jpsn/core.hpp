#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace jpsn {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// An angle in radians, always stored reduced to [0, 2π).
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double radians);

  double value() const noexcept { return value_; }

  Angle operator+(double radians) const { return Angle(value_ + radians); }
  Angle operator-(double radians) const { return Angle(value_ - radians); }
  Angle operator+(Angle other) const { return Angle(value_ + other.value_); }
  Angle operator-(Angle other) const { return Angle(value_ - other.value_); }
  Angle operator-() const { return Angle(-value_); }

  friend bool operator==(Angle, Angle) = default;

 private:
  double value_ = 0.0;
};

/// Reduces any real to [0, 2π).
double wrap_angle(double radians);

/// Quadrant-corrected arctangent of s/c in [0, 2π). Throws DomainError at (0, 0).
Angle atan_star(double s, double c);

/// (r cos θ, r sin θ). Throws DomainError unless r > 0.
Eigen::Vector2d polar_embed(Angle theta, double r);

/// Shortest arc between two angles, in [0, π].
double angular_distance(Angle a, Angle b);

/// One row of a poly-cylindrical dataset. Masked entries keep whatever value
/// they hold but must be ignored by likelihood code.
struct PolyCylObservation {
  std::vector<Angle> angles;
  std::vector<double> linears;
  std::vector<bool> angle_missing;
  std::vector<bool> linear_missing;

  PolyCylObservation() = default;
  PolyCylObservation(std::vector<Angle> a, std::vector<double> y);

  bool any_missing() const;
  std::size_t missing_count() const;
  std::size_t observed_count() const;
};

/// T observations of p angles and q reals.
class PolyCylDataset {
 public:
  PolyCylDataset() = default;
  PolyCylDataset(std::size_t p, std::size_t q, std::vector<std::string> labels = {});

  std::size_t p() const noexcept { return p_; }
  std::size_t q() const noexcept { return q_; }
  std::size_t size() const noexcept { return obs_.size(); }
  bool empty() const noexcept { return obs_.empty(); }

  /// Throws DomainError if the observation does not conform to (p, q).
  void add(PolyCylObservation obs);

  const PolyCylObservation& operator[](std::size_t t) const { return obs_[t]; }
  PolyCylObservation& operator[](std::size_t t) { return obs_[t]; }
  const std::vector<PolyCylObservation>& observations() const noexcept { return obs_; }

  /// p + q names, circular dimensions first.
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::size_t missing_count() const;

  /// Restriction to the listed circular and linear dimensions.
  PolyCylDataset subset(const std::vector<std::size_t>& circular,
                        const std::vector<std::size_t>& linear) const;

  /// Column i of the circular block (raw stored values, masks ignored).
  std::vector<double> angle_column(std::size_t i) const;
  std::vector<double> linear_column(std::size_t j) const;

 private:
  std::size_t p_ = 0;
  std::size_t q_ = 0;
  std::vector<std::string> labels_;
  std::vector<PolyCylObservation> obs_;
};

/// Turning angles and log step lengths of a planar track, aligned so that
/// entry t pairs the turn at position t+1 with the step leaving it.
struct TrackFeatures {
  std::vector<double> turning_angles;
  std::vector<double> log_step_lengths;
  std::vector<bool> turning_missing;
  std::vector<bool> step_missing;
  std::size_t degenerate_steps = 0;

  std::size_t size() const noexcept { return turning_angles.size(); }
};

/// Throws InsufficientData for fewer than three positions. Zero-length steps
/// do not throw; the affected entries are marked missing.
TrackFeatures derive_track_features(std::span<const Eigen::Vector2d> positions);

/// Stacks several tracks into a (k, k) dataset, truncated to the shortest.
PolyCylDataset tracks_to_dataset(const std::vector<TrackFeatures>& tracks,
                                 const std::vector<std::string>& names = {});

}  // namespace jpsn
