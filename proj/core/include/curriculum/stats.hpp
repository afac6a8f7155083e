#pragma once

#include <cstddef>
#include <span>

namespace curriculum {

/// Sample mean with a two-sided 95% Student-t confidence half-width.
struct MeanCI {
  double mean = 0.0;
  double half_width = 0.0;
  std::size_t n = 0;

  double lower() const noexcept { return mean - half_width; }
  double upper() const noexcept { return mean + half_width; }
  bool contains(double v) const noexcept { return v >= lower() && v <= upper(); }
  bool overlaps(const MeanCI& other) const noexcept {
    return lower() <= other.upper() && other.lower() <= upper();
  }
};

/// Throws std::invalid_argument on an empty sample. A single sample has
/// zero half-width.
MeanCI mean_ci95(std::span<const double> sample);

/// Spearman rank correlation with average ranks for ties. Returns 0 when
/// either side is constant.
double spearman_rho(std::span<const double> x, std::span<const double> y);

/// Total variation sum |v[k+1] - v[k]|.
double total_variation(std::span<const double> values);

} // namespace curriculum
