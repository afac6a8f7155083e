#pragma once

#include "curriculum/progression.hpp"

#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace curriculum {

enum class NoiseKind { identity, local, global, random };

std::string_view to_string(NoiseKind kind) noexcept;
NoiseKind parse_noise_kind(std::string_view name);

struct NoisePreset {
  int points;
  double sigma;
};

// Many knots: sharp, localised deviations. Few knots: smooth, wide ones.
inline constexpr NoisePreset kLocalNoisePreset{25, 0.35};
inline constexpr NoisePreset kGlobalNoisePreset{4, 0.35};
inline constexpr int kRandomNoisePoints = 10;

/// Perturbation [0,1] -> [0,1] applied to a complexity before mapping.
///
/// Stored as a piecewise cubic Hermite interpolant (knot values plus knot
/// slopes); identity has no knots. Evaluation is clipped to [0, 1].
class NoiseFunction {
public:
  static NoiseFunction identity();
  NoiseFunction(NoiseKind kind, std::vector<double> xs, std::vector<double> ys,
                std::vector<double> slopes);

  double operator()(double x) const;

  NoiseKind kind() const noexcept { return kind_; }
  const std::vector<double>& knots_x() const noexcept { return xs_; }
  const std::vector<double>& knots_y() const noexcept { return ys_; }
  const std::vector<double>& slopes() const noexcept { return slopes_; }

private:
  NoiseFunction() = default;

  NoiseKind kind_ = NoiseKind::identity;
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> slopes_;
};

/// Rejection sample from Normal(mean, sigma^2) restricted to [lo, hi].
double sample_truncated_normal(double mean, double sigma, double lo, double hi,
                               std::mt19937_64& rng);

/// Knot slopes for a monotonicity-preserving cubic: three-point derivative
/// estimates limited by Hyman's filter (|d_i| <= 3 min(|secant_{i-1}|,
/// |secant_i|), zero at local extrema).
std::vector<double> monotone_slopes(std::span<const double> xs, std::span<const double> ys);

/// Knot slopes of the natural cubic spline through the points.
std::vector<double> natural_spline_slopes(std::span<const double> xs, std::span<const double> ys);

/// Monotone noise from `n + 1` truncated-normal increments; `kind` tags the
/// result (local or global).
NoiseFunction gen_monotone_noise(int n, double sigma, std::mt19937_64& rng,
                                 NoiseKind kind = NoiseKind::local);

/// Unconstrained noise: `n + 1` equally spaced knots with uniform heights,
/// endpoints pinned to 0 and 1, natural cubic interpolation.
NoiseFunction gen_random_noise(int n, std::mt19937_64& rng);

/// Dispatches on `kind` using the given knot count and sigma.
NoiseFunction gen_noise(NoiseKind kind, int points, double sigma, std::mt19937_64& rng);

Complexity apply_noise(const NoiseFunction& noise, Complexity c);

} // namespace curriculum
