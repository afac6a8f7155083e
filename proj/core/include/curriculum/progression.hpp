#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <variant>
#include <vector>

namespace curriculum {

inline constexpr double kGravity = 9.81;

// Speeds at or below this are treated as a finished progression.
inline constexpr double kSpeedEndTolerance = 1e-12;

/// Scalar task difficulty in [0, 1]; 0 is the easiest task, 1 the final task.
class Complexity {
public:
  constexpr Complexity() = default;

  /// Throws std::invalid_argument when `value` is NaN or outside [0, 1].
  explicit Complexity(double value);

  /// Clamps into [0, 1]. NaN is rejected.
  static Complexity clamped(double value);

  constexpr double value() const noexcept { return value_; }

  friend constexpr bool operator==(Complexity, Complexity) = default;
  friend constexpr auto operator<=>(Complexity, Complexity) = default;

private:
  double value_ = 0.0;
};

struct LinearParams {
  std::int64_t end_step = 1;

  void validate() const;
};

/// End step plus slope parameter `s`; the exponent used by the curve is 1/s.
class ExponentialParams {
public:
  ExponentialParams(std::int64_t end_step, double slope);

  std::int64_t end_step() const noexcept { return end_step_; }
  double slope() const noexcept { return slope_; }
  double alpha() const noexcept { return alpha_; }

private:
  std::int64_t end_step_;
  double slope_;
  double alpha_;
};

enum class FrictionFormulation { uniform, monotonic, speed };

std::string_view to_string(FrictionFormulation formulation) noexcept;
FrictionFormulation parse_friction_formulation(std::string_view name);

struct FrictionParams {
  double mass = 1.0;
  double gravity = kGravity;
  int interval = 1;
  FrictionFormulation formulation = FrictionFormulation::uniform;

  void validate() const;
};

/// Per-worker state of the sliding-box scheduler.
///
/// `window` is a ring buffer holding the last `interval` performance samples;
/// `oldest` indexes the sample taken `interval` steps ago.
struct FrictionState {
  std::int64_t step = 0;
  double prev_speed = 1.0;
  double min_speed = 1.0;
  std::vector<double> window;
  std::size_t oldest = 0;
  std::mt19937_64 rng;

  double oldest_performance() const { return window[oldest]; }
  std::size_t window_size() const noexcept { return window.size(); }
};

/// Linear ramp: min(t / end_step, 1).
Complexity linear_progress(std::int64_t t, const LinearParams& params);

/// ((e^{t/t_e})^alpha - 1) / (e^alpha - 1) on [0, t_e], 1 afterwards.
///
/// Evaluated through expm1 with the large-|alpha| branch rewritten so that
/// steep curves (small |s|) stay finite.
Complexity exponential_progress(std::int64_t t, const ExponentialParams& params);

/// Speed and minimum speed start at one; the window is prefilled with the
/// performance of an agent that takes no actions, so the progression can
/// react from the very first sample.
FrictionState init_friction_state(const FrictionParams& params, double baseline_performance,
                                  std::uint64_t seed);

/// Advances the scheduler by one performance sample and returns the new
/// complexity.
///
///   mu    = (p_t - p_{t-i}) / i
///   s_t   = clamp(s_{t-1} - m * g * mu, 0, 1)
///   s_min = min(s_min, s_t)
///
/// uniform:   1 - U[s_min, s_t]
/// monotonic: 1 - s_min
/// speed:     1 - s_t
Complexity friction_step(FrictionState& state, const FrictionParams& params, double performance);

/// Mass for which the progression ends once the interval-mean performance
/// has risen by `target_rise` above the initial interval mean: m = 1 / (g * rise).
double solve_mass(double target_rise, double gravity = kGravity);

/// Episode-cadence view of a progression function.
///
/// Fixed progressions are evaluated on elapsed environment steps; the
/// friction progression advances once per recorded performance sample and
/// holds its value in between. `constant` is the no-curriculum baseline.
class Progression {
public:
  static Progression linear(LinearParams params);
  static Progression exponential(ExponentialParams params);
  static Progression friction(FrictionParams params, double baseline_performance,
                              std::uint64_t seed);
  static Progression constant(Complexity value);

  Complexity current(std::int64_t elapsed_steps) const;
  void record(double performance);

  bool adaptive() const noexcept;
  const FrictionState* friction_state() const noexcept;
  const FrictionParams* friction_params() const noexcept;

private:
  struct Linear {
    LinearParams params;
  };
  struct Exponential {
    ExponentialParams params;
  };
  struct Friction {
    FrictionParams params;
    FrictionState state;
    Complexity last;
  };
  struct Constant {
    Complexity value;
  };

  using Impl = std::variant<Linear, Exponential, Friction, Constant>;
  explicit Progression(Impl impl) : impl_(std::move(impl)) {}

  Impl impl_;
};

} // namespace curriculum
