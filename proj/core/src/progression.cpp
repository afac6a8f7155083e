#include "curriculum/progression.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace curriculum {

Complexity::Complexity(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument("complexity must lie in [0, 1], got " + std::to_string(value));
  }
}

Complexity Complexity::clamped(double value) {
  if (std::isnan(value)) {
    throw std::invalid_argument("complexity is NaN");
  }
  return Complexity(std::clamp(value, 0.0, 1.0));
}

void LinearParams::validate() const {
  if (end_step < 1) {
    throw std::invalid_argument("linear progression end step must be >= 1");
  }
}

ExponentialParams::ExponentialParams(std::int64_t end_step, double slope)
    : end_step_(end_step), slope_(slope), alpha_(0.0) {
  if (end_step < 1) {
    throw std::invalid_argument("exponential progression end step must be >= 1");
  }
  if (slope == 0.0 || !std::isfinite(slope)) {
    throw std::invalid_argument("exponential progression slope must be finite and non-zero");
  }
  alpha_ = 1.0 / slope;
}

std::string_view to_string(FrictionFormulation formulation) noexcept {
  switch (formulation) {
  case FrictionFormulation::uniform:
    return "uniform";
  case FrictionFormulation::monotonic:
    return "monotonic";
  case FrictionFormulation::speed:
    return "speed";
  }
  return "unknown";
}

FrictionFormulation parse_friction_formulation(std::string_view name) {
  if (name == "uniform") return FrictionFormulation::uniform;
  if (name == "monotonic") return FrictionFormulation::monotonic;
  if (name == "speed") return FrictionFormulation::speed;
  throw std::invalid_argument("unknown friction formulation '" + std::string(name) + "'");
}

void FrictionParams::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw std::invalid_argument("friction mass must be positive");
  }
  if (!(gravity > 0.0) || !std::isfinite(gravity)) {
    throw std::invalid_argument("friction gravity must be positive");
  }
  if (interval < 1) {
    throw std::invalid_argument("friction interval must be >= 1");
  }
}

Complexity linear_progress(std::int64_t t, const LinearParams& params) {
  params.validate();
  if (t < 0) throw std::invalid_argument("progression time must be >= 0");
  if (t == 0) return Complexity(0.0);
  if (t >= params.end_step) return Complexity(1.0);
  return Complexity::clamped(static_cast<double>(t) / static_cast<double>(params.end_step));
}

Complexity exponential_progress(std::int64_t t, const ExponentialParams& params) {
  if (t < 0) throw std::invalid_argument("progression time must be >= 0");
  if (t == 0) return Complexity(0.0);
  if (t >= params.end_step()) return Complexity(1.0);

  const double x = static_cast<double>(t) / static_cast<double>(params.end_step());
  const double a = params.alpha();
  double value;
  if (a > 0.0) {
    // (e^{ax} - 1) / (e^a - 1) == e^{a(x-1)} * (1 - e^{-ax}) / (1 - e^{-a})
    value = std::exp(a * (x - 1.0)) * (std::expm1(-a * x) / std::expm1(-a));
  } else {
    value = std::expm1(a * x) / std::expm1(a);
  }
  return Complexity::clamped(value);
}

FrictionState init_friction_state(const FrictionParams& params, double baseline_performance,
                                  std::uint64_t seed) {
  params.validate();
  FrictionState state;
  state.step = params.interval;
  state.prev_speed = 1.0;
  state.min_speed = 1.0;
  state.window.assign(static_cast<std::size_t>(params.interval), baseline_performance);
  state.oldest = 0;
  state.rng.seed(seed);
  return state;
}

Complexity friction_step(FrictionState& state, const FrictionParams& params, double performance) {
  const double friction = (performance - state.oldest_performance()) / params.interval;
  double speed = std::clamp(state.prev_speed - params.mass * params.gravity * friction, 0.0, 1.0);
  if (speed <= kSpeedEndTolerance) speed = 0.0;

  state.window[state.oldest] = performance;
  state.oldest = (state.oldest + 1) % state.window.size();
  state.prev_speed = speed;
  state.min_speed = std::min(state.min_speed, speed);
  ++state.step;

  switch (params.formulation) {
  case FrictionFormulation::monotonic:
    return Complexity::clamped(1.0 - state.min_speed);
  case FrictionFormulation::speed:
    return Complexity::clamped(1.0 - speed);
  case FrictionFormulation::uniform:
    break;
  }
  if (speed == state.min_speed) {
    return Complexity::clamped(1.0 - speed);
  }
  std::uniform_real_distribution<double> draw(state.min_speed, speed);
  return Complexity::clamped(1.0 - draw(state.rng));
}

double solve_mass(double target_rise, double gravity) {
  if (!(target_rise > 0.0) || !std::isfinite(target_rise)) {
    throw std::invalid_argument("target performance rise must be positive");
  }
  if (!(gravity > 0.0)) {
    throw std::invalid_argument("gravity must be positive");
  }
  return 1.0 / (gravity * target_rise);
}

Progression Progression::linear(LinearParams params) {
  params.validate();
  return Progression(Linear{params});
}

Progression Progression::exponential(ExponentialParams params) {
  return Progression(Exponential{params});
}

Progression Progression::friction(FrictionParams params, double baseline_performance,
                                  std::uint64_t seed) {
  auto state = init_friction_state(params, baseline_performance, seed);
  return Progression(Friction{params, std::move(state), Complexity(0.0)});
}

Progression Progression::constant(Complexity value) { return Progression(Constant{value}); }

Complexity Progression::current(std::int64_t elapsed_steps) const {
  struct Visitor {
    std::int64_t t;
    Complexity operator()(const Linear& p) const { return linear_progress(t, p.params); }
    Complexity operator()(const Exponential& p) const { return exponential_progress(t, p.params); }
    Complexity operator()(const Friction& p) const { return p.last; }
    Complexity operator()(const Constant& p) const { return p.value; }
  };
  return std::visit(Visitor{elapsed_steps}, impl_);
}

void Progression::record(double performance) {
  if (auto* f = std::get_if<Friction>(&impl_)) {
    f->last = friction_step(f->state, f->params, performance);
  }
}

bool Progression::adaptive() const noexcept { return std::holds_alternative<Friction>(impl_); }

const FrictionState* Progression::friction_state() const noexcept {
  const auto* f = std::get_if<Friction>(&impl_);
  return f ? &f->state : nullptr;
}

const FrictionParams* Progression::friction_params() const noexcept {
  const auto* f = std::get_if<Friction>(&impl_);
  return f ? &f->params : nullptr;
}

} // namespace curriculum
