#include "curriculum/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace curriculum {

std::string_view to_string(ParameterKind kind) noexcept {
  return kind == ParameterKind::binary ? "binary" : "continuous";
}

ParameterKind parse_parameter_kind(std::string_view name) {
  if (name == "continuous") return ParameterKind::continuous;
  if (name == "binary") return ParameterKind::binary;
  throw std::invalid_argument("unknown parameter kind '" + std::string(name) + "'");
}

void ParameterSpec::validate() const {
  if (name.empty()) {
    throw std::invalid_argument("parameter name must not be empty");
  }
  if (!std::isfinite(easy) || !std::isfinite(hard)) {
    throw std::invalid_argument("parameter '" + name + "' has non-finite bounds");
  }
  if (kind == ParameterKind::continuous && easy == hard) {
    throw std::invalid_argument("continuous parameter '" + name + "' needs distinct easy/hard values");
  }
  if (kind == ParameterKind::binary && !(switch_threshold > 0.0 && switch_threshold < 1.0)) {
    throw std::invalid_argument("binary parameter '" + name + "' threshold must lie in (0, 1)");
  }
}

MappingSpec::MappingSpec(std::string environment_id, std::vector<ParameterSpec> parameters)
    : environment_id_(std::move(environment_id)), parameters_(std::move(parameters)) {
  std::set<std::string, std::less<>> seen;
  for (const auto& p : parameters_) {
    p.validate();
    if (!seen.insert(p.name).second) {
      throw std::invalid_argument("duplicate mapping parameter '" + p.name + "'");
    }
  }
}

const ParameterSpec& MappingSpec::parameter(std::string_view name) const {
  auto it = std::find_if(parameters_.begin(), parameters_.end(),
                         [&](const ParameterSpec& p) { return p.name == name; });
  if (it == parameters_.end()) {
    throw std::out_of_range("no mapping parameter named '" + std::string(name) + "'");
  }
  return *it;
}

double TaskParameters::at(std::string_view name) const {
  auto it = assignments.find(name);
  if (it == assignments.end()) {
    throw std::out_of_range("task has no parameter '" + std::string(name) + "'");
  }
  return it->second;
}

double interpolate_param(const ParameterSpec& spec, Complexity c) {
  if (spec.kind != ParameterKind::continuous) {
    throw std::invalid_argument("interpolate_param called on binary parameter '" + spec.name + "'");
  }
  const double t = c.value();
  if (spec.hard > spec.easy) {
    return spec.easy + (spec.hard - spec.easy) * t;
  }
  return spec.easy - (spec.easy - spec.hard) * t;
}

double binary_param(const ParameterSpec& spec, Complexity c) {
  if (spec.kind != ParameterKind::binary) {
    throw std::invalid_argument("binary_param called on continuous parameter '" + spec.name + "'");
  }
  return c.value() > spec.switch_threshold ? spec.hard : spec.easy;
}

TaskParameters map_complexity(const MappingSpec& mapping, Complexity c) {
  TaskParameters task;
  task.environment_id = mapping.environment_id();
  task.complexity_used = c;
  for (const auto& p : mapping.parameters()) {
    const double v =
        p.kind == ParameterKind::continuous ? interpolate_param(p, c) : binary_param(p, c);
    task.assignments.emplace(p.name, v);
  }
  return task;
}

Cell gridworld_start_for_distance(const GridWorldLayout& layout, double d, std::mt19937_64& rng) {
  const int max_d = layout.max_distance();
  if (!(d >= 0.0 && d <= static_cast<double>(max_d))) {
    throw std::invalid_argument("start distance " + std::to_string(d) + " outside [0, " +
                                std::to_string(max_d) + "]");
  }
  const double scaled = max_d > 0 ? 1.0 + (max_d - 1) * (d / max_d) : 0.0;
  const int target = static_cast<int>(std::lround(scaled));
  if (target >= max_d) {
    return layout.start();
  }

  // Nearest populated distance; the smaller one wins a tie.
  for (int offset = 0; offset <= max_d; ++offset) {
    for (int candidate : {target - offset, target + offset}) {
      if (candidate < 1 || candidate > max_d) continue;
      const auto& cells = layout.eligible_at(candidate);
      if (cells.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
      return cells[pick(rng)];
    }
  }
  throw std::runtime_error("grid layout has no eligible start cells");
}

} // namespace curriculum
