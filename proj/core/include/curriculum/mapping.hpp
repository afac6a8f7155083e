#pragma once

#include "curriculum/gridworld_layout.hpp"
#include "curriculum/progression.hpp"

#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace curriculum {

enum class ParameterKind { continuous, binary };

std::string_view to_string(ParameterKind kind) noexcept;
ParameterKind parse_parameter_kind(std::string_view name);

/// One task parameter and its values at the two ends of the complexity range.
///
/// `easy` is the value used at complexity 0 and `hard` the value used at
/// complexity 1 (the final task). Continuous parameters are interpolated
/// affinely between the two; binary parameters switch from `easy` to `hard`
/// once the complexity strictly exceeds `switch_threshold`.
struct ParameterSpec {
  std::string name;
  ParameterKind kind = ParameterKind::continuous;
  double easy = 0.0;
  double hard = 1.0;
  double switch_threshold = 0.5;

  void validate() const;
};

class MappingSpec {
public:
  MappingSpec() = default;
  MappingSpec(std::string environment_id, std::vector<ParameterSpec> parameters);

  const std::string& environment_id() const noexcept { return environment_id_; }
  const std::vector<ParameterSpec>& parameters() const noexcept { return parameters_; }
  const ParameterSpec& parameter(std::string_view name) const;

private:
  std::string environment_id_;
  std::vector<ParameterSpec> parameters_;
};

struct TaskParameters {
  std::string environment_id;
  std::map<std::string, double, std::less<>> assignments;
  Complexity complexity_used;

  double at(std::string_view name) const;

  friend bool operator==(const TaskParameters&, const TaskParameters&) = default;
};

/// easy + (hard - easy) * c. Rejects binary specs.
double interpolate_param(const ParameterSpec& spec, Complexity c);

/// `easy` while c <= threshold, `hard` once c > threshold. Rejects continuous specs.
double binary_param(const ParameterSpec& spec, Complexity c);

/// Applies the per-parameter rule to every parameter independently.
TaskParameters map_complexity(const MappingSpec& mapping, Complexity c);

/// Picks a start cell for a requested distance `d` in [0, max_distance].
///
/// `d` is rescaled onto path distances [1, max_distance] and rounded; the
/// designated start is returned once the rounded distance reaches the
/// maximum. When no eligible (plain) cell exists at the requested distance
/// the nearest populated distance is used, preferring the smaller one on a
/// tie. Throws std::invalid_argument for `d` outside the range and
/// std::runtime_error when the layout has no eligible cell at all.
Cell gridworld_start_for_distance(const GridWorldLayout& layout, double d, std::mt19937_64& rng);

} // namespace curriculum
