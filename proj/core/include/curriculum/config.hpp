#pragma once

#include "curriculum/learner.hpp"
#include "curriculum/mapping.hpp"
#include "curriculum/noise.hpp"
#include "curriculum/predator_prey.hpp"
#include "curriculum/progression.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace curriculum {

enum class EnvironmentKind { gridworld, predator_prey };
enum class ProgressionKind { none, linear, exponential, friction };
enum class SpacingKind { geometric, linear };

std::string_view to_string(EnvironmentKind kind) noexcept;
std::string_view to_string(ProgressionKind kind) noexcept;
std::string_view to_string(SpacingKind kind) noexcept;

struct ProgressionConfig {
  ProgressionKind kind = ProgressionKind::friction;

  // friction
  FrictionFormulation formulation = FrictionFormulation::uniform;
  int interval_min = 10;
  std::optional<double> target_performance; // default: per environment
  double baseline_performance = 0.0;

  // linear / exponential
  double slope_min = 0.1;
  double slope_max = 2.0;
  SpacingKind spacing = SpacingKind::geometric;
  double end_fraction = 0.8;
};

struct NoiseConfig {
  NoiseKind kind = NoiseKind::identity;
  int points = 0;
  double sigma = 0.0;
};

struct LearnerConfig {
  QLearningParams q;
  EpsilonSchedule epsilon;
};

/// Gridworld parameters may use a hard value of "max", resolved against the
/// layout's designated start distance.
struct MappingParameterConfig {
  ParameterSpec spec;
  bool hard_is_max = false;
};

struct ExperimentConfig {
  EnvironmentKind environment = EnvironmentKind::gridworld;
  std::filesystem::path layout; // gridworld only, resolved against the config file
  PredatorPreyConfig predator_prey;
  PerformanceKind performance = PerformanceKind::clipped_return;
  ProgressionConfig progression;
  std::vector<MappingParameterConfig> mapping;
  NoiseConfig noise;
  int workers = 1;
  bool threads = false;
  std::int64_t total_episodes = 0; // 0: unbounded
  std::int64_t total_steps = 0;    // 0: unbounded
  std::int64_t eval_every = 100;
  int eval_episodes = 1;
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path output_dir = "out";
  bool save_qtables = true;
  LearnerConfig learner;
};

/// Raised with every problem found in a config, one message per entry.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
  std::vector<std::string> problems_;
};

/// Parses and validates; relative `layout` paths resolve against `base_dir`.
/// Collects all problems before throwing ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Problems with an already-built config (empty when valid).
std::vector<std::string> validate_config(const ExperimentConfig& cfg);

/// Fully resolved config including defaulted fields.
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Default mapping for an environment (used when the config omits one).
std::vector<MappingParameterConfig> default_mapping(EnvironmentKind env);

} // namespace curriculum
