#pragma once

#include "curriculum/config.hpp"
#include "curriculum/gridworld.hpp"
#include "curriculum/learner.hpp"
#include "curriculum/mapping.hpp"
#include "curriculum/noise.hpp"
#include "curriculum/predator_prey.hpp"
#include "curriculum/progression.hpp"
#include "curriculum/stats.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <memory>
#include <mutex>
#include <random>
#include <variant>
#include <vector>

namespace curriculum {

/// Per-worker progression parameters: a slope for exponential, an interval
/// for friction. Unused fields stay at zero.
struct WorkerProgressionParams {
  double slope = 0.0;
  int interval = 0;
};

/// Exponential slopes between the bounds; both extremes are always used and
/// intermediates are spaced geometrically (or linearly). One worker gets the
/// geometric mean (or midpoint).
std::vector<double> spread_slopes(int workers, double slope_min, double slope_max,
                                  SpacingKind spacing = SpacingKind::geometric);

/// Friction intervals spaced linearly from `interval_min` up to 10x that for
/// more than four workers, 3x otherwise. One worker gets `interval_min`.
std::vector<int> spread_intervals(int workers, int interval_min);

std::vector<WorkerProgressionParams> assign_worker_params(ProgressionKind kind, int workers,
                                                          const ProgressionConfig& bounds);

/// Environment instance behind a uniform episode interface.
class EpisodeEnv {
public:
  struct StepResult {
    StateKey next_key = 0;
    double reward = 0.0;
    bool done = false;
    bool reached_goal = false;
  };

  EpisodeEnv(std::shared_ptr<const GridWorldLayout> layout);
  EpisodeEnv(PredatorPreyConfig config);

  StateKey reset(const TaskParameters& task, std::mt19937_64& rng);
  StepResult step(Action action);

private:
  StateKey key() const;

  std::shared_ptr<const GridWorldLayout> layout_;
  std::variant<GridWorld, PredatorPrey> env_;
};

/// The learner shared by all workers of one run. Every read and write goes
/// through one mutex, which is the serialized update channel in threaded mode.
class SharedLearner {
public:
  explicit SharedLearner(QLearningParams params);

  Action act(StateKey key, double epsilon, std::mt19937_64& rng) const;
  void update(StateKey state, Action action, double reward, StateKey next_state, bool done);
  QTable snapshot() const;

private:
  mutable std::mutex mutex_;
  QTable table_;
};

struct TraceRow {
  std::uint64_t seed = 0;
  int worker = 0;
  std::int64_t episode = 0; // per-worker episode index
  std::int64_t step = 0;    // per-worker environment steps at episode end
  double complexity = 0.0;
  double noisy_complexity = 0.0;
  double episode_return = 0.0;
  double performance = 0.0;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct EvalRow {
  std::uint64_t seed = 0;
  std::int64_t episode = 0; // global training episodes completed
  double metric = 0.0;

  friend bool operator==(const EvalRow&, const EvalRow&) = default;
};

/// Distinct tasks one worker trained on, in order.
struct CurriculumRecord {
  std::uint64_t seed = 0;
  int worker = 0;
  std::vector<TaskParameters> tasks;
};

struct RunTrace {
  std::vector<TraceRow> rows;
  std::vector<EvalRow> evals;
  std::vector<CurriculumRecord> curricula;
};

struct CurvePoint {
  std::size_t eval_index = 0;
  double episode = 0.0; // mean over seeds
  MeanCI metric;
};

struct RunSummary {
  std::string metric_name;
  MeanCI final_metric;
  std::vector<double> final_per_seed;
  std::vector<CurvePoint> curve;
  nlohmann::json config; // resolved config echo
};

struct ExperimentResult {
  RunTrace trace;
  RunSummary summary;
  std::vector<QTable> learners; // one per seed
};

/// Everything a worker needs that is fixed for one seed.
struct RunContext {
  std::uint64_t seed = 0;
  EnvironmentKind environment = EnvironmentKind::gridworld;
  std::shared_ptr<const GridWorldLayout> layout;
  PredatorPreyConfig predator_prey;
  MappingSpec mapping;
  NoiseFunction noise = NoiseFunction::identity();
  PerformanceKind performance = PerformanceKind::clipped_return;
  bool time_in_steps = true; // fixed progressions run on env steps, else episodes
};

struct WorkerState {
  int id = 0;
  Progression progression = Progression::constant(Complexity(1.0));
  std::unique_ptr<EpisodeEnv> env;
  std::mt19937_64 rng;
  TaskParameters task;
  Complexity current;
  Complexity current_noisy;
  bool has_task = false;
  std::int64_t episodes = 0;
  std::int64_t steps = 0;
  std::vector<TaskParameters> curriculum;
};

/// Builds the mapping with any "max" bound resolved against the layout.
MappingSpec resolve_mapping(const ExperimentConfig& cfg, const GridWorldLayout* layout);

/// Absolute performance at which friction progressions end: the configured
/// value, or the minimum successful return on the gridworld layout.
double friction_target(const ExperimentConfig& cfg, const GridWorldLayout* layout);

/// Creates the context for one seed (layout, mapping, seeded noise).
RunContext make_context(const ExperimentConfig& cfg, std::uint64_t seed);

/// Creates the workers for one seed with their spread progression params.
std::vector<WorkerState> make_workers(const ExperimentConfig& cfg, const RunContext& ctx);

/// One episode of the curriculum loop: query the progression, rebuild the
/// task through noise and mapping when the complexity changed, run the
/// episode on the shared learner, and feed the performance back.
TraceRow run_worker_episode(WorkerState& worker, SharedLearner& learner, const RunContext& ctx,
                            double epsilon);

/// Greedy (epsilon = 0) episodes on the final task without noise. Gridworld
/// reports the return from the designated start, predator-prey the survival
/// time.
double evaluate_final_task(const QTable& q, const RunContext& ctx, int episodes,
                           std::uint64_t eval_seed);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Mean/CI of the final eval per seed and the per-eval curve.
RunSummary summarize(const ExperimentConfig& cfg, const RunTrace& trace);

} // namespace curriculum
