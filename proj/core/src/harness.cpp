#include "curriculum/harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <stdexcept>

namespace curriculum {

namespace {

constexpr std::uint64_t kWorkerStream = 1;
constexpr std::uint64_t kProgressionStream = 2;
constexpr std::uint64_t kNoiseStream = 3;
constexpr std::uint64_t kEvalStream = 4;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

} // namespace

std::vector<double> spread_slopes(int workers, double slope_min, double slope_max,
                                  SpacingKind spacing) {
  if (workers < 1) throw std::invalid_argument("need at least one worker");
  if (slope_min > slope_max) throw std::invalid_argument("slope_min exceeds slope_max");
  const bool geometric = spacing == SpacingKind::geometric;
  if (geometric && !(slope_min * slope_max > 0.0)) {
    throw std::invalid_argument("geometric slope spacing needs bounds of one sign");
  }
  if (workers == 1) {
    if (geometric) {
      const double mag = std::sqrt(slope_min * slope_max);
      return {slope_min > 0 ? mag : -mag};
    }
    return {0.5 * (slope_min + slope_max)};
  }
  std::vector<double> out(static_cast<std::size_t>(workers));
  for (int k = 0; k < workers; ++k) {
    const double f = static_cast<double>(k) / (workers - 1);
    out[static_cast<std::size_t>(k)] =
        geometric ? slope_min * std::pow(slope_max / slope_min, f)
                  : slope_min + (slope_max - slope_min) * f;
  }
  out.front() = slope_min;
  out.back() = slope_max;
  return out;
}

std::vector<int> spread_intervals(int workers, int interval_min) {
  if (workers < 1) throw std::invalid_argument("need at least one worker");
  if (interval_min < 1) throw std::invalid_argument("interval_min must be >= 1");
  if (workers == 1) return {interval_min};
  const int interval_max = interval_min * (workers > 4 ? 10 : 3);
  std::vector<int> out(static_cast<std::size_t>(workers));
  for (int k = 0; k < workers; ++k) {
    const double f = static_cast<double>(k) / (workers - 1);
    out[static_cast<std::size_t>(k)] =
        static_cast<int>(std::lround(interval_min + (interval_max - interval_min) * f));
  }
  return out;
}

std::vector<WorkerProgressionParams> assign_worker_params(ProgressionKind kind, int workers,
                                                          const ProgressionConfig& bounds) {
  std::vector<WorkerProgressionParams> out(static_cast<std::size_t>(std::max(workers, 0)));
  if (workers < 1) throw std::invalid_argument("need at least one worker");
  if (kind == ProgressionKind::exponential) {
    const auto slopes = spread_slopes(workers, bounds.slope_min, bounds.slope_max, bounds.spacing);
    for (std::size_t k = 0; k < out.size(); ++k) out[k].slope = slopes[k];
  } else if (kind == ProgressionKind::friction) {
    const auto intervals = spread_intervals(workers, bounds.interval_min);
    for (std::size_t k = 0; k < out.size(); ++k) out[k].interval = intervals[k];
  }
  return out;
}

EpisodeEnv::EpisodeEnv(std::shared_ptr<const GridWorldLayout> layout)
    : layout_(layout), env_(std::in_place_type<GridWorld>, std::move(layout)) {}

EpisodeEnv::EpisodeEnv(PredatorPreyConfig config)
    : env_(std::in_place_type<PredatorPrey>, config) {}

StateKey EpisodeEnv::key() const {
  if (const auto* gw = std::get_if<GridWorld>(&env_)) {
    return gridworld_key(gw->layout(), gw->state());
  }
  const auto& pp = std::get<PredatorPrey>(env_);
  return predator_prey_key(pp.state(), pp.config().size);
}

StateKey EpisodeEnv::reset(const TaskParameters& task, std::mt19937_64& rng) {
  std::visit([&](auto& env) { env.reset(task, rng); }, env_);
  return key();
}

EpisodeEnv::StepResult EpisodeEnv::step(Action action) {
  StepResult out;
  std::visit(
      [&](auto& env) {
        const auto t = env.step(action);
        out.reward = t.reward;
        out.done = t.done;
        out.reached_goal = t.done_reason == DoneReason::treasure ||
                           t.done_reason == DoneReason::time_limit;
      },
      env_);
  out.next_key = key();
  return out;
}

SharedLearner::SharedLearner(QLearningParams params) : table_(params) {}

Action SharedLearner::act(StateKey key, double epsilon, std::mt19937_64& rng) const {
  std::lock_guard lock(mutex_);
  return select_action(table_, key, epsilon, rng);
}

void SharedLearner::update(StateKey state, Action action, double reward, StateKey next_state,
                           bool done) {
  std::lock_guard lock(mutex_);
  q_update(table_, state, action, reward, next_state, done);
}

QTable SharedLearner::snapshot() const {
  std::lock_guard lock(mutex_);
  return table_;
}

MappingSpec resolve_mapping(const ExperimentConfig& cfg, const GridWorldLayout* layout) {
  std::vector<ParameterSpec> params;
  for (const auto& m : cfg.mapping) {
    ParameterSpec spec = m.spec;
    if (m.hard_is_max) {
      if (!layout) throw std::invalid_argument("mapping bound \"max\" needs a gridworld layout");
      spec.hard = layout->max_distance();
    }
    params.push_back(spec);
  }
  return MappingSpec(std::string(to_string(cfg.environment)), std::move(params));
}

double friction_target(const ExperimentConfig& cfg, const GridWorldLayout* layout) {
  if (cfg.progression.target_performance) return *cfg.progression.target_performance;
  if (cfg.environment == EnvironmentKind::gridworld && layout) {
    return min_successful_return(*layout);
  }
  throw std::invalid_argument("progression.target_performance is required for this environment");
}

RunContext make_context(const ExperimentConfig& cfg, std::uint64_t seed) {
  RunContext ctx;
  ctx.seed = seed;
  ctx.environment = cfg.environment;
  ctx.predator_prey = cfg.predator_prey;
  ctx.performance = cfg.performance;
  if (cfg.environment == EnvironmentKind::gridworld) {
    ctx.layout = std::make_shared<const GridWorldLayout>(GridWorldLayout::load(cfg.layout));
  }
  ctx.mapping = resolve_mapping(cfg, ctx.layout.get());
  std::mt19937_64 noise_rng(derive_seed(seed, kNoiseStream, 0));
  ctx.noise = gen_noise(cfg.noise.kind, cfg.noise.points, cfg.noise.sigma, noise_rng);
  ctx.time_in_steps = cfg.total_steps > 0;
  return ctx;
}

std::vector<WorkerState> make_workers(const ExperimentConfig& cfg, const RunContext& ctx) {
  const auto& pc = cfg.progression;
  const auto params = assign_worker_params(pc.kind, cfg.workers, pc);

  const std::int64_t budget = ctx.time_in_steps ? cfg.total_steps : cfg.total_episodes;
  const std::int64_t per_worker = std::max<std::int64_t>(1, budget / cfg.workers);
  const auto end_step = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::llround(pc.end_fraction * static_cast<double>(per_worker))));

  double mass = 0.0;
  if (pc.kind == ProgressionKind::friction) {
    const double target = friction_target(cfg, ctx.layout.get());
    mass = solve_mass(target - pc.baseline_performance);
  }

  std::vector<WorkerState> workers;
  workers.reserve(static_cast<std::size_t>(cfg.workers));
  for (int k = 0; k < cfg.workers; ++k) {
    WorkerState w;
    w.id = k;
    w.rng.seed(derive_seed(ctx.seed, kWorkerStream, static_cast<std::uint64_t>(k)));
    const auto& wp = params[static_cast<std::size_t>(k)];
    switch (pc.kind) {
    case ProgressionKind::none:
      w.progression = Progression::constant(Complexity(1.0));
      break;
    case ProgressionKind::linear:
      w.progression = Progression::linear(LinearParams{end_step});
      break;
    case ProgressionKind::exponential:
      w.progression = Progression::exponential(ExponentialParams(end_step, wp.slope));
      break;
    case ProgressionKind::friction:
      w.progression = Progression::friction(
          FrictionParams{mass, kGravity, wp.interval, pc.formulation}, pc.baseline_performance,
          derive_seed(ctx.seed, kProgressionStream, static_cast<std::uint64_t>(k)));
      break;
    }
    if (ctx.environment == EnvironmentKind::gridworld) {
      w.env = std::make_unique<EpisodeEnv>(ctx.layout);
    } else {
      w.env = std::make_unique<EpisodeEnv>(ctx.predator_prey);
    }
    workers.push_back(std::move(w));
  }
  return workers;
}

TraceRow run_worker_episode(WorkerState& worker, SharedLearner& learner, const RunContext& ctx,
                            double epsilon) {
  const Complexity c =
      worker.progression.current(ctx.time_in_steps ? worker.steps : worker.episodes);
  if (!worker.has_task || c != worker.current) {
    worker.current = c;
    worker.current_noisy = apply_noise(ctx.noise, c);
    worker.task = map_complexity(ctx.mapping, worker.current_noisy);
    worker.curriculum.push_back(worker.task);
    worker.has_task = true;
  }

  StateKey key = worker.env->reset(worker.task, worker.rng);
  double episode_return = 0.0;
  int length = 0;
  bool reached_goal = false;
  for (;;) {
    const Action a = learner.act(key, epsilon, worker.rng);
    const auto r = worker.env->step(a);
    learner.update(key, a, r.reward, r.next_key, r.done);
    episode_return += r.reward;
    ++length;
    key = r.next_key;
    if (r.done) {
      reached_goal = r.reached_goal;
      break;
    }
  }

  const auto sample = performance(ctx.performance, episode_return, length, reached_goal, worker.episodes);
  worker.progression.record(sample.value);
  ++worker.episodes;
  worker.steps += length;

  TraceRow row;
  row.seed = ctx.seed;
  row.worker = worker.id;
  row.episode = worker.episodes - 1;
  row.step = worker.steps;
  row.complexity = c.value();
  row.noisy_complexity = worker.current_noisy.value();
  row.episode_return = episode_return;
  row.performance = sample.value;
  return row;
}

double evaluate_final_task(const QTable& q, const RunContext& ctx, int episodes,
                           std::uint64_t eval_seed) {
  const TaskParameters final_task = map_complexity(ctx.mapping, Complexity(1.0));
  std::mt19937_64 rng(eval_seed);
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    EpisodeEnv env = ctx.environment == EnvironmentKind::gridworld ? EpisodeEnv(ctx.layout)
                                                                   : EpisodeEnv(ctx.predator_prey);
    StateKey key = env.reset(final_task, rng);
    double ret = 0.0;
    int length = 0;
    for (;;) {
      const auto r = env.step(greedy_action(q, key));
      ret += r.reward;
      ++length;
      key = r.next_key;
      if (r.done) break;
    }
    total += ctx.environment == EnvironmentKind::gridworld ? ret : static_cast<double>(length);
  }
  return total / episodes;
}

namespace {

struct SeedRun {
  std::vector<TraceRow> rows;
  std::vector<EvalRow> evals;
  std::vector<CurriculumRecord> curricula;
  QTable learner;
};

SeedRun run_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  const RunContext ctx = make_context(cfg, seed);
  auto workers = make_workers(cfg, ctx);
  SharedLearner learner(cfg.learner.q);

  std::int64_t episodes = 0;
  std::int64_t steps = 0;
  std::int64_t last_eval = -1;
  std::uint64_t eval_index = 0;
  SeedRun out{{}, {}, {}, QTable(cfg.learner.q)};

  auto exhausted = [&] {
    return (cfg.total_steps > 0 && steps >= cfg.total_steps) ||
           (cfg.total_episodes > 0 && episodes >= cfg.total_episodes);
  };
  auto progress = [&] {
    double p = 0.0;
    if (cfg.total_steps > 0) p = std::max(p, static_cast<double>(steps) / cfg.total_steps);
    if (cfg.total_episodes > 0) p = std::max(p, static_cast<double>(episodes) / cfg.total_episodes);
    return p;
  };
  auto evaluate = [&] {
    const double metric = evaluate_final_task(learner.snapshot(), ctx, cfg.eval_episodes,
                                              derive_seed(seed, kEvalStream, eval_index++));
    out.evals.push_back({seed, episodes, metric});
    last_eval = episodes;
  };
  auto account = [&](const TraceRow& row, std::int64_t steps_before) {
    ++episodes;
    steps += row.step - steps_before;
    out.rows.push_back(row);
  };

  if (!cfg.threads) {
    // Episode budgets rotate through the workers; step budgets hand the next
    // episode to the worker with the fewest steps so every worker's clock
    // advances at the same rate.
    std::size_t turn = 0;
    while (!exhausted()) {
      std::size_t next = turn;
      if (ctx.time_in_steps) {
        for (std::size_t k = 0; k < workers.size(); ++k) {
          if (workers[k].steps < workers[next].steps) next = k;
        }
      }
      turn = (next + 1) % workers.size();
      auto& w = workers[next];
      const std::int64_t before = w.steps;
      const auto row = run_worker_episode(w, learner, ctx, cfg.learner.epsilon.at(progress()));
      account(row, before);
      if (episodes % cfg.eval_every == 0) evaluate();
    }
  } else {
    while (!exhausted()) {
      const double epsilon = cfg.learner.epsilon.at(progress());
      std::vector<std::int64_t> before;
      std::vector<std::future<TraceRow>> jobs;
      for (auto& w : workers) {
        before.push_back(w.steps);
        jobs.push_back(std::async(std::launch::async, [&w, &learner, &ctx, epsilon] {
          return run_worker_episode(w, learner, ctx, epsilon);
        }));
      }
      for (std::size_t k = 0; k < jobs.size(); ++k) {
        account(jobs[k].get(), before[k]);
        if (episodes % cfg.eval_every == 0) evaluate();
      }
    }
    std::stable_sort(out.rows.begin(), out.rows.end(), [](const TraceRow& a, const TraceRow& b) {
      return std::tie(a.worker, a.episode) < std::tie(b.worker, b.episode);
    });
  }
  if (last_eval != episodes) evaluate();

  for (auto& w : workers) {
    out.curricula.push_back({seed, w.id, std::move(w.curriculum)});
  }
  out.learner = learner.snapshot();
  return out;
}

} // namespace

RunSummary summarize(const ExperimentConfig& cfg, const RunTrace& trace) {
  RunSummary s;
  s.metric_name = cfg.environment == EnvironmentKind::gridworld ? "return_from_start" : "survival_time";
  s.config = to_json(cfg);

  std::map<std::uint64_t, std::vector<const EvalRow*>> by_seed;
  for (const auto& e : trace.evals) by_seed[e.seed].push_back(&e);
  if (by_seed.empty()) return s;

  std::size_t common = std::numeric_limits<std::size_t>::max();
  for (std::uint64_t seed : cfg.seeds) {
    auto it = by_seed.find(seed);
    if (it == by_seed.end()) continue;
    s.final_per_seed.push_back(it->second.back()->metric);
    common = std::min(common, it->second.size());
  }
  if (!s.final_per_seed.empty()) s.final_metric = mean_ci95(s.final_per_seed);

  for (std::size_t k = 0; k < common; ++k) {
    std::vector<double> metric;
    double episode = 0.0;
    for (const auto& [seed, evals] : by_seed) {
      metric.push_back(evals[k]->metric);
      episode += static_cast<double>(evals[k]->episode);
    }
    s.curve.push_back({k, episode / static_cast<double>(metric.size()), mean_ci95(metric)});
  }
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (auto problems = validate_config(cfg); !problems.empty()) throw ConfigError(std::move(problems));

  ExperimentResult result;
  for (std::uint64_t seed : cfg.seeds) {
    auto run = run_seed(cfg, seed);
    auto& t = result.trace;
    t.rows.insert(t.rows.end(), run.rows.begin(), run.rows.end());
    t.evals.insert(t.evals.end(), run.evals.begin(), run.evals.end());
    for (auto& c : run.curricula) t.curricula.push_back(std::move(c));
    result.learners.push_back(std::move(run.learner));
  }
  result.summary = summarize(cfg, result.trace);
  return result;
}

} // namespace curriculum
