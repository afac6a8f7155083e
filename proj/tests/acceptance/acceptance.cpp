// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "curriculum/config.hpp"
#include "curriculum/gridworld.hpp"
#include "curriculum/harness.hpp"
#include "curriculum/noise.hpp"
#include "curriculum/outputs.hpp"
#include "curriculum/predator_prey.hpp"
#include "curriculum/progression.hpp"
#include "curriculum/stats.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace curriculum;

namespace {

const fs::path kData = CURRICULUM_DATA_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string fmt_ci(const MeanCI& ci) {
  return fmt(ci.mean) + " [" + fmt(ci.lower()) + ", " + fmt(ci.upper()) + "]";
}

// 1. Speed reaches zero exactly when the window mean has risen by 1/(m g).
Outcome theorem_reproduction() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> interval_draw(1, 40);
  std::uniform_real_distribution<double> increment(0.01, 2.0);
  std::uniform_real_distribution<double> fraction(0.1, 0.8);
  std::uniform_real_distribution<double> base_draw(-50.0, 50.0);

  int matched = 0;
  int worst = 0;
  const int traces = 100;
  for (int n = 0; n < traces; ++n) {
    const int interval = interval_draw(rng);
    const double baseline = base_draw(rng);
    std::vector<double> trace;
    double p = baseline;
    for (int k = 0; k < 600; ++k) {
      p += increment(rng);
      trace.push_back(p);
    }
    const double rise = fraction(rng) * (trace.back() - baseline);
    const double mass = solve_mass(rise);

    // Analytic end: first record count whose trailing window mean exceeds
    // the initial mean by 1/(m g).
    std::vector<double> history(static_cast<std::size_t>(interval), baseline);
    std::int64_t predicted = -1;
    for (std::size_t k = 0; k < trace.size() && predicted < 0; ++k) {
      history.push_back(trace[k]);
      double mean = 0.0;
      for (std::size_t j = history.size() - interval; j < history.size(); ++j) mean += history[j];
      mean /= interval;
      if (mean - baseline >= 1.0 / (mass * kGravity)) predicted = interval + static_cast<std::int64_t>(k) + 1;
    }

    const FrictionParams params{mass, kGravity, interval, FrictionFormulation::speed};
    auto state = init_friction_state(params, baseline, static_cast<std::uint64_t>(n));
    std::int64_t observed = -1;
    for (double v : trace) {
      friction_step(state, params, v);
      if (state.prev_speed == 0.0) {
        observed = state.step;
        break;
      }
    }
    const int gap = predicted < 0 || observed < 0 ? 1'000'000
                                                  : static_cast<int>(std::llabs(observed - predicted));
    worst = std::max(worst, gap);
    if (gap <= 1) ++matched;
  }
  return {matched == traces,
          std::to_string(matched) + "/" + std::to_string(traces) +
              " traces end within 1 step of the prediction (worst gap " + std::to_string(worst) + ")"};
}

double sup_gap(double slope) {
  const std::int64_t te = 1000;
  const ExponentialParams ep(te, slope);
  const LinearParams lp{te};
  double gap = 0.0;
  for (std::int64_t t = 0; t <= te; ++t) {
    gap = std::max(gap, std::abs(exponential_progress(t, ep).value() - linear_progress(t, lp).value()));
  }
  return gap;
}

// 2. Exponential tends to linear as the slope grows.
Outcome limit_property() {
  const std::vector<double> slopes{1e1, 1e2, 1e4, 1e6};
  std::vector<double> gaps;
  for (double s : slopes) gaps.push_back(sup_gap(s));
  bool decreasing = true;
  for (std::size_t k = 1; k < gaps.size(); ++k) decreasing = decreasing && gaps[k] < gaps[k - 1];
  std::ostringstream detail;
  detail << "sup gaps";
  for (double g : gaps) detail << ' ' << g;
  return {decreasing && gaps.back() <= 1e-3, detail.str()};
}

// 3. Exact endpoints for any end step and slope sign.
Outcome exponential_endpoints() {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::int64_t> te_draw(1, 1'000'000);
  std::uniform_real_distribution<double> log_s(-4.0, 6.0);
  double worst = 0.0;
  int negatives = 0;
  for (int n = 0; n < 1000; ++n) {
    const bool negative = n % 2 == 1;
    negatives += negative;
    const double s = std::pow(10.0, log_s(rng)) * (negative ? -1.0 : 1.0);
    const ExponentialParams p(te_draw(rng), s);
    worst = std::max(worst, std::abs(exponential_progress(0, p).value()));
    worst = std::max(worst, std::abs(exponential_progress(p.end_step(), p).value() - 1.0));
  }
  return {worst <= 1e-12, "1000 pairs (" + std::to_string(negatives) +
                              " with negative slope), worst endpoint error " + std::to_string(worst)};
}

// 4. Small intervals react faster; monotonic never steps back.
Outcome friction_formulations() {
  std::vector<double> perf;
  for (int t = 0; t < 1000; ++t) {
    perf.push_back(0.1 * t + 15.0 * std::sin(2.0 * std::numbers::pi * t / 100.0));
  }
  const double mass = solve_mass(80.0);
  auto trace = [&](int interval, FrictionFormulation f) {
    const FrictionParams params{mass, kGravity, interval, f};
    auto state = init_friction_state(params, 0.0, 7);
    std::vector<double> out;
    for (double p : perf) out.push_back(friction_step(state, params, p).value());
    return out;
  };
  const double tv_small = total_variation(trace(5, FrictionFormulation::uniform));
  const double tv_large = total_variation(trace(50, FrictionFormulation::uniform));
  const double tv_small_speed = total_variation(trace(5, FrictionFormulation::speed));
  const double tv_large_speed = total_variation(trace(50, FrictionFormulation::speed));
  bool monotone = true;
  for (int interval : {5, 20, 50}) {
    const auto m = trace(interval, FrictionFormulation::monotonic);
    for (std::size_t k = 1; k < m.size(); ++k) monotone = monotone && m[k] >= m[k - 1];
  }
  return {tv_small > tv_large && tv_small_speed > tv_large_speed && monotone,
          "total variation uniform i=5 " + fmt(tv_small) + " vs i=50 " + fmt(tv_large) +
              ", speed i=5 " + fmt(tv_small_speed) + " vs i=50 " + fmt(tv_large_speed) +
              ", monotonic non-decreasing: " + (monotone ? "yes" : "no")};
}

// 5. Generated noise respects its constraints.
Outcome noise_constraints() {
  std::mt19937_64 rng(5);
  int monotone_fail = 0;
  double endpoint_err = 0.0;
  for (NoiseKind kind : {NoiseKind::local, NoiseKind::global}) {
    const NoisePreset preset = kind == NoiseKind::local ? kLocalNoisePreset : kGlobalNoisePreset;
    for (int n = 0; n < 10000; ++n) {
      const auto f = gen_noise(kind, preset.points, preset.sigma, rng);
      endpoint_err = std::max({endpoint_err, std::abs(f(0.0)), std::abs(f(1.0) - 1.0)});
      double prev = f(0.0);
      for (int k = 1; k <= 1000; ++k) {
        const double v = f(k / 1000.0);
        if (v < prev) {
          ++monotone_fail;
          break;
        }
        prev = v;
      }
    }
  }
  int random_fail = 0;
  for (int n = 0; n < 10000; ++n) {
    const auto f = gen_noise(NoiseKind::random, kRandomNoisePoints, 0.0, rng);
    bool ok = std::abs(f(0.0)) <= 1e-9 && std::abs(f(1.0) - 1.0) <= 1e-9;
    for (int k = 0; k <= 1000 && ok; ++k) {
      const double v = f(k / 1000.0);
      ok = v >= 0.0 && v <= 1.0;
    }
    random_fail += !ok;
  }
  return {monotone_fail == 0 && endpoint_err <= 1e-9 && random_fail == 0,
          "10000 local + 10000 global: " + std::to_string(monotone_fail) +
              " non-monotone, max endpoint error " + std::to_string(endpoint_err) +
              "; 10000 random: " + std::to_string(random_fail) + " violations"};
}

// 6. Reward constants, action cap and the health telescoping identity.
Outcome environment_fidelity() {
  auto layout = std::make_shared<const GridWorldLayout>(GridWorldLayout::parse("S...\n"
                                                                               "....\n"
                                                                               ".P.F\n"
                                                                               "...T\n"));
  GridWorld env(layout);
  bool grid_ok = true;
  env.reset_at({0, 0});
  const std::vector<std::pair<Action, double>> to_treasure{
      {Action::north, -1.0}, {Action::east, -1.0},    {Action::south, -1.0}, {Action::east, -1.0},
      {Action::east, -250.0}, {Action::south, -500.0}, {Action::south, 200.0}};
  for (std::size_t k = 0; k < to_treasure.size(); ++k) {
    const auto t = env.step(to_treasure[k].first);
    grid_ok = grid_ok && t.reward == to_treasure[k].second && t.done == (k + 1 == to_treasure.size());
  }
  env.reset_at({0, 0});
  env.step(Action::south);
  env.step(Action::south);
  const auto pit = env.step(Action::east);
  grid_ok = grid_ok && pit.reward == -2500.0 && pit.done;
  env.reset_at({0, 0});
  int taken = 0;
  Transition<GridWorldState> last;
  do {
    last = env.step(Action::north);
    ++taken;
  } while (!last.done);
  grid_ok = grid_ok && taken == 50 && last.done_reason == DoneReason::step_limit;

  PredatorPrey pp;
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> pick(0, kActionCount - 1);
  std::uniform_real_distribution<double> food(0.05, 0.25);
  std::uniform_int_distribution<int> stall(2, 10);
  int depleted = 0;
  int identity_fail = 0;
  for (int episode = 0; episode < 1000; ++episode) {
    TaskParameters task;
    task.assignments[predator_prey::kFoodFractionParam] = food(rng);
    task.assignments[predator_prey::kPredatorStallParam] = stall(rng);
    pp.reset(task, rng);
    double total = 0.0;
    Transition<PredatorPreyState> t;
    do {
      t = pp.step(static_cast<Action>(pick(rng)));
      total += t.reward;
    } while (!t.done);
    if (t.done_reason == DoneReason::health_depleted) {
      ++depleted;
      identity_fail += total != pp.state().health - 100.0;
    }
  }
  return {grid_ok && identity_fail == 0 && depleted > 0,
          std::string("grid world scripted rewards and 50-action cap ") + (grid_ok ? "ok" : "WRONG") +
              "; predator-prey identity held in " + std::to_string(depleted - identity_fail) + "/" +
              std::to_string(depleted) + " depletion episodes of 1000"};
}

// Twice the smallest budget at which friction solves the maze on all 20 seeds.
constexpr int kMazeSteps = 20000;

ExperimentConfig maze_config(const std::string& progression, const std::string& noise = "") {
  nlohmann::json doc{{"environment", "gridworld"},
                     {"layout", (kData / "gridworld_maze.txt").string()},
                     {"workers", 4},
                     {"total_steps", kMazeSteps},
                     {"eval_every", 100},
                     {"save_qtables", false}};
  std::vector<int> seeds(20);
  for (int k = 0; k < 20; ++k) seeds[static_cast<std::size_t>(k)] = k + 1;
  doc["seeds"] = seeds;
  doc["progression"] = {{"kind", progression}};
  if (progression == "friction") doc["progression"]["formulation"] = "uniform";
  if (!noise.empty()) doc["noise"] = {{"kind", noise}};
  return parse_config(doc);
}

struct MazeRuns {
  RunSummary friction;
  RunSummary baseline;
  RunSummary exponential;
};

// 7. Curriculum benefit on the maze with equal step budgets.
Outcome curriculum_benefit(MazeRuns& runs) {
  runs.friction = run_experiment(maze_config("friction")).summary;
  runs.baseline = run_experiment(maze_config("none")).summary;
  runs.exponential = run_experiment(maze_config("exponential")).summary;
  const auto& f = runs.friction.final_metric;
  const auto& b = runs.baseline.final_metric;
  const auto& e = runs.exponential.final_metric;
  const bool pass = f.mean > b.mean && f.lower() > b.upper() && e.mean >= b.mean;
  return {pass, "return from S, 20 seeds, " + std::to_string(kMazeSteps) + " steps each: friction " + fmt_ci(f) + ", baseline " +
                    fmt_ci(b) + ", exponential " + fmt_ci(e)};
}

// 8. Monotone noise keeps the friction result; random noise may degrade it.
Outcome noise_robustness(const MazeRuns& runs) {
  const auto& clean = runs.friction.final_metric;
  const auto local = run_experiment(maze_config("friction", "local")).summary.final_metric;
  const auto global = run_experiment(maze_config("friction", "global")).summary.final_metric;
  const auto random = run_experiment(maze_config("friction", "random")).summary.final_metric;
  const bool pass = clean.contains(local.mean) && clean.contains(global.mean);
  return {pass, "no-noise CI " + fmt_ci(clean) + "; local " + fmt_ci(local) + ", global " +
                    fmt_ci(global) + ", random (may degrade) " + fmt_ci(random)};
}

// 9. Byte-identical traces for identical config and seed.
Outcome determinism() {
  auto cfg = maze_config("friction", "global");
  cfg.seeds = {7};
  const fs::path root = fs::temp_directory_path() / "curriculum_acceptance_determinism";
  fs::remove_all(root);
  std::vector<std::string> bytes;
  for (const char* sub : {"a", "b"}) {
    const auto result = run_experiment(cfg);
    emit_outputs(result.trace, result.summary, root / sub);
    std::ifstream in(root / sub / "trace.csv", std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    bytes.push_back(buf.str());
  }
  fs::remove_all(root);
  const bool pass = !bytes[0].empty() && bytes[0] == bytes[1];
  return {pass, "two runs of seed 7 wrote " + std::to_string(bytes[0].size()) + " and " +
                    std::to_string(bytes[1].size()) + " bytes, identical: " + (pass ? "yes" : "no")};
}

} // namespace

int main() {
  MazeRuns runs;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 friction end step matches analytic prediction", theorem_reproduction},
      {"2 exponential converges to linear", limit_property},
      {"3 exponential endpoints exact", exponential_endpoints},
      {"4 friction interval and formulation behaviour", friction_formulations},
      {"5 noise function constraints", noise_constraints},
      {"6 environment fidelity", environment_fidelity},
      {"7 curriculum benefit on grid world maze", [&] { return curriculum_benefit(runs); }},
      {"8 robustness to local and global noise", [&] { return noise_robustness(runs); }},
      {"9 deterministic trace output", determinism},
  };

  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !outcome.pass;
    std::printf("%s  %s: %s (%.2fs)\n", outcome.pass ? "PASS" : "FAIL", name.c_str(),
                outcome.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
