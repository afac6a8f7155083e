#include "curriculum/config.hpp"
#include "curriculum/harness.hpp"
#include "curriculum/outputs.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int cmd_validate(const std::string& config_path) {
  try {
    const auto cfg = curriculum::load_config(config_path);
    std::cout << curriculum::to_json(cfg).dump(2) << '\n';
    return 0;
  } catch (const curriculum::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            std::optional<std::string> out, std::optional<int> workers, bool threads) {
  curriculum::ExperimentConfig cfg;
  try {
    cfg = curriculum::load_config(config_path);
  } catch (const curriculum::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  if (seed) cfg.seeds = {*seed};
  if (out) cfg.output_dir = *out;
  if (workers) cfg.workers = *workers;
  if (threads) cfg.threads = true;
  if (auto problems = curriculum::validate_config(cfg); !problems.empty()) {
    std::cerr << curriculum::ConfigError(std::move(problems)).what() << '\n';
    return 2;
  }

  try {
    const auto result = curriculum::run_experiment(cfg);
    curriculum::emit_outputs(result.trace, result.summary, cfg.output_dir,
                             cfg.save_qtables ? result.learners : std::vector<curriculum::QTable>{},
                             cfg.seeds);
    const auto& m = result.summary.final_metric;
    std::printf("%s: mean %.3f  95%% CI [%.3f, %.3f]  (%zu seeds)\n",
                result.summary.metric_name.c_str(), m.mean, m.lower(), m.upper(), m.n);
    std::printf("outputs written to %s\n", cfg.output_dir.string().c_str());
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int cmd_plot(const std::string& trace_path, std::optional<std::string> out) {
  std::ifstream in(trace_path);
  if (!in) {
    std::cerr << "cannot open '" << trace_path << "'\n";
    return 1;
  }
  try {
    const auto rows = curriculum::read_trace_csv(in);
    const std::filesystem::path target =
        out ? std::filesystem::path(*out)
            : std::filesystem::path(trace_path).parent_path() / "complexity.svg";
    std::ofstream svg(target);
    if (!svg) {
      std::cerr << "cannot write '" << target.string() << "'\n";
      return 1;
    }
    svg << curriculum::render_complexity_svg(rows);
    std::cout << "wrote " << target.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "plot failed: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curriculum learning with progression and mapping functions"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> workers;
  bool threads = false;

  auto* run = app.add_subcommand("run", "Run an experiment and write its outputs");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Run a single seed instead of the configured list");
  run->add_option("--out", out, "Output directory");
  run->add_option("--workers", workers, "Number of workers")->check(CLI::PositiveNumber);
  run->add_flag("--threads", threads, "Run workers on threads (statistically, not bitwise, reproducible)");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config and print it fully resolved");
  validate->add_option("--config", validate_path, "Experiment config (JSON)")->required();

  std::string trace_path;
  std::optional<std::string> plot_out;
  auto* plot = app.add_subcommand("plot", "Plot per-worker complexity from a trace.csv");
  plot->add_option("--trace", trace_path, "trace.csv written by run")->required();
  plot->add_option("--out", plot_out, "SVG path (default: complexity.svg next to the trace)");

  CLI11_PARSE(app, argc, argv);

  if (*run) return cmd_run(config_path, seed, out, workers, threads);
  if (*validate) return cmd_validate(validate_path);
  if (*plot) return cmd_plot(trace_path, plot_out);
  return 1;
}
