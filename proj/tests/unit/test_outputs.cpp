#include "curriculum/outputs.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace curriculum {
namespace {

const std::filesystem::path kData = CURRICULUM_DATA_DIR;

std::vector<TraceRow> random_rows(std::size_t n) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<TraceRow> rows;
  for (std::size_t k = 0; k < n; ++k) {
    rows.push_back({k % 3, static_cast<int>(k % 4), static_cast<std::int64_t>(k),
                    static_cast<std::int64_t>(17 * k), u(rng), u(rng) / 3.0, -2500.0 * u(rng),
                    1e-300 * u(rng)});
  }
  return rows;
}

TEST(TraceCsv, HeaderAndRoundTrip) {
  const auto rows = random_rows(200);
  std::stringstream buffer;
  write_trace_csv(buffer, rows);
  std::string header;
  std::getline(std::stringstream(buffer.str()), header);
  EXPECT_EQ(header, kTraceHeader);
  EXPECT_EQ(read_trace_csv(buffer), rows);
}

TEST(EvalsCsv, RoundTrip) {
  const std::vector<EvalRow> rows{{1, 100, -50.0}, {1, 200, 181.999999999}, {2, 7, 0.1}};
  std::stringstream buffer;
  write_evals_csv(buffer, rows);
  EXPECT_EQ(read_evals_csv(buffer), rows);
}

TEST(TraceCsv, RejectsWrongHeader) {
  std::stringstream bad("seed,worker\n1,2\n");
  EXPECT_THROW(read_trace_csv(bad), std::runtime_error);
}

TEST(SummaryJson, CarriesMetricAndInterval) {
  RunSummary s;
  s.metric_name = "return_from_start";
  s.final_metric = MeanCI{10.0, 2.0, 5};
  s.final_per_seed = {8, 9, 10, 11, 12};
  s.curve.push_back({0, 100.0, MeanCI{1.0, 0.5, 5}});
  s.config = nlohmann::json{{"environment", "gridworld"}};
  const auto j = summary_to_json(s);
  EXPECT_EQ(j["metric"], "return_from_start");
  EXPECT_DOUBLE_EQ(j["mean"].get<double>(), 10.0);
  EXPECT_DOUBLE_EQ(j["ci95"].get<double>(), 2.0);
  EXPECT_DOUBLE_EQ(j["ci95_lower"].get<double>(), 8.0);
  EXPECT_EQ(j["final_per_seed"].size(), 5u);
  EXPECT_EQ(j["curve"].size(), 1u);
  EXPECT_EQ(j["config"]["environment"], "gridworld");
}

TEST(EmitOutputs, WritesEveryArtefact) {
  const auto cfg = parse_config(nlohmann::json{{"environment", "gridworld"},
                                               {"layout", (kData / "gridworld_maze.txt").string()},
                                               {"workers", 2},
                                               {"total_steps", 800},
                                               {"eval_every", 10},
                                               {"seeds", {5, 6}}});
  const auto result = run_experiment(cfg);
  const auto dir = std::filesystem::temp_directory_path() / "curriculum_emit_test";
  std::filesystem::remove_all(dir);
  emit_outputs(result.trace, result.summary, dir, result.learners, cfg.seeds);
  for (const char* name : {"trace.csv", "evals.csv", "curricula.jsonl", "summary.json", "curves.svg",
                           "qtables/seed_5.txt", "qtables/seed_6.txt"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
  }
  std::ifstream trace(dir / "trace.csv");
  EXPECT_EQ(read_trace_csv(trace), result.trace.rows);
  std::ifstream q(dir / "qtables/seed_6.txt");
  EXPECT_EQ(QTable::load(q), result.learners[1]);
  std::ifstream svg(dir / "curves.svg");
  std::string first;
  std::getline(svg, first);
  EXPECT_NE(first.find("<svg"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(CurriculaJsonl, OneLinePerWorkerWithMappedTasks) {
  const auto cfg = parse_config(nlohmann::json{{"environment", "gridworld"},
                                               {"layout", (kData / "gridworld_maze.txt").string()},
                                               {"workers", 3},
                                               {"total_steps", 600},
                                               {"eval_every", 10},
                                               {"seeds", {2}},
                                               {"progression", {{"kind", "linear"}}}});
  const auto result = run_experiment(cfg);
  std::stringstream buffer;
  write_curricula_jsonl(buffer, result.trace.curricula);
  std::string line;
  int count = 0;
  while (std::getline(buffer, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["seed"].get<std::uint64_t>(), 2u);
    EXPECT_EQ(j["worker"].get<int>(), count);
    ASSERT_FALSE(j["tasks"].empty());
    EXPECT_DOUBLE_EQ(j["tasks"].front()["complexity"].get<double>(), 0.0);
    for (const auto& task : j["tasks"]) {
      EXPECT_GE(task["complexity"].get<double>(), 0.0);
      EXPECT_LE(task["complexity"].get<double>(), 1.0);
      EXPECT_TRUE(task.contains("start_distance"));
    }
    ++count;
  }
  EXPECT_EQ(count, 3);
}

TEST(Svg, ComplexityPlotHasOneSeriesPerWorker) {
  const auto svg = render_complexity_svg(random_rows(40));
  std::size_t lines = 0;
  for (std::size_t at = svg.find("<polyline"); at != std::string::npos;
       at = svg.find("<polyline", at + 1)) {
    ++lines;
  }
  EXPECT_EQ(lines, 4u);
}

} // namespace
} // namespace curriculum
