#pragma once

#include "curriculum/harness.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace curriculum {

inline constexpr const char* kTraceHeader =
    "seed,worker,episode,step,complexity,noisy_complexity,episode_return,performance";
inline constexpr const char* kEvalsHeader = "seed,episode,metric";

// Reals use shortest round-trip formatting so parsing reproduces them exactly.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);
void write_evals_csv(std::ostream& out, const std::vector<EvalRow>& rows);
std::vector<TraceRow> read_trace_csv(std::istream& in);
std::vector<EvalRow> read_evals_csv(std::istream& in);

/// One JSON object per line: the distinct tasks a worker trained on, in order.
void write_curricula_jsonl(std::ostream& out, const std::vector<CurriculumRecord>& records);

nlohmann::json summary_to_json(const RunSummary& summary);

/// Eval metric curve (mean with 95% band) plus per-worker complexity.
std::string render_curves_svg(const RunSummary& summary, const std::vector<TraceRow>& rows);

/// Mean complexity per worker across seeds, with a 95% band.
std::string render_complexity_svg(const std::vector<TraceRow>& rows);

/// Writes trace.csv, evals.csv, curricula.jsonl, summary.json and curves.svg (plus q-table
/// snapshots when `learners` is non-empty) into `output_dir`.
/// Throws std::runtime_error when the directory cannot be written.
void emit_outputs(const RunTrace& trace, const RunSummary& summary,
                  const std::filesystem::path& output_dir,
                  const std::vector<QTable>& learners = {},
                  const std::vector<std::uint64_t>& seeds = {});

} // namespace curriculum
