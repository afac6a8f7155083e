#include "curriculum/outputs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace curriculum {

namespace {

std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

template <class T>
T parse_field(std::string_view field, std::size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad field '" +
                             std::string(field) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class Row, class Parse>
std::vector<Row> read_csv(std::istream& in, std::string_view header, std::size_t columns,
                          Parse parse) {
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw std::runtime_error("csv header mismatch, expected '" + std::string(header) + "'");
  }
  std::vector<Row> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != columns) {
      throw std::runtime_error("csv line " + std::to_string(number) + ": expected " +
                               std::to_string(columns) + " fields");
    }
    rows.push_back(parse(fields, number));
  }
  return rows;
}

// --- svg ------------------------------------------------------------------

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> lo;
  std::vector<double> hi;
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#e377c2", "#17becf"};

void render_panel(std::ostringstream& svg, double ox, double oy, double w, double h,
                  const std::string& title, const std::string& xlabel,
                  const std::vector<Series>& series) {
  double xmin = std::numeric_limits<double>::max(), xmax = std::numeric_limits<double>::lowest();
  double ymin = xmin, ymax = xmax;
  for (const auto& s : series) {
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      xmin = std::min(xmin, s.x[k]);
      xmax = std::max(xmax, s.x[k]);
      ymin = std::min({ymin, s.y[k], s.lo.empty() ? s.y[k] : s.lo[k]});
      ymax = std::max({ymax, s.y[k], s.hi.empty() ? s.y[k] : s.hi[k]});
    }
  }
  if (xmin > xmax) {
    xmin = 0;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  const double left = ox + 60, right = ox + w - 20, top = oy + 30, bottom = oy + h - 40;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (right - left); };
  auto py = [&](double y) { return bottom - (y - ymin) / (ymax - ymin) * (bottom - top); };

  svg << "<text x=\"" << fmt(ox + w / 2) << "\" y=\"" << fmt(oy + 18)
      << "\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  svg << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(right - left)
      << "\" height=\"" << fmt(bottom - top) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = xmin + (xmax - xmin) * k / 4.0;
    const double fy = ymin + (ymax - ymin) * k / 4.0;
    char xs[32], ys[32];
    std::snprintf(xs, sizeof xs, "%.4g", fx);
    std::snprintf(ys, sizeof ys, "%.4g", fy);
    svg << "<text x=\"" << fmt(px(fx)) << "\" y=\"" << fmt(bottom + 15)
        << "\" text-anchor=\"middle\" font-size=\"10\">" << xs << "</text>\n";
    svg << "<text x=\"" << fmt(left - 5) << "\" y=\"" << fmt(py(fy) + 3)
        << "\" text-anchor=\"end\" font-size=\"10\">" << ys << "</text>\n";
  }
  svg << "<text x=\"" << fmt((left + right) / 2) << "\" y=\"" << fmt(bottom + 32)
      << "\" text-anchor=\"middle\" font-size=\"11\">" << xlabel << "</text>\n";

  std::size_t colour = 0;
  for (const auto& s : series) {
    const char* c = kPalette[colour++ % std::size(kPalette)];
    if (!s.lo.empty() && s.x.size() > 1) {
      svg << "<polygon fill=\"" << c << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
      for (std::size_t k = 0; k < s.x.size(); ++k) svg << fmt(px(s.x[k])) << ',' << fmt(py(s.hi[k])) << ' ';
      for (std::size_t k = s.x.size(); k-- > 0;) svg << fmt(px(s.x[k])) << ',' << fmt(py(s.lo[k])) << ' ';
      svg << "\"/>\n";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < s.x.size(); ++k) svg << fmt(px(s.x[k])) << ',' << fmt(py(s.y[k])) << ' ';
    svg << "\"/>\n";
    svg << "<text x=\"" << fmt(right - 5) << "\" y=\"" << fmt(top + 12 * static_cast<double>(colour))
        << "\" text-anchor=\"end\" font-size=\"10\" fill=\"" << c << "\">" << s.label << "</text>\n";
  }
}

std::vector<Series> complexity_series(const std::vector<TraceRow>& rows) {
  // worker -> episode -> samples across seeds
  std::map<int, std::map<std::int64_t, std::vector<double>>> grouped;
  for (const auto& r : rows) grouped[r.worker][r.episode].push_back(r.complexity);

  std::vector<Series> out;
  for (const auto& [worker, episodes] : grouped) {
    Series s;
    s.label = "worker " + std::to_string(worker);
    // Thin long traces to at most ~400 points per worker.
    const std::size_t stride = std::max<std::size_t>(1, episodes.size() / 400);
    std::size_t k = 0;
    for (const auto& [episode, values] : episodes) {
      if (k++ % stride != 0) continue;
      const auto ci = mean_ci95(values);
      s.x.push_back(static_cast<double>(episode));
      s.y.push_back(ci.mean);
      s.lo.push_back(ci.lower());
      s.hi.push_back(ci.upper());
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string svg_document(double w, double h, const std::string& body) {
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
      << "\" font-family=\"sans-serif\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << body << "</svg>\n";
  return svg.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

} // namespace

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << kTraceHeader << '\n';
  for (const auto& r : rows) {
    out << r.seed << ',' << r.worker << ',' << r.episode << ',' << r.step << ',' << fmt(r.complexity)
        << ',' << fmt(r.noisy_complexity) << ',' << fmt(r.episode_return) << ','
        << fmt(r.performance) << '\n';
  }
}

void write_evals_csv(std::ostream& out, const std::vector<EvalRow>& rows) {
  out << kEvalsHeader << '\n';
  for (const auto& r : rows) out << r.seed << ',' << r.episode << ',' << fmt(r.metric) << '\n';
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  return read_csv<TraceRow>(in, kTraceHeader, 8, [](const auto& f, std::size_t line) {
    TraceRow r;
    r.seed = parse_field<std::uint64_t>(f[0], line);
    r.worker = parse_field<int>(f[1], line);
    r.episode = parse_field<std::int64_t>(f[2], line);
    r.step = parse_field<std::int64_t>(f[3], line);
    r.complexity = parse_field<double>(f[4], line);
    r.noisy_complexity = parse_field<double>(f[5], line);
    r.episode_return = parse_field<double>(f[6], line);
    r.performance = parse_field<double>(f[7], line);
    return r;
  });
}

std::vector<EvalRow> read_evals_csv(std::istream& in) {
  return read_csv<EvalRow>(in, kEvalsHeader, 3, [](const auto& f, std::size_t line) {
    EvalRow r;
    r.seed = parse_field<std::uint64_t>(f[0], line);
    r.episode = parse_field<std::int64_t>(f[1], line);
    r.metric = parse_field<double>(f[2], line);
    return r;
  });
}

nlohmann::json summary_to_json(const RunSummary& summary) {
  nlohmann::json curve = nlohmann::json::array();
  for (const auto& p : summary.curve) {
    curve.push_back({{"eval_index", p.eval_index},
                     {"episode", p.episode},
                     {"mean", p.metric.mean},
                     {"ci95", p.metric.half_width}});
  }
  return {{"metric", summary.metric_name},
          {"mean", summary.final_metric.mean},
          {"ci95", summary.final_metric.half_width},
          {"ci95_lower", summary.final_metric.lower()},
          {"ci95_upper", summary.final_metric.upper()},
          {"seeds", summary.final_metric.n},
          {"final_per_seed", summary.final_per_seed},
          {"curve", curve},
          {"config", summary.config},
          {"git_describe", "unknown"}};
}

std::string render_curves_svg(const RunSummary& summary, const std::vector<TraceRow>& rows) {
  Series eval;
  eval.label = summary.metric_name;
  for (const auto& p : summary.curve) {
    eval.x.push_back(p.episode);
    eval.y.push_back(p.metric.mean);
    eval.lo.push_back(p.metric.lower());
    eval.hi.push_back(p.metric.upper());
  }
  std::ostringstream body;
  render_panel(body, 0, 0, 640, 320, "final-task " + summary.metric_name + " (mean, 95% CI)",
               "training episodes", {eval});
  render_panel(body, 0, 320, 640, 320, "complexity per worker (mean, 95% CI)", "worker episode",
               complexity_series(rows));
  return svg_document(640, 640, body.str());
}

std::string render_complexity_svg(const std::vector<TraceRow>& rows) {
  std::ostringstream body;
  render_panel(body, 0, 0, 640, 360, "complexity per worker (mean, 95% CI)", "worker episode",
               complexity_series(rows));
  return svg_document(640, 360, body.str());
}

void write_curricula_jsonl(std::ostream& out, const std::vector<CurriculumRecord>& records) {
  for (const auto& rec : records) {
    nlohmann::json tasks = nlohmann::json::array();
    for (const auto& task : rec.tasks) {
      nlohmann::json t{{"complexity", task.complexity_used.value()}};
      for (const auto& [name, value] : task.assignments) t[name] = value;
      tasks.push_back(std::move(t));
    }
    out << nlohmann::json{{"seed", rec.seed}, {"worker", rec.worker}, {"tasks", std::move(tasks)}}.dump()
        << '\n';
  }
}

void emit_outputs(const RunTrace& trace, const RunSummary& summary,
                  const std::filesystem::path& output_dir, const std::vector<QTable>& learners,
                  const std::vector<std::uint64_t>& seeds) {
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory '" + output_dir.string() +
                             "': " + ec.message());
  }

  std::ostringstream trace_csv;
  write_trace_csv(trace_csv, trace.rows);
  write_file(output_dir / "trace.csv", trace_csv.str());

  std::ostringstream evals_csv;
  write_evals_csv(evals_csv, trace.evals);
  write_file(output_dir / "evals.csv", evals_csv.str());

  std::ostringstream curricula;
  write_curricula_jsonl(curricula, trace.curricula);
  write_file(output_dir / "curricula.jsonl", curricula.str());

  write_file(output_dir / "summary.json", summary_to_json(summary).dump(2) + "\n");
  write_file(output_dir / "curves.svg", render_curves_svg(summary, trace.rows));

  if (!learners.empty()) {
    const auto dir = output_dir / "qtables";
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create '" + dir.string() + "'");
    for (std::size_t k = 0; k < learners.size(); ++k) {
      const auto seed = k < seeds.size() ? seeds[k] : static_cast<std::uint64_t>(k);
      std::ostringstream snap;
      learners[k].save(snap);
      write_file(dir / ("seed_" + std::to_string(seed) + ".txt"), snap.str());
    }
  }
}

} // namespace curriculum
