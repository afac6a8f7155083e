#include "curriculum/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace curriculum {

using nlohmann::json;

std::string_view to_string(EnvironmentKind kind) noexcept {
  return kind == EnvironmentKind::gridworld ? "gridworld" : "predator_prey";
}

std::string_view to_string(ProgressionKind kind) noexcept {
  switch (kind) {
  case ProgressionKind::none:
    return "none";
  case ProgressionKind::linear:
    return "linear";
  case ProgressionKind::exponential:
    return "exponential";
  case ProgressionKind::friction:
    return "friction";
  }
  return "unknown";
}

std::string_view to_string(SpacingKind kind) noexcept {
  return kind == SpacingKind::geometric ? "geometric" : "linear";
}

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::ostringstream out;
  out << "invalid config (" << problems.size() << " problem" << (problems.size() == 1 ? "" : "s")
      << ")";
  for (const auto& p : problems) out << "\n  - " << p;
  return out.str();
}

/// Reads typed fields from one JSON object, recording problems instead of
/// throwing, and flags keys nobody asked for.
class Reader {
public:
  Reader(const json& obj, std::string prefix, std::vector<std::string>& problems)
      : obj_(obj), prefix_(std::move(prefix)), problems_(problems) {
    if (!obj_.is_object()) {
      problems_.push_back(where() + "must be an object");
      ok_ = false;
    }
  }

  ~Reader() {
    if (!ok_) return;
    for (const auto& [key, value] : obj_.items()) {
      if (!used_.contains(key)) problems_.push_back(prefix_ + key + ": unknown key");
    }
  }

  bool has(const std::string& key) {
    if (!ok_) return false;
    used_.insert(key);
    return obj_.contains(key) && !obj_.at(key).is_null();
  }

  const json* raw(const std::string& key) { return has(key) ? &obj_.at(key) : nullptr; }

  template <class T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    try {
      return obj_.at(key).get<T>();
    } catch (const json::exception&) {
      problems_.push_back(prefix_ + key + ": wrong type");
      return fallback;
    }
  }

  template <class E, class Parse>
  E get_enum(const std::string& key, E fallback, Parse parse) {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_string()) {
      problems_.push_back(prefix_ + key + ": expected a string");
      return fallback;
    }
    try {
      return parse(v.template get<std::string>());
    } catch (const std::exception& e) {
      problems_.push_back(prefix_ + key + ": " + e.what());
      return fallback;
    }
  }

  void problem(const std::string& key, const std::string& message) {
    problems_.push_back(prefix_ + key + ": " + message);
  }

  std::string child(const std::string& key) const { return prefix_ + key + "."; }

private:
  std::string where() const { return prefix_.empty() ? "config " : prefix_; }

  const json& obj_;
  std::string prefix_;
  std::vector<std::string>& problems_;
  std::set<std::string> used_;
  bool ok_ = true;
};

EnvironmentKind parse_environment(const std::string& name) {
  if (name == "gridworld") return EnvironmentKind::gridworld;
  if (name == "predator_prey") return EnvironmentKind::predator_prey;
  throw std::invalid_argument("unknown environment '" + name + "'");
}

ProgressionKind parse_progression_kind(const std::string& name) {
  if (name == "none") return ProgressionKind::none;
  if (name == "linear") return ProgressionKind::linear;
  if (name == "exponential") return ProgressionKind::exponential;
  if (name == "friction") return ProgressionKind::friction;
  throw std::invalid_argument("unknown progression kind '" + name + "'");
}

SpacingKind parse_spacing(const std::string& name) {
  if (name == "geometric") return SpacingKind::geometric;
  if (name == "linear") return SpacingKind::linear;
  throw std::invalid_argument("unknown spacing '" + name + "'");
}

void read_progression(const json& obj, ProgressionConfig& p, std::vector<std::string>& problems) {
  Reader r(obj, "progression.", problems);
  p.kind = r.get_enum("kind", p.kind, parse_progression_kind);
  p.formulation = r.get_enum("formulation", p.formulation,
                             [](const std::string& s) { return parse_friction_formulation(s); });
  p.interval_min = r.get("interval_min", p.interval_min);
  if (r.has("target_performance")) p.target_performance = r.get("target_performance", 0.0);
  p.baseline_performance = r.get("baseline_performance", p.baseline_performance);
  p.slope_min = r.get("slope_min", p.slope_min);
  p.slope_max = r.get("slope_max", p.slope_max);
  p.spacing = r.get_enum("spacing", p.spacing, parse_spacing);
  p.end_fraction = r.get("end_fraction", p.end_fraction);
}

void read_noise(const json& obj, NoiseConfig& n, std::vector<std::string>& problems) {
  Reader r(obj, "noise.", problems);
  n.kind = r.get_enum("kind", n.kind, [](const std::string& s) { return parse_noise_kind(s); });
  n.points = r.get("points", 0);
  n.sigma = r.get("sigma", 0.0);
}

void read_learner(const json& obj, LearnerConfig& l, std::vector<std::string>& problems) {
  Reader r(obj, "learner.", problems);
  l.q.learning_rate = r.get("learning_rate", l.q.learning_rate);
  l.q.discount = r.get("discount", l.q.discount);
  l.epsilon.start = r.get("epsilon_start", l.epsilon.start);
  l.epsilon.end = r.get("epsilon_end", l.epsilon.end);
  l.epsilon.decay_fraction = r.get("epsilon_decay_fraction", l.epsilon.decay_fraction);
}

void read_predator_prey(const json& obj, PredatorPreyConfig& pp, std::vector<std::string>& problems) {
  Reader r(obj, "predator_prey.", problems);
  pp.size = r.get("size", pp.size);
  pp.initial_health = r.get("initial_health", pp.initial_health);
  pp.health_cap = r.get("health_cap", pp.health_cap);
  pp.max_steps = r.get("max_steps", pp.max_steps);
  pp.food_restore = r.get("food_restore", pp.food_restore);
  pp.catch_damage = r.get("catch_damage", pp.catch_damage);
}

std::vector<MappingParameterConfig> read_mapping(const json& arr,
                                                 std::vector<std::string>& problems) {
  std::vector<MappingParameterConfig> out;
  if (!arr.is_array()) {
    problems.push_back("mapping: expected an array of parameters");
    return out;
  }
  for (std::size_t k = 0; k < arr.size(); ++k) {
    Reader r(arr[k], "mapping[" + std::to_string(k) + "].", problems);
    MappingParameterConfig m;
    m.spec.name = r.get<std::string>("name", "");
    m.spec.kind = r.get_enum("kind", ParameterKind::continuous,
                             [](const std::string& s) { return parse_parameter_kind(s); });
    m.spec.easy = r.get("easy", 0.0);
    if (const json* hard = r.raw("hard")) {
      if (hard->is_string() && hard->get<std::string>() == "max") {
        m.hard_is_max = true;
      } else if (hard->is_number()) {
        m.spec.hard = hard->get<double>();
      } else {
        r.problem("hard", "expected a number or \"max\"");
      }
    } else {
      r.problem("hard", "missing");
    }
    m.spec.switch_threshold = r.get("switch_threshold", 0.5);
    out.push_back(std::move(m));
  }
  return out;
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

std::vector<MappingParameterConfig> default_mapping(EnvironmentKind env) {
  if (env == EnvironmentKind::gridworld) {
    MappingParameterConfig d;
    d.spec = ParameterSpec{gridworld::kStartDistanceParam, ParameterKind::continuous, 0.0, 1.0, 0.5};
    d.hard_is_max = true;
    return {d};
  }
  MappingParameterConfig food;
  food.spec = ParameterSpec{predator_prey::kFoodFractionParam, ParameterKind::continuous, 0.25, 0.05, 0.5};
  MappingParameterConfig stall;
  stall.spec = ParameterSpec{predator_prey::kPredatorStallParam, ParameterKind::continuous, 10.0, 2.0, 0.5};
  return {food, stall};
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  std::vector<std::string> problems;
  ExperimentConfig cfg;
  {
    Reader r(doc, "", problems);
    cfg.environment = r.get_enum("environment", cfg.environment, parse_environment);
    if (r.has("layout")) {
      std::filesystem::path layout = r.get<std::string>("layout", "");
      cfg.layout = layout.is_relative() && !base_dir.empty() ? base_dir / layout : layout;
    }
    cfg.performance = r.get_enum("performance",
                                 cfg.environment == EnvironmentKind::gridworld
                                     ? PerformanceKind::clipped_return
                                     : PerformanceKind::episode_duration,
                                 [](const std::string& s) { return parse_performance_kind(s); });
    if (const json* p = r.raw("progression")) read_progression(*p, cfg.progression, problems);
    if (const json* m = r.raw("mapping")) {
      cfg.mapping = read_mapping(*m, problems);
    } else {
      cfg.mapping = default_mapping(cfg.environment);
    }
    if (const json* n = r.raw("noise")) read_noise(*n, cfg.noise, problems);
    cfg.workers = r.get("workers", cfg.workers);
    cfg.threads = r.get("threads", cfg.threads);
    cfg.total_episodes = r.get("total_episodes", cfg.total_episodes);
    cfg.total_steps = r.get("total_steps", cfg.total_steps);
    cfg.eval_every = r.get("eval_every", cfg.eval_every);
    cfg.eval_episodes = r.get("eval_episodes", cfg.eval_episodes);
    if (const json* s = r.raw("seeds")) {
      try {
        cfg.seeds = s->get<std::vector<std::uint64_t>>();
      } catch (const json::exception&) {
        r.problem("seeds", "expected an array of non-negative integers");
      }
    }
    cfg.output_dir = r.get<std::string>("output_dir", cfg.output_dir.string());
    cfg.save_qtables = r.get("save_qtables", cfg.save_qtables);
    if (const json* l = r.raw("learner")) read_learner(*l, cfg.learner, problems);
    if (const json* pp = r.raw("predator_prey")) read_predator_prey(*pp, cfg.predator_prey, problems);
  }

  auto& n = cfg.noise;
  if (n.kind == NoiseKind::local || n.kind == NoiseKind::global) {
    const auto preset = n.kind == NoiseKind::local ? kLocalNoisePreset : kGlobalNoisePreset;
    if (n.points == 0) n.points = preset.points;
    if (n.sigma == 0.0) n.sigma = preset.sigma;
  } else if (n.kind == NoiseKind::random && n.points == 0) {
    n.points = kRandomNoisePoints;
  }

  for (auto& p : validate_config(cfg)) problems.push_back(std::move(p));
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path.string() + "'"});
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError({"config is not valid JSON: " + std::string(e.what())});
  }
  return parse_config(doc, path.parent_path());
}

std::vector<std::string> validate_config(const ExperimentConfig& cfg) {
  std::vector<std::string> problems;
  auto check = [&](bool ok, const std::string& message) {
    if (!ok) problems.push_back(message);
  };

  check(cfg.workers >= 1, "workers: must be >= 1");
  check(cfg.eval_every >= 1, "eval_every: must be >= 1");
  check(cfg.eval_episodes >= 1, "eval_episodes: must be >= 1");
  check(cfg.total_episodes >= 0, "total_episodes: must be >= 0");
  check(cfg.total_steps >= 0, "total_steps: must be >= 0");
  check(cfg.total_episodes > 0 || cfg.total_steps > 0,
        "budget: set total_episodes and/or total_steps");
  check(!cfg.seeds.empty(), "seeds: at least one seed required");

  if (cfg.environment == EnvironmentKind::gridworld) {
    check(!cfg.layout.empty(), "layout: required for gridworld");
    if (!cfg.layout.empty()) {
      check(std::filesystem::exists(cfg.layout), "layout: file '" + cfg.layout.string() + "' not found");
    }
  } else {
    try {
      cfg.predator_prey.validate();
    } catch (const std::exception& e) {
      problems.push_back(std::string("predator_prey: ") + e.what());
    }
  }

  const auto& p = cfg.progression;
  if (p.kind == ProgressionKind::friction) {
    check(p.interval_min >= 1, "progression.interval_min: must be >= 1");
    if (p.target_performance) {
      check(*p.target_performance > p.baseline_performance,
            "progression.target_performance: must exceed baseline_performance");
    } else {
      check(cfg.environment == EnvironmentKind::gridworld,
            "progression.target_performance: required for predator_prey");
    }
  }
  if (p.kind == ProgressionKind::exponential) {
    check(p.slope_min != 0.0 && p.slope_max != 0.0, "progression.slope_min/slope_max: must be non-zero");
    check(p.slope_min <= p.slope_max, "progression.slope_min: must not exceed slope_max");
    if (p.spacing == SpacingKind::geometric) {
      check(p.slope_min * p.slope_max > 0.0,
            "progression.spacing: geometric spacing needs slope bounds of one sign");
    }
  }
  if (p.kind == ProgressionKind::linear || p.kind == ProgressionKind::exponential) {
    check(p.end_fraction > 0.0 && p.end_fraction <= 1.0, "progression.end_fraction: must lie in (0, 1]");
  }

  std::set<std::string> names;
  for (const auto& m : cfg.mapping) {
    if (!names.insert(m.spec.name).second) {
      problems.push_back("mapping: duplicate parameter '" + m.spec.name + "'");
    }
    if (m.hard_is_max) {
      check(cfg.environment == EnvironmentKind::gridworld,
            "mapping." + m.spec.name + ": hard = \"max\" is only meaningful for gridworld");
      continue;
    }
    try {
      m.spec.validate();
    } catch (const std::exception& e) {
      problems.push_back("mapping." + m.spec.name + ": " + e.what());
    }
  }
  const std::vector<std::string> required =
      cfg.environment == EnvironmentKind::gridworld
          ? std::vector<std::string>{gridworld::kStartDistanceParam}
          : std::vector<std::string>{predator_prey::kFoodFractionParam,
                                     predator_prey::kPredatorStallParam};
  for (const auto& name : required) {
    check(names.contains(name), "mapping: missing parameter '" + name + "'");
  }

  if (cfg.noise.kind == NoiseKind::local || cfg.noise.kind == NoiseKind::global) {
    check(cfg.noise.points >= 2, "noise.points: must be >= 2");
    check(cfg.noise.sigma > 0.0, "noise.sigma: must be > 0");
  } else if (cfg.noise.kind == NoiseKind::random) {
    check(cfg.noise.points >= 2, "noise.points: must be >= 2");
  }

  try {
    cfg.learner.q.validate();
    cfg.learner.epsilon.validate();
  } catch (const std::exception& e) {
    problems.push_back(std::string("learner: ") + e.what());
  }
  return problems;
}

json to_json(const ExperimentConfig& cfg) {
  json out;
  out["environment"] = to_string(cfg.environment);
  if (cfg.environment == EnvironmentKind::gridworld) {
    out["layout"] = cfg.layout.generic_string();
  } else {
    const auto& pp = cfg.predator_prey;
    out["predator_prey"] = {{"size", pp.size},
                            {"initial_health", pp.initial_health},
                            {"health_cap", pp.health_cap},
                            {"max_steps", pp.max_steps},
                            {"food_restore", pp.food_restore},
                            {"catch_damage", pp.catch_damage}};
  }
  out["performance"] = to_string(cfg.performance);

  const auto& p = cfg.progression;
  json prog{{"kind", to_string(p.kind)}};
  if (p.kind == ProgressionKind::friction) {
    prog["formulation"] = to_string(p.formulation);
    prog["interval_min"] = p.interval_min;
    prog["target_performance"] = p.target_performance ? json(*p.target_performance) : json(nullptr);
    prog["baseline_performance"] = p.baseline_performance;
  } else if (p.kind == ProgressionKind::exponential || p.kind == ProgressionKind::linear) {
    if (p.kind == ProgressionKind::exponential) {
      prog["slope_min"] = p.slope_min;
      prog["slope_max"] = p.slope_max;
      prog["spacing"] = to_string(p.spacing);
    }
    prog["end_fraction"] = p.end_fraction;
  }
  out["progression"] = prog;

  json mapping = json::array();
  for (const auto& m : cfg.mapping) {
    json entry{{"name", m.spec.name}, {"kind", to_string(m.spec.kind)}, {"easy", m.spec.easy}};
    entry["hard"] = m.hard_is_max ? json("max") : json(m.spec.hard);
    if (m.spec.kind == ParameterKind::binary) entry["switch_threshold"] = m.spec.switch_threshold;
    mapping.push_back(entry);
  }
  out["mapping"] = mapping;

  json noise{{"kind", to_string(cfg.noise.kind)}};
  if (cfg.noise.kind != NoiseKind::identity) noise["points"] = cfg.noise.points;
  if (cfg.noise.kind == NoiseKind::local || cfg.noise.kind == NoiseKind::global) {
    noise["sigma"] = cfg.noise.sigma;
  }
  out["noise"] = noise;

  out["workers"] = cfg.workers;
  out["threads"] = cfg.threads;
  out["total_episodes"] = cfg.total_episodes;
  out["total_steps"] = cfg.total_steps;
  out["eval_every"] = cfg.eval_every;
  out["eval_episodes"] = cfg.eval_episodes;
  out["seeds"] = cfg.seeds;
  out["output_dir"] = cfg.output_dir.generic_string();
  out["save_qtables"] = cfg.save_qtables;
  out["learner"] = {{"learning_rate", cfg.learner.q.learning_rate},
                    {"discount", cfg.learner.q.discount},
                    {"epsilon_start", cfg.learner.epsilon.start},
                    {"epsilon_end", cfg.learner.epsilon.end},
                    {"epsilon_decay_fraction", cfg.learner.epsilon.decay_fraction}};
  return out;
}

} // namespace curriculum
