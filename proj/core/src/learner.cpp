#include "curriculum/learner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace curriculum {

namespace {

const ActionValues kZeros{};

std::string format_real(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

double parse_real(const std::string& token) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw std::runtime_error("q-table snapshot: bad number '" + token + "'");
  }
  return v;
}

} // namespace

void QLearningParams::validate() const {
  if (!(learning_rate >= 0.0 && learning_rate <= 1.0)) {
    throw std::invalid_argument("learning rate must lie in [0, 1]");
  }
  if (!(discount >= 0.0 && discount <= 1.0)) {
    throw std::invalid_argument("discount must lie in [0, 1]");
  }
}

void EpsilonSchedule::validate() const {
  if (!(start >= 0.0 && start <= 1.0) || !(end >= 0.0 && end <= 1.0)) {
    throw std::invalid_argument("epsilon bounds must lie in [0, 1]");
  }
  if (!(decay_fraction >= 0.0 && decay_fraction <= 1.0)) {
    throw std::invalid_argument("epsilon decay fraction must lie in [0, 1]");
  }
}

double EpsilonSchedule::at(double training_progress) const {
  if (decay_fraction <= 0.0 || training_progress >= decay_fraction) return end;
  const double f = std::max(0.0, training_progress) / decay_fraction;
  return std::clamp(start + (end - start) * f, 0.0, 1.0);
}

QTable::QTable(QLearningParams params) : params_(params) { params_.validate(); }

const ActionValues& QTable::values(StateKey key) const {
  auto it = table_.find(key);
  return it == table_.end() ? kZeros : it->second;
}

ActionValues& QTable::mutable_values(StateKey key) { return table_[key]; }

void QTable::save(std::ostream& out) const {
  std::vector<StateKey> keys;
  keys.reserve(table_.size());
  for (const auto& [k, v] : table_) keys.push_back(k);
  std::sort(keys.begin(), keys.end());

  out << "curriculum-qtable 1\n";
  out << format_real(params_.learning_rate) << ' ' << format_real(params_.discount) << ' '
      << keys.size() << '\n';
  for (StateKey k : keys) {
    const auto& v = table_.at(k);
    out << k;
    for (double q : v) out << ' ' << format_real(q);
    out << '\n';
  }
}

QTable QTable::load(std::istream& in) {
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "curriculum-qtable" || version != 1) {
    throw std::runtime_error("not a curriculum q-table snapshot (version 1)");
  }
  std::string lr, gamma;
  std::size_t count = 0;
  in >> lr >> gamma >> count;
  if (!in) throw std::runtime_error("q-table snapshot: truncated header");

  QTable q(QLearningParams{parse_real(lr), parse_real(gamma)});
  for (std::size_t e = 0; e < count; ++e) {
    StateKey key = 0;
    in >> key;
    ActionValues values{};
    for (double& v : values) {
      std::string token;
      in >> token;
      v = parse_real(token);
    }
    if (!in) throw std::runtime_error("q-table snapshot: truncated entry");
    q.table_[key] = values;
  }
  return q;
}

Action greedy_action(const QTable& q, StateKey key) {
  const auto& v = q.values(key);
  int best = 0;
  for (int a = 1; a < kActionCount; ++a) {
    if (v[static_cast<std::size_t>(a)] > v[static_cast<std::size_t>(best)]) best = a;
  }
  return static_cast<Action>(best);
}

Action select_action(const QTable& q, StateKey key, double epsilon, std::mt19937_64& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  if (epsilon > 0.0) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < epsilon) {
      std::uniform_int_distribution<int> any(0, kActionCount - 1);
      return static_cast<Action>(any(rng));
    }
  }
  return greedy_action(q, key);
}

void q_update(QTable& q, StateKey state, Action action, double reward, StateKey next_state,
              bool done) {
  double target = reward;
  if (!done) {
    const auto& next = q.values(next_state);
    target += q.params().discount * *std::max_element(next.begin(), next.end());
  }
  auto& v = q.mutable_values(state);
  auto& cell = v[static_cast<std::size_t>(action)];
  cell += q.params().learning_rate * (target - cell);
}

std::string_view to_string(PerformanceKind kind) noexcept {
  switch (kind) {
  case PerformanceKind::clipped_return:
    return "clipped_return";
  case PerformanceKind::episode_duration:
    return "episode_duration";
  case PerformanceKind::raw_return:
    return "raw_return";
  case PerformanceKind::success_indicator:
    return "success_indicator";
  }
  return "unknown";
}

PerformanceKind parse_performance_kind(std::string_view name) {
  if (name == "clipped_return") return PerformanceKind::clipped_return;
  if (name == "episode_duration") return PerformanceKind::episode_duration;
  if (name == "raw_return") return PerformanceKind::raw_return;
  if (name == "success_indicator") return PerformanceKind::success_indicator;
  throw std::invalid_argument("unknown performance kind '" + std::string(name) + "'");
}

PerformanceSample performance(PerformanceKind kind, double episode_return, int episode_length,
                              bool reached_goal, std::int64_t episode_index) {
  PerformanceSample sample;
  sample.kind = kind;
  sample.episode_index = episode_index;
  switch (kind) {
  case PerformanceKind::clipped_return:
    sample.value = std::max(0.0, episode_return);
    break;
  case PerformanceKind::episode_duration:
    sample.value = static_cast<double>(episode_length);
    break;
  case PerformanceKind::raw_return:
    sample.value = episode_return;
    break;
  case PerformanceKind::success_indicator:
    sample.value = reached_goal ? 1.0 : 0.0;
    break;
  }
  return sample;
}

StateKey gridworld_key(const GridWorldLayout& layout, const GridWorldState& state) {
  return static_cast<StateKey>(layout.index(state.agent));
}

StateKey predator_prey_key(const PredatorPreyState& state, int size) {
  auto clamp_offset = [](int v, int bound) { return std::clamp(v, -bound, bound) + bound; };

  const int pr = clamp_offset(state.predator.row - state.agent.row, 2);
  const int pc = clamp_offset(state.predator.col - state.agent.col, 2);

  // 7 x 7 clamped food offsets, 49 when the board has no food.
  int food_code = 49;
  int best = std::numeric_limits<int>::max();
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      if (!state.food[static_cast<std::size_t>(r * size + c)]) continue;
      const int dist = std::abs(r - state.agent.row) + std::abs(c - state.agent.col);
      if (dist < best) {
        best = dist;
        food_code = clamp_offset(r - state.agent.row, 3) * 7 + clamp_offset(c - state.agent.col, 3);
      }
    }
  }
  const int health = std::clamp(state.health / 10, 0, 10);

  StateKey key = static_cast<StateKey>(pr);
  key = key * 5 + static_cast<StateKey>(pc);
  key = key * 50 + static_cast<StateKey>(food_code);
  key = key * 11 + static_cast<StateKey>(health);
  return key;
}

} // namespace curriculum
