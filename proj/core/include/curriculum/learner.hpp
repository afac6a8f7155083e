#pragma once

#include "curriculum/env_types.hpp"
#include "curriculum/gridworld.hpp"
#include "curriculum/predator_prey.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string_view>
#include <unordered_map>

namespace curriculum {

using StateKey = std::uint64_t;
using ActionValues = std::array<double, kActionCount>;

struct QLearningParams {
  double learning_rate = 0.1;
  double discount = 0.99;

  void validate() const;

  friend bool operator==(const QLearningParams&, const QLearningParams&) = default;
};

/// Linear decay from `start` to `end` over the first `decay_fraction` of training.
struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  double decay_fraction = 0.5;

  void validate() const;
  double at(double training_progress) const;
};

/// Tabular action values; unseen states read as all zeros.
///
/// Snapshot format (text, one record per line):
///   curriculum-qtable 1
///   <learning_rate> <discount> <entry count>
///   <state key> <q north> <q east> <q south> <q west>
/// Reals are written as shortest round-trip decimal; entries are sorted by key.
class QTable {
public:
  explicit QTable(QLearningParams params = {});

  const QLearningParams& params() const noexcept { return params_; }
  const ActionValues& values(StateKey key) const;
  ActionValues& mutable_values(StateKey key);
  std::size_t size() const noexcept { return table_.size(); }
  bool contains(StateKey key) const { return table_.contains(key); }

  void save(std::ostream& out) const;
  static QTable load(std::istream& in);

  friend bool operator==(const QTable&, const QTable&) = default;

private:
  QLearningParams params_;
  std::unordered_map<StateKey, ActionValues> table_;
};

/// Highest-valued action; ties go to the earliest in north/east/south/west order.
Action greedy_action(const QTable& q, StateKey key);

/// Epsilon-greedy choice.
Action select_action(const QTable& q, StateKey key, double epsilon, std::mt19937_64& rng);

/// Q(s,a) += lr * (r + gamma * max_a' Q(s',a') * [not done] - Q(s,a)).
void q_update(QTable& q, StateKey state, Action action, double reward, StateKey next_state,
              bool done);

enum class PerformanceKind { clipped_return, episode_duration, raw_return, success_indicator };

std::string_view to_string(PerformanceKind kind) noexcept;
PerformanceKind parse_performance_kind(std::string_view name);

struct PerformanceSample {
  double value = 0.0;
  std::int64_t episode_index = 0;
  PerformanceKind kind = PerformanceKind::clipped_return;
};

PerformanceSample performance(PerformanceKind kind, double episode_return, int episode_length,
                              bool reached_goal, std::int64_t episode_index = 0);

StateKey gridworld_key(const GridWorldLayout& layout, const GridWorldState& state);

/// Compressed predator-prey key: predator offset clamped to +-2 per axis,
/// nearest-food offset clamped to +-3 per axis (Manhattan nearest, row-major
/// tie break), and health decile clamped to [0, 10].
StateKey predator_prey_key(const PredatorPreyState& state, int size);

} // namespace curriculum
