#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace neuroirl {

// The five grid actions, in tie-break order. Policies and Q-tables index by
// this order everywhere.
enum class Action : int { Up = 0, Down = 1, Left = 2, Right = 3, Nothing = 4 };

inline constexpr int kNumActions = 5;

inline constexpr Action kActionOrder[kNumActions] = {
    Action::Up, Action::Down, Action::Left, Action::Right, Action::Nothing};

// Up<->Down, Left<->Right; Nothing has no opposite.
std::optional<Action> opposite(Action a);

const char* to_string(Action a);
std::optional<Action> action_from_string(std::string_view name);

enum class MdpKind { Standard, Linear };

const char* to_string(MdpKind k);
std::optional<MdpKind> mdp_kind_from_string(std::string_view name);

struct GoalReward {
  int state = 0;
  double reward = 0.0;
};

enum class RewardMode { RandomPerMacroblock, ExplicitGoals };

struct GridSpec {
  int n = 4;                 // grid side length; n*n states
  int b = 1;                 // macroblock side length; cells in a block share one reward
  double determinism = 1.0;  // probability the selected action is the one taken
  MdpKind kind = MdpKind::Standard;
  double gamma = 0.9;
  RewardMode reward_mode = RewardMode::RandomPerMacroblock;
  std::vector<GoalReward> goals;  // used when reward_mode == ExplicitGoals
  std::uint64_t seed = 0;
  double cost_scale = 1.0;  // q = -reward * cost_scale on the linear side
};

struct Transition {
  int next = 0;
  double prob = 0.0;
};

// A grid MDP, immutable after construction and safe to share across threads.
// Linear-kind worlds additionally carry state costs and passive dynamics;
// the standard transition model is always populated.
struct GridWorld {
  GridSpec spec;
  int num_states = 0;
  int num_features = 0;  // 2*(n-1)
  std::vector<double> rewards;                            // |S|
  std::vector<std::uint8_t> features;                     // |S| x M, row-major
  std::vector<std::vector<Transition>> transitions;       // [s*5 + a]
  std::vector<std::vector<Transition>> passive_dynamics;  // [s], Linear kind
  std::vector<double> state_costs;                        // |S|, Linear kind

  int row(int s) const { return s / spec.n; }
  int col(int s) const { return s % spec.n; }
  int state_at(int r, int c) const { return r * spec.n + c; }

  // Successor under d=1 semantics: the intended move, self-looping off-grid.
  int intended_successor(int s, Action a) const;

  const std::vector<Transition>& transition_row(int s, Action a) const {
    return transitions[s * kNumActions + static_cast<int>(a)];
  }
};

// Builds the world described by spec. Deterministic for a fixed seed.
// Throws std::invalid_argument when the parameters are out of range.
GridWorld build_gridworld(const GridSpec& spec);

// Binary feature vector of state s, length 2*(n-1). Thermometer encoding:
// row features k = 1..n-1 are (row >= k), then likewise for columns, so the
// bit patterns agree along a row or column.
std::span<const std::uint8_t> state_features(const GridWorld& world, int s);

// Populates the linear-kind fields on a copy of world: q = -reward *
// cost_scale, passive dynamics uniform over the multiset of d=1 successors
// of the five actions.
GridWorld to_lmdp(const GridWorld& world);

}  // namespace neuroirl
