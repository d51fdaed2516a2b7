#include "neuroirl/gridworld.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

#include "neuroirl/rng.hpp"

namespace neuroirl {

std::optional<Action> opposite(Action a) {
  switch (a) {
    case Action::Up: return Action::Down;
    case Action::Down: return Action::Up;
    case Action::Left: return Action::Right;
    case Action::Right: return Action::Left;
    case Action::Nothing: return std::nullopt;
  }
  return std::nullopt;
}

const char* to_string(Action a) {
  switch (a) {
    case Action::Up: return "up";
    case Action::Down: return "down";
    case Action::Left: return "left";
    case Action::Right: return "right";
    case Action::Nothing: return "nothing";
  }
  return "?";
}

std::optional<Action> action_from_string(std::string_view name) {
  for (Action a : kActionOrder) {
    if (name == to_string(a)) return a;
  }
  return std::nullopt;
}

const char* to_string(MdpKind k) {
  return k == MdpKind::Standard ? "standard" : "linear";
}

std::optional<MdpKind> mdp_kind_from_string(std::string_view name) {
  if (name == "standard") return MdpKind::Standard;
  if (name == "linear") return MdpKind::Linear;
  return std::nullopt;
}

int GridWorld::intended_successor(int s, Action a) const {
  int r = row(s), c = col(s);
  switch (a) {
    case Action::Up: r -= 1; break;
    case Action::Down: r += 1; break;
    case Action::Left: c -= 1; break;
    case Action::Right: c += 1; break;
    case Action::Nothing: break;
  }
  if (r < 0 || r >= spec.n || c < 0 || c >= spec.n) return s;  // off-grid: stay
  return state_at(r, c);
}

namespace {

void validate(const GridSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("grid side length must be >= 2");
  if (spec.b < 1 || (spec.b != 1 && spec.n % spec.b != 0))
    throw std::invalid_argument("macroblock size must be 1 or divide n");
  if (spec.determinism < 0.0 || spec.determinism > 1.0)
    throw std::invalid_argument("determinism must be in [0, 1]");
  if (!(spec.gamma > 0.0 && spec.gamma < 1.0))
    throw std::invalid_argument("gamma must be in (0, 1)");
  if (spec.reward_mode == RewardMode::ExplicitGoals) {
    const int ns = spec.n * spec.n;
    for (const auto& g : spec.goals) {
      if (g.state < 0 || g.state >= ns)
        throw std::invalid_argument("goal state " + std::to_string(g.state) +
                                    " outside [0, " + std::to_string(ns) + ")");
    }
  }
}

std::vector<double> make_rewards(const GridSpec& spec, int num_states) {
  std::vector<double> rewards(num_states, 0.0);
  if (spec.reward_mode == RewardMode::ExplicitGoals) {
    for (const auto& g : spec.goals) rewards[g.state] = g.reward;
    return rewards;
  }

  // One reward value per b x b macroblock: zero with probability 0.7,
  // otherwise uniform on {1,...,10}. If every block lands on zero, one
  // block is re-drawn so the world has at least one goal.
  Rng rng(spec.seed);
  const int blocks_per_side = spec.n / spec.b;
  const int num_blocks = blocks_per_side * blocks_per_side;
  std::vector<double> block_rewards(num_blocks, 0.0);
  bool any_nonzero = false;
  for (int i = 0; i < num_blocks; ++i) {
    if (rng.uniform() >= 0.7) {
      block_rewards[i] = rng.uniform_int(1, 10);
      any_nonzero = true;
    }
  }
  if (!any_nonzero) {
    block_rewards[rng.uniform_int(num_blocks)] = rng.uniform_int(1, 10);
  }
  for (int s = 0; s < num_states; ++s) {
    const int br = (s / spec.n) / spec.b;
    const int bc = (s % spec.n) / spec.b;
    rewards[s] = block_rewards[br * blocks_per_side + bc];
  }
  return rewards;
}

std::vector<std::uint8_t> make_features(int n, int num_states) {
  const int m = 2 * (n - 1);
  std::vector<std::uint8_t> features(static_cast<std::size_t>(num_states) * m, 0);
  for (int s = 0; s < num_states; ++s) {
    const int r = s / n, c = s % n;
    std::uint8_t* f = features.data() + static_cast<std::size_t>(s) * m;
    for (int k = 1; k < n; ++k) {
      f[k - 1] = r >= k ? 1 : 0;
      f[n - 1 + k - 1] = c >= k ? 1 : 0;
    }
  }
  return features;
}

}  // namespace

GridWorld build_gridworld(const GridSpec& spec) {
  validate(spec);

  GridWorld world;
  world.spec = spec;
  world.num_states = spec.n * spec.n;
  world.num_features = 2 * (spec.n - 1);
  world.rewards = make_rewards(spec, world.num_states);
  world.features = make_features(spec.n, world.num_states);

  // Selected action taken with probability d + (1-d)/5; each of the other
  // four with probability (1-d)/5. The uniform replacement draw includes
  // the selected action itself.
  const double d = spec.determinism;
  const double slip = (1.0 - d) / kNumActions;
  world.transitions.resize(static_cast<std::size_t>(world.num_states) * kNumActions);
  for (int s = 0; s < world.num_states; ++s) {
    for (Action selected : kActionOrder) {
      std::map<int, double> dist;
      for (Action taken : kActionOrder) {
        const double p = (taken == selected) ? d + slip : slip;
        if (p > 0.0) dist[world.intended_successor(s, taken)] += p;
      }
      auto& row = world.transitions[s * kNumActions + static_cast<int>(selected)];
      row.reserve(dist.size());
      for (const auto& [next, p] : dist) row.push_back({next, p});
    }
  }

  if (spec.kind == MdpKind::Linear) {
    world = to_lmdp(world);
  }
  return world;
}

std::span<const std::uint8_t> state_features(const GridWorld& world, int s) {
  if (s < 0 || s >= world.num_states) throw std::out_of_range("state out of range");
  return {world.features.data() + static_cast<std::size_t>(s) * world.num_features,
          static_cast<std::size_t>(world.num_features)};
}

GridWorld to_lmdp(const GridWorld& world) {
  GridWorld out = world;
  out.spec.kind = MdpKind::Linear;

  out.state_costs.resize(out.num_states);
  for (int s = 0; s < out.num_states; ++s) {
    out.state_costs[s] = -out.rewards[s] * out.spec.cost_scale;
  }

  // Uniform over the multiset of d=1 successors; self-loops merge mass.
  out.passive_dynamics.assign(out.num_states, {});
  for (int s = 0; s < out.num_states; ++s) {
    std::map<int, double> dist;
    for (Action a : kActionOrder) {
      dist[out.intended_successor(s, a)] += 1.0 / kNumActions;
    }
    auto& row = out.passive_dynamics[s];
    row.reserve(dist.size());
    for (const auto& [next, p] : dist) row.push_back({next, p});
  }
  return out;
}

}  // namespace neuroirl
