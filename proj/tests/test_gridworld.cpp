#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "neuroirl/gridworld.hpp"
#include "support/oracles.hpp"

using namespace neuroirl;

namespace {

GridSpec basic_spec(int n, double d, std::uint64_t seed) {
  GridSpec spec;
  spec.n = n;
  spec.determinism = d;
  spec.seed = seed;
  return spec;
}

double transition_prob(const GridWorld& w, int s, Action a, int next) {
  for (const Transition& t : w.transition_row(s, a)) {
    if (t.next == next) return t.prob;
  }
  return 0.0;
}

}  // namespace

TEST_CASE("action helpers") {
  CHECK(opposite(Action::Up) == Action::Down);
  CHECK(opposite(Action::Down) == Action::Up);
  CHECK(opposite(Action::Left) == Action::Right);
  CHECK(opposite(Action::Right) == Action::Left);
  CHECK(!opposite(Action::Nothing).has_value());

  for (Action a : kActionOrder) {
    CHECK(action_from_string(to_string(a)) == a);
  }
  CHECK(!action_from_string("sideways").has_value());
  CHECK(mdp_kind_from_string("standard") == MdpKind::Standard);
  CHECK(mdp_kind_from_string("linear") == MdpKind::Linear);
  CHECK(!mdp_kind_from_string("quadratic").has_value());
}

TEST_CASE("intended successors and boundary self-loops") {
  const GridWorld w = build_gridworld(basic_spec(4, 1.0, 1));

  // Interior state (1,1) = 5.
  CHECK(w.intended_successor(5, Action::Up) == 1);
  CHECK(w.intended_successor(5, Action::Down) == 9);
  CHECK(w.intended_successor(5, Action::Left) == 4);
  CHECK(w.intended_successor(5, Action::Right) == 6);
  CHECK(w.intended_successor(5, Action::Nothing) == 5);

  // Every off-grid move stays put.
  for (int c = 0; c < 4; ++c) {
    CHECK(w.intended_successor(w.state_at(0, c), Action::Up) == w.state_at(0, c));
    CHECK(w.intended_successor(w.state_at(3, c), Action::Down) == w.state_at(3, c));
    CHECK(w.intended_successor(w.state_at(c, 0), Action::Left) == w.state_at(c, 0));
    CHECK(w.intended_successor(w.state_at(c, 3), Action::Right) == w.state_at(c, 3));
  }
}

TEST_CASE("transition rows are distributions") {
  for (double d : {0.0, 0.3, 0.7, 1.0}) {
    GridSpec spec = basic_spec(4, d, 7);
    const GridWorld w = build_gridworld(spec);
    for (int s = 0; s < w.num_states; ++s) {
      for (Action a : kActionOrder) {
        double total = 0.0;
        std::set<int> seen;
        for (const Transition& t : w.transition_row(s, a)) {
          CHECK(t.prob > 0.0);
          CHECK(seen.insert(t.next).second);  // successors deduplicated
          total += t.prob;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("deterministic worlds have point-mass transitions") {
  const GridWorld w = build_gridworld(basic_spec(4, 1.0, 3));
  for (int s = 0; s < w.num_states; ++s) {
    for (Action a : kActionOrder) {
      const auto& row = w.transition_row(s, a);
      REQUIRE(row.size() == 1);
      CHECK(row[0].next == w.intended_successor(s, a));
      CHECK(row[0].prob == 1.0);
    }
  }
}

TEST_CASE("slip model at a corner") {
  // n=2, state 0, selected Up, d=0.7: slip mass 0.06 per action. Up, Left
  // and Nothing all keep the corner, Right reaches 1, Down reaches 2.
  const GridWorld w = build_gridworld(basic_spec(2, 0.7, 11));
  CHECK(transition_prob(w, 0, Action::Up, 0) == doctest::Approx(0.88));
  CHECK(transition_prob(w, 0, Action::Up, 1) == doctest::Approx(0.06));
  CHECK(transition_prob(w, 0, Action::Up, 2) == doctest::Approx(0.06));
  CHECK(transition_prob(w, 0, Action::Up, 3) == 0.0);
}

TEST_CASE("thermometer features") {
  const GridWorld w = build_gridworld(basic_spec(4, 1.0, 5));
  CHECK(w.num_features == 6);

  const auto f = state_features(w, w.state_at(2, 1));
  const std::uint8_t expected[6] = {1, 1, 0, 1, 0, 0};
  for (int i = 0; i < 6; ++i) CHECK(f[i] == expected[i]);

  // Corner states: all-zero and all-one patterns.
  const auto f00 = state_features(w, 0);
  const auto f33 = state_features(w, 15);
  for (int i = 0; i < 6; ++i) {
    CHECK(f00[i] == 0);
    CHECK(f33[i] == 1);
  }

  // States in one row share the row half of the encoding.
  for (int c = 0; c < 4; ++c) {
    const auto fc = state_features(w, w.state_at(2, c));
    for (int k = 0; k < 3; ++k) CHECK(fc[k] == f[k]);
  }

  CHECK_THROWS(state_features(w, 16));
}

TEST_CASE("random macroblock rewards") {
  GridSpec spec = basic_spec(4, 1.0, 42);
  spec.b = 2;
  const GridWorld w = build_gridworld(spec);

  bool any_nonzero = false;
  for (double r : w.rewards) {
    const bool valid = r == 0.0 || (r >= 1.0 && r <= 10.0 && r == std::floor(r));
    CHECK(valid);
    if (r != 0.0) any_nonzero = true;
  }
  CHECK(any_nonzero);

  // All four cells of each 2x2 block carry the block reward.
  for (int br = 0; br < 2; ++br) {
    for (int bc = 0; bc < 2; ++bc) {
      const double r0 = w.rewards[w.state_at(2 * br, 2 * bc)];
      CHECK(w.rewards[w.state_at(2 * br, 2 * bc + 1)] == r0);
      CHECK(w.rewards[w.state_at(2 * br + 1, 2 * bc)] == r0);
      CHECK(w.rewards[w.state_at(2 * br + 1, 2 * bc + 1)] == r0);
    }
  }

  const GridWorld same = build_gridworld(spec);
  CHECK(same.rewards == w.rewards);

  // Some seed yields at least one nonzero reward even when every block
  // initially draws zero; just check a spread of seeds stays in range.
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    GridSpec s2 = basic_spec(4, 1.0, seed);
    const GridWorld w2 = build_gridworld(s2);
    bool nonzero = false;
    for (double r : w2.rewards) nonzero = nonzero || r != 0.0;
    CHECK(nonzero);
  }
}

TEST_CASE("explicit goal rewards") {
  GridSpec spec = basic_spec(4, 1.0, 0);
  spec.reward_mode = RewardMode::ExplicitGoals;
  spec.goals = {{3, 100.0}, {12, 100.0}};
  const GridWorld w = build_gridworld(spec);
  for (int s = 0; s < w.num_states; ++s) {
    const bool is_goal = s == 3 || s == 12;
    CHECK(w.rewards[s] == (is_goal ? 100.0 : 0.0));
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(build_gridworld(basic_spec(1, 1.0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(build_gridworld(basic_spec(4, 1.5, 0)), std::invalid_argument);
  CHECK_THROWS_AS(build_gridworld(basic_spec(4, -0.1, 0)), std::invalid_argument);

  GridSpec bad_block = basic_spec(4, 1.0, 0);
  bad_block.b = 3;
  CHECK_THROWS_AS(build_gridworld(bad_block), std::invalid_argument);

  GridSpec bad_gamma = basic_spec(4, 1.0, 0);
  bad_gamma.gamma = 1.0;
  CHECK_THROWS_AS(build_gridworld(bad_gamma), std::invalid_argument);

  GridSpec bad_goal = basic_spec(4, 1.0, 0);
  bad_goal.reward_mode = RewardMode::ExplicitGoals;
  bad_goal.goals = {{16, 1.0}};
  CHECK_THROWS_AS(build_gridworld(bad_goal), std::invalid_argument);
}

TEST_CASE("lmdp conversion") {
  GridSpec spec = basic_spec(2, 1.0, 9);
  spec.kind = MdpKind::Linear;
  spec.cost_scale = 0.5;
  const GridWorld w = build_gridworld(spec);

  REQUIRE(w.state_costs.size() == 4);
  for (int s = 0; s < 4; ++s) {
    CHECK(w.state_costs[s] == doctest::Approx(-w.rewards[s] * 0.5));
  }

  // Corner state 0: Up, Left and Nothing stay, Right reaches 1, Down 2.
  REQUIRE(w.passive_dynamics.size() == 4);
  double p_self = 0.0, p_right = 0.0, p_down = 0.0, total = 0.0;
  for (const Transition& t : w.passive_dynamics[0]) {
    total += t.prob;
    if (t.next == 0) p_self = t.prob;
    if (t.next == 1) p_right = t.prob;
    if (t.next == 2) p_down = t.prob;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p_self == doctest::Approx(0.6));
  CHECK(p_right == doctest::Approx(0.2));
  CHECK(p_down == doctest::Approx(0.2));

  // The standard transition model is still there for the action view.
  CHECK(w.transitions.size() == 4 * kNumActions);
}

TEST_CASE("bfs oracle sanity") {
  const auto dist = oracle::bfs_distances(4, 0);
  CHECK(dist[0] == 0);
  CHECK(dist[3] == 3);
  CHECK(dist[15] == 6);
  CHECK(dist[5] == 2);
}
