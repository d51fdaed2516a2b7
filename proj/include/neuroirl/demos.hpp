#pragma once

#include <cstdint>
#include <vector>

#include "neuroirl/gridworld.hpp"
#include "neuroirl/solvers.hpp"

namespace neuroirl {

struct DemoPair {
  int state = 0;
  Action action = Action::Up;

  bool operator==(const DemoPair&) const = default;
};

// One rollout: consecutive states follow the d=1 successor of the recorded
// action, so the pair sequence is self-consistent even on noisy worlds.
struct Trace {
  std::vector<DemoPair> pairs;
};

struct Demonstration {
  std::vector<Trace> traces;
  std::vector<int> demo_states;  // distinct states touched, ascending
};

// Rolls out `n_samples` traces of length `len` from uniformly random start
// states, following the expert's action and its intended successor at every
// step. Overlapping traces and repeated start states are allowed.
Demonstration sample_demonstrations(const GridWorld& world, const Policy& expert,
                                    int n_samples, int len, std::uint64_t seed);

// The demonstrated action at each distinct state, in demo_states order. The
// expert acts deterministically, so repeats of a state always agree.
std::vector<DemoPair> distinct_pairs(const Demonstration& demo);

}  // namespace neuroirl
