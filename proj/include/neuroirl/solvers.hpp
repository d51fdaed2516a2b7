#pragma once

#include <span>
#include <vector>

#include "neuroirl/gridworld.hpp"

namespace neuroirl {

using ValueFunction = std::vector<double>;

struct Policy {
  std::vector<Action> actions;  // one per state
};

struct QFunction {
  int num_states = 0;
  std::vector<double> values;  // [s*5 + a]

  double at(int s, Action a) const {
    return values[s * kNumActions + static_cast<int>(a)];
  }
};

struct ValueIterationResult {
  ValueFunction values;  // v(s) = max_a Q(s, a)
  QFunction q;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;  // sup-norm Bellman residual bound at exit
};

// Solves v(s) = max_a [R(s) + gamma * sum_s' theta(s'|s,a) v(s')] by Jacobi
// sweeps. The reward-on-state convention matches the grid worlds built here.
// `rewards` overrides world.rewards when given (same length |S|).
ValueIterationResult value_iteration(const GridWorld& world, double tol = 1e-10,
                                     int max_iters = 10000);
ValueIterationResult value_iteration(const GridWorld& world,
                                     std::span<const double> rewards,
                                     double tol = 1e-10, int max_iters = 10000);

// Reference implementation without OpenMP, kept for testing and benchmarks.
// Produces bit-identical output to value_iteration.
ValueIterationResult value_iteration_serial(const GridWorld& world,
                                            double tol = 1e-10,
                                            int max_iters = 10000);
ValueIterationResult value_iteration_serial(const GridWorld& world,
                                            std::span<const double> rewards,
                                            double tol = 1e-10,
                                            int max_iters = 10000);

// argmax_a Q(s,a); ties break by action order Up < Down < Left < Right < Nothing.
Policy extract_greedy_policy(const QFunction& q);

struct LmdpSolution {
  std::vector<double> v;  // log desirability, shifted so max(v) = 0
  std::vector<double> z;  // exp(v); sup-norm 1
  double lambda = 0.0;    // dominant eigenvalue of diag(exp(-q)) * P_passive
  std::vector<std::vector<Transition>> policy_dist;  // per state, prop. to p(s'|s) z(s')
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;  // sup-norm linear Bellman residual of the returned z
};

// Power iteration on z = exp(-q) .* (P_passive z), run in log space with
// sup-norm renormalization. The dominant eigenvalue is absorbed as a uniform
// cost shift, so v is determined up to an additive constant; downstream use
// is ordinal only. `costs` overrides world.state_costs when given.
LmdpSolution solve_lmdp(const GridWorld& world, double tol = 1e-9,
                        int max_iters = 10000);
LmdpSolution solve_lmdp(const GridWorld& world, std::span<const double> costs,
                        double tol = 1e-9, int max_iters = 10000);

// Maps the LMDP successor distribution back onto the five actions: each
// state takes the action whose d=1 successor has maximal desirability, with
// the same tie-break order as extract_greedy_policy.
Policy lmdp_greedy_policy(const LmdpSolution& sol, const GridWorld& world);

}  // namespace neuroirl
