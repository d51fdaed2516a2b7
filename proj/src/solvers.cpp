#include "neuroirl/solvers.hpp"

#include "neuroirl/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace neuroirl {

namespace {

double backup_state(const GridWorld& world, std::span<const double> rewards,
                    const std::vector<double>& v, int s) {
  double best = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < kNumActions; ++a) {
    double exp_next = 0.0;
    for (const Transition& t : world.transitions[s * kNumActions + a]) {
      exp_next += t.prob * v[t.next];
    }
    best = std::max(best, rewards[s] + world.spec.gamma * exp_next);
  }
  return best;
}

ValueIterationResult finish(const GridWorld& world, std::span<const double> rewards,
                            std::vector<double> v, int iters, bool converged,
                            double residual_bound) {
  ValueIterationResult out;
  out.iterations = iters;
  out.converged = converged;
  out.residual = residual_bound;
  out.q.num_states = world.num_states;
  out.q.values.resize(static_cast<std::size_t>(world.num_states) * kNumActions);
  out.values.resize(world.num_states);
  for (int s = 0; s < world.num_states; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < kNumActions; ++a) {
      double exp_next = 0.0;
      for (const Transition& t : world.transitions[s * kNumActions + a]) {
        exp_next += t.prob * v[t.next];
      }
      const double q = rewards[s] + world.spec.gamma * exp_next;
      out.q.values[s * kNumActions + a] = q;
      best = std::max(best, q);
    }
    out.values[s] = best;
  }
  return out;
}

template <bool Parallel>
ValueIterationResult value_iteration_impl(const GridWorld& world,
                                          std::span<const double> rewards,
                                          double tol, int max_iters) {
  if (tol <= 0.0) throw std::invalid_argument("tol must be positive");
  if (rewards.size() != static_cast<std::size_t>(world.num_states))
    throw std::invalid_argument("reward vector length mismatch");

  const int n = world.num_states;
  const double gamma = world.spec.gamma;
  // Stopping at delta < tol*(1-gamma) bounds the Bellman residual of the
  // final iterate by gamma*(1-gamma)*tol < tol.
  const double threshold = tol * (1.0 - gamma);

  std::vector<double> v(n, 0.0), v_next(n, 0.0);
  int iters = 0;
  double delta = 0.0;
  bool done = false;

  if constexpr (Parallel) {
    // One team for all sweeps; forking per sweep costs more than a sweep on
    // mid-sized grids. The max reduction is order-insensitive, so results
    // stay bit-identical to the serial path.
#pragma omp parallel num_threads(worker_count()) if (n >= 128)
    {
      for (int it = 0; it < max_iters; ++it) {
#pragma omp single
        delta = 0.0;
#pragma omp for schedule(static) reduction(max : delta)
        for (int s = 0; s < n; ++s) {
          v_next[s] = backup_state(world, rewards, v, s);
          delta = std::max(delta, std::abs(v_next[s] - v[s]));
        }
#pragma omp single
        {
          v.swap(v_next);
          iters = it + 1;
          if (delta < threshold) done = true;
        }
        if (done) break;
      }
    }
  } else {
    for (; iters < max_iters && !done; ) {
      delta = 0.0;
      for (int s = 0; s < n; ++s) {
        v_next[s] = backup_state(world, rewards, v, s);
        delta = std::max(delta, std::abs(v_next[s] - v[s]));
      }
      v.swap(v_next);
      ++iters;
      if (delta < threshold) done = true;
    }
  }
  return finish(world, rewards, std::move(v), iters, done, gamma * delta);
}

}  // namespace

ValueIterationResult value_iteration(const GridWorld& world, double tol, int max_iters) {
  return value_iteration_impl<true>(world, world.rewards, tol, max_iters);
}

ValueIterationResult value_iteration(const GridWorld& world,
                                     std::span<const double> rewards, double tol,
                                     int max_iters) {
  return value_iteration_impl<true>(world, rewards, tol, max_iters);
}

ValueIterationResult value_iteration_serial(const GridWorld& world, double tol,
                                            int max_iters) {
  return value_iteration_impl<false>(world, world.rewards, tol, max_iters);
}

ValueIterationResult value_iteration_serial(const GridWorld& world,
                                            std::span<const double> rewards,
                                            double tol, int max_iters) {
  return value_iteration_impl<false>(world, rewards, tol, max_iters);
}

Policy extract_greedy_policy(const QFunction& q) {
  Policy policy;
  policy.actions.resize(q.num_states, Action::Up);
  for (int s = 0; s < q.num_states; ++s) {
    double best = q.at(s, Action::Up);
    Action best_a = Action::Up;
    for (int a = 1; a < kNumActions; ++a) {
      const double qa = q.values[s * kNumActions + a];
      if (qa > best) {
        best = qa;
        best_a = static_cast<Action>(a);
      }
    }
    policy.actions[s] = best_a;
  }
  return policy;
}

namespace {

double log_sum_exp(const std::vector<double>& terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (double t : terms) m = std::max(m, t);
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - m);
  return m + std::log(acc);
}

}  // namespace

LmdpSolution solve_lmdp(const GridWorld& world, double tol, int max_iters) {
  if (world.state_costs.empty())
    throw std::invalid_argument("solve_lmdp requires a linear-kind world with state costs");
  return solve_lmdp(world, world.state_costs, tol, max_iters);
}

LmdpSolution solve_lmdp(const GridWorld& world, std::span<const double> costs,
                        double tol, int max_iters) {
  if (tol <= 0.0) throw std::invalid_argument("tol must be positive");
  const int n = world.num_states;
  if (costs.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("cost vector length mismatch");
  if (world.passive_dynamics.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("solve_lmdp requires populated passive dynamics");
  for (int s = 0; s < n; ++s) {
    if (world.passive_dynamics[s].empty())
      throw std::invalid_argument("passive dynamics row is empty");
  }

  // Center the costs; a uniform shift scales the eigenvalue but leaves the
  // eigenvector untouched, and it keeps exp() in range for large rewards.
  double mean_cost = 0.0;
  for (int s = 0; s < n; ++s) mean_cost += costs[s];
  mean_cost /= n;

  std::vector<double> lv(n, 0.0), lw(n, 0.0), terms;
  double log_lambda = 0.0;
  int iters = 0;
  bool converged = false;
  for (; iters < max_iters; ++iters) {
    double max_lw = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < n; ++s) {
      terms.clear();
      for (const Transition& t : world.passive_dynamics[s]) {
        terms.push_back(std::log(t.prob) + lv[t.next]);
      }
      lw[s] = -(costs[s] - mean_cost) + log_sum_exp(terms);
      max_lw = std::max(max_lw, lw[s]);
    }
    log_lambda = max_lw;
    double delta = 0.0;
    for (int s = 0; s < n; ++s) {
      const double next = lw[s] - max_lw;
      delta = std::max(delta, std::abs(next - lv[s]));
      lv[s] = next;
    }
    if (delta < tol) {
      converged = true;
      ++iters;
      break;
    }
  }

  LmdpSolution sol;
  sol.v = lv;
  sol.iterations = iters;
  sol.converged = converged;
  sol.lambda = std::exp(log_lambda - mean_cost);
  sol.z.resize(n);
  for (int s = 0; s < n; ++s) sol.z[s] = std::exp(lv[s]);

  // Residual of the returned z against one more application of the
  // eigenvalue-normalized operator.
  double residual = 0.0;
  for (int s = 0; s < n; ++s) {
    terms.clear();
    for (const Transition& t : world.passive_dynamics[s]) {
      terms.push_back(std::log(t.prob) + lv[t.next]);
    }
    const double image = std::exp(-(costs[s] - mean_cost) + log_sum_exp(terms) - log_lambda);
    residual = std::max(residual, std::abs(sol.z[s] - image));
  }
  sol.residual = residual;

  sol.policy_dist.resize(n);
  for (int s = 0; s < n; ++s) {
    const auto& row = world.passive_dynamics[s];
    terms.clear();
    for (const Transition& t : row) terms.push_back(std::log(t.prob) + lv[t.next]);
    const double norm = log_sum_exp(terms);
    auto& out = sol.policy_dist[s];
    out.reserve(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
      out.push_back({row[i].next, std::exp(terms[i] - norm)});
    }
  }
  return sol;
}

Policy lmdp_greedy_policy(const LmdpSolution& sol, const GridWorld& world) {
  Policy policy;
  policy.actions.resize(world.num_states, Action::Up);
  for (int s = 0; s < world.num_states; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    Action best_a = Action::Up;
    for (Action a : kActionOrder) {
      const double score = sol.v[world.intended_successor(s, a)];
      if (score > best) {
        best = score;
        best_a = a;
      }
    }
    policy.actions[s] = best_a;
  }
  return policy;
}

}  // namespace neuroirl
