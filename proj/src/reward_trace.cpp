#include "neuroirl/reward_trace.hpp"

#include <cmath>
#include <stdexcept>

#include "neuroirl/rng.hpp"
#include "neuroirl/solvers.hpp"

namespace neuroirl {

std::vector<std::uint8_t> composite_features(std::span<const std::uint8_t> Z,
                                             std::span<const std::uint8_t> U,
                                             std::span<const std::uint8_t> X,
                                             const GridWorld& world,
                                             int num_composites) {
  const int m = world.num_features;
  const int k = num_composites;
  if (Z.size() != static_cast<std::size_t>(m) * k ||
      U.size() != static_cast<std::size_t>(m) * k ||
      X.size() != static_cast<std::size_t>(m))
    throw std::invalid_argument("sampler matrix dimensions disagree");

  std::vector<std::uint8_t> phi(static_cast<std::size_t>(world.num_states) * k, 1);
  for (int s = 0; s < world.num_states; ++s) {
    const std::uint8_t* atomic =
        world.features.data() + static_cast<std::size_t>(s) * m;
    std::uint8_t* row = phi.data() + static_cast<std::size_t>(s) * k;
    for (int j = 0; j < k; ++j) {
      std::uint8_t value = 1;
      for (int i = 0; i < m; ++i) {
        if (!Z[static_cast<std::size_t>(i) * k + j] || !X[i]) continue;
        if (!(atomic[i] ^ U[static_cast<std::size_t>(i) * k + j])) {
          value = 0;
          break;
        }
      }
      row[j] = value;
    }
  }
  return phi;
}

std::vector<double> rewards_from(std::span<const std::uint8_t> Phi,
                                 std::span<const double> w, int num_states) {
  const int k = static_cast<int>(w.size());
  if (Phi.size() != static_cast<std::size_t>(num_states) * k)
    throw std::invalid_argument("Phi dimensions disagree with w");
  std::vector<double> r(num_states, 0.0);
  for (int s = 0; s < num_states; ++s) {
    const std::uint8_t* row = Phi.data() + static_cast<std::size_t>(s) * k;
    for (int j = 0; j < k; ++j) {
      if (row[j]) r[s] += w[j];
    }
  }
  return r;
}

double demo_log_likelihood(std::span<const double> r, const GridWorld& world,
                           const Demonstration& demo, double eta) {
  const ValueIterationResult solved = value_iteration(world, r);
  double total = 0.0;
  for (const Trace& trace : demo.traces) {
    for (const DemoPair& pair : trace.pairs) {
      double max_q = -1e300;
      for (int a = 0; a < kNumActions; ++a) {
        max_q = std::max(max_q, solved.q.values[pair.state * kNumActions + a]);
      }
      double lse = 0.0;
      for (int a = 0; a < kNumActions; ++a) {
        lse += std::exp(eta * (solved.q.values[pair.state * kNumActions + a] - max_q));
      }
      const double q_sa = solved.q.at(pair.state, pair.action);
      total += eta * (q_sa - max_q) - std::log(lse);
    }
  }
  return total;
}

namespace {

void refresh_derived(SamplerState& state, const GridWorld& world) {
  state.Phi = composite_features(state.Z, state.U, state.X, world,
                                 state.num_composites);
  state.r = rewards_from(state.Phi, state.w, state.num_states);
}

double bernoulli_log_prior(const std::vector<std::uint8_t>& X, double kappa) {
  int ones = 0;
  for (std::uint8_t x : X) ones += x;
  const int zeros = static_cast<int>(X.size()) - ones;
  return ones * std::log(kappa) + zeros * std::log1p(-kappa);
}

}  // namespace

RewardTrace sample_reward_trace(const GridWorld& world, const Demonstration& demo,
                                const SamplerParams& params) {
  if (params.max_K < 1 || params.iterations < 1)
    throw std::invalid_argument("sampler needs max_K >= 1 and iterations >= 1");
  if (!(params.eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (!(params.kappa_lo > 0.0 && params.kappa_hi < 1.0 &&
        params.kappa_lo < params.kappa_hi))
    throw std::invalid_argument("kappa interval must satisfy 0 < lo < hi < 1");

  const int m = world.num_features;
  const int k = params.max_K;

  SamplerState cur;
  cur.num_features = m;
  cur.num_composites = k;
  cur.num_states = world.num_states;
  cur.Z.assign(static_cast<std::size_t>(m) * k, 0);
  cur.U.assign(static_cast<std::size_t>(m) * k, 0);
  cur.X.assign(m, 1);
  cur.kappa = 0.5 * (params.kappa_lo + params.kappa_hi);
  cur.w.assign(k, 0.0);
  refresh_derived(cur, world);

  Rng rng(params.seed);
  double cur_ll = demo_log_likelihood(cur.r, world, demo, params.eta);

  RewardTrace trace;
  trace.iterations.reserve(params.iterations);
  for (int t = 0; t < params.iterations; ++t) {
    const int kind = rng.uniform_int(5);
    switch (kind) {
      case 0:
      case 1: {
        const int i = rng.uniform_int(m);
        const int j = rng.uniform_int(k);
        SamplerState prop = cur;
        auto& mat = kind == 0 ? prop.Z : prop.U;
        mat[static_cast<std::size_t>(i) * k + j] ^= 1;
        refresh_derived(prop, world);
        const double prop_ll = demo_log_likelihood(prop.r, world, demo, params.eta);
        if (std::log(rng.uniform()) < prop_ll - cur_ll) {
          cur = std::move(prop);
          cur_ll = prop_ll;
        }
        break;
      }
      case 2: {
        const int i = rng.uniform_int(m);
        SamplerState prop = cur;
        prop.X[i] ^= 1;
        refresh_derived(prop, world);
        const double prop_ll = demo_log_likelihood(prop.r, world, demo, params.eta);
        const double prior_delta = prop.X[i]
                                       ? std::log(cur.kappa) - std::log1p(-cur.kappa)
                                       : std::log1p(-cur.kappa) - std::log(cur.kappa);
        if (std::log(rng.uniform()) < prop_ll - cur_ll + prior_delta) {
          cur = std::move(prop);
          cur_ll = prop_ll;
        }
        break;
      }
      case 3: {
        // Independence proposal from the weight prior: the prior ratio and
        // the proposal ratio cancel, leaving the likelihood ratio.
        const int j = rng.uniform_int(k);
        SamplerState prop = cur;
        prop.w[j] = rng.normal(0.0, params.weight_prior_sigma);
        prop.r = rewards_from(prop.Phi, prop.w, prop.num_states);
        const double prop_ll = demo_log_likelihood(prop.r, world, demo, params.eta);
        if (std::log(rng.uniform()) < prop_ll - cur_ll) {
          cur = std::move(prop);
          cur_ll = prop_ll;
        }
        break;
      }
      default: {
        // kappa touches only the X prior; likelihood is unchanged.
        const double kappa_prop = rng.uniform(params.kappa_lo, params.kappa_hi);
        const double delta = bernoulli_log_prior(cur.X, kappa_prop) -
                             bernoulli_log_prior(cur.X, cur.kappa);
        if (std::log(rng.uniform()) < delta) {
          cur.kappa = kappa_prop;
        }
        break;
      }
    }
    trace.iterations.push_back(cur.r);
  }
  return trace;
}

std::vector<double> aggregate_mean(const RewardTrace& trace) {
  if (trace.iterations.empty()) throw std::invalid_argument("empty reward trace");
  const std::size_t n = trace.iterations.front().size();
  std::vector<double> mean(n, 0.0);
  for (const std::vector<double>& r : trace.iterations) {
    if (r.size() != n) throw std::invalid_argument("ragged reward trace");
    for (std::size_t s = 0; s < n; ++s) mean[s] += r[s];
  }
  const double scale = 1.0 / static_cast<double>(trace.iterations.size());
  for (double& v : mean) v *= scale;
  return mean;
}

RewardTrace subsample_trace(const RewardTrace& trace, int cap) {
  if (cap < 1) throw std::invalid_argument("cap must be positive");
  const int t = static_cast<int>(trace.iterations.size());
  if (t <= cap) return trace;
  RewardTrace out;
  out.iterations.reserve(cap);
  if (cap == 1) {
    out.iterations.push_back(trace.iterations.back());
    return out;
  }
  for (int i = 0; i < cap; ++i) {
    out.iterations.push_back(
        trace.iterations[static_cast<std::size_t>(i) * (t - 1) / (cap - 1)]);
  }
  return out;
}

Policy policy_from_rewards(const GridWorld& world, const std::vector<double>& rewards) {
  if (world.spec.kind == MdpKind::Linear) {
    std::vector<double> costs(rewards.size());
    for (std::size_t s = 0; s < rewards.size(); ++s) {
      costs[s] = -rewards[s] * world.spec.cost_scale;
    }
    return lmdp_greedy_policy(solve_lmdp(world, costs), world);
  }
  return extract_greedy_policy(value_iteration(world, rewards).q);
}

IrlResult run_bnp_neat(const GridWorld& world, const Demonstration& demo,
                       const RewardTrace& trace, const EvolutionParams& evolution,
                       std::ostream* progress) {
  if (trace.iterations.empty()) throw std::invalid_argument("empty reward trace");
  const int t = static_cast<int>(trace.iterations.size());
  const int n = world.num_states;

  const DemoIndex index = DemoIndex::from(demo);
  if (index.size() == 0) throw std::invalid_argument("empty demonstration");

  // Transpose the trace into one row of T inputs per state.
  std::vector<double> inputs(static_cast<std::size_t>(n) * t);
  for (int step = 0; step < t; ++step) {
    const std::vector<double>& r = trace.iterations[step];
    if (static_cast<int>(r.size()) != n)
      throw std::invalid_argument("trace vector length mismatch");
    for (int s = 0; s < n; ++s) {
      inputs[static_cast<std::size_t>(s) * t + step] = r[s];
    }
  }

  const auto rewards_of = [&inputs, n, t](const CompiledNetwork& net,
                                          std::vector<double>& scratch) {
    std::vector<double> rewards(n);
    for (int s = 0; s < n; ++s) {
      rewards[s] = net.activate({inputs.data() + static_cast<std::size_t>(s) * t,
                                 static_cast<std::size_t>(t)},
                                scratch);
    }
    return rewards;
  };

  const auto fitness = [&world, &index, &rewards_of](const Genome& genome) {
    const CompiledNetwork net(genome);
    std::vector<double> scratch(net.scratch_size());
    const std::vector<double> rewards = rewards_of(net, scratch);
    return coherence_fitness(policy_from_rewards(world, rewards), index);
  };

  const double target = 2.0 * index.size();
  const EvolutionRun run = run_evolution(t, evolution, fitness, target, progress);

  IrlResult result;
  result.best_genome = run.best;
  result.generations_run = run.generations_run;
  result.terminated_early = run.terminated_early;
  result.fitness_history = run.fitness_history;

  const CompiledNetwork net(result.best_genome);
  std::vector<double> scratch(net.scratch_size());
  result.learned_values = rewards_of(net, scratch);
  result.learned_policy = policy_from_rewards(world, result.learned_values);
  return result;
}

}  // namespace neuroirl
