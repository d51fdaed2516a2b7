// Acceptance gate: every release-blocking behaviour, one PASS/FAIL line
// each. Run with no arguments for the full battery or with criterion
// numbers (e.g. "acceptance 1 4 9") to run a subset. Exits nonzero if any
// selected criterion fails its check or its time budget.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "neuroirl/demos.hpp"
#include "neuroirl/experiment.hpp"
#include "neuroirl/gridworld.hpp"
#include "neuroirl/metrics.hpp"
#include "neuroirl/neat.hpp"
#include "neuroirl/neat_irl.hpp"
#include "neuroirl/reward_trace.hpp"
#include "neuroirl/rng.hpp"
#include "neuroirl/solvers.hpp"
#include "support/oracles.hpp"

using namespace neuroirl;

namespace {

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<bool()> run;
};

void info(const char* fmt, ...) {
  std::va_list args;
  va_start(args, fmt);
  std::printf("        info: ");
  std::vprintf(fmt, args);
  std::printf("\n");
  va_end(args);
}

// C1: the uniform stochastic policy scores exactly 0.8 against any expert.
bool criterion_baseline() {
  bool ok = true;
  for (int n : {4, 16, 25, 64, 256}) {
    std::vector<std::array<double, kNumActions>> uniform(
        n, {0.2, 0.2, 0.2, 0.2, 0.2});
    for (int a = 0; a < kNumActions; ++a) {
      Policy expert;
      expert.actions.assign(n, static_cast<Action>(a));
      ok = ok && misprediction_stochastic(uniform, expert).value == 0.8;
    }
  }
  // A structured expert from a real world, same exactness requirement.
  GridSpec spec;
  spec.n = 4;
  spec.seed = 9;
  const GridWorld world = build_gridworld(spec);
  const Policy expert = extract_greedy_policy(value_iteration(world).q);
  std::vector<std::array<double, kNumActions>> uniform(
      world.num_states, {0.2, 0.2, 0.2, 0.2, 0.2});
  const double score = misprediction_stochastic(uniform, expert).value;
  info("uniform vs VI expert on n=4 equals the 0.8 literal: %s",
       score == 0.8 ? "yes" : "no");
  return ok && score == 0.8;
}

// C2: VI-greedy return matches the best of all 5^4 enumerated policies.
bool criterion_enumeration() {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GridSpec spec;
    spec.n = 2;
    spec.determinism = 1.0;
    spec.seed = seed;
    const GridWorld world = build_gridworld(spec);

    const ValueIterationResult vi = value_iteration(world);
    const Policy greedy = extract_greedy_policy(vi.q);
    const std::vector<double> v_greedy =
        oracle::evaluate_policy(world, greedy.actions);
    const std::vector<double> v_best = oracle::enumerate_optimal_values(world);

    for (int s = 0; s < world.num_states; ++s) {
      worst = std::max(worst, std::abs(v_greedy[s] - v_best[s]));
    }
  }
  info("max |greedy - enumerated best| over 20 worlds: %.3e", worst);
  return worst < 1e-8;
}

// C3: LMDP z residual and exp/log round-trip on 20 linear worlds.
bool criterion_lmdp() {
  double worst_residual = 0.0;
  double worst_roundtrip = 0.0;
  bool converged = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GridSpec spec;
    spec.n = 4;
    spec.kind = MdpKind::Linear;
    spec.seed = seed;
    const GridWorld world = build_gridworld(spec);
    const LmdpSolution sol = solve_lmdp(world, world.state_costs, 1e-12, 100000);
    converged = converged && sol.converged;
    worst_residual = std::max(worst_residual, sol.residual);
    for (int s = 0; s < world.num_states; ++s) {
      worst_roundtrip =
          std::max(worst_roundtrip, std::abs(sol.z[s] - std::exp(sol.v[s])));
    }
  }
  info("max residual %.3e, max exp/log gap %.3e", worst_residual, worst_roundtrip);
  return converged && worst_residual < 1e-8 && worst_roundtrip < 1e-10;
}

// C4: structural invariants through 1000 mutation/crossover cycles.
bool genome_ok(const Genome& g) {
  if (!is_acyclic(g)) return false;
  std::set<int> node_ids;
  for (const NodeGene& node : g.nodes) {
    if (!node_ids.insert(node.id).second) return false;
  }
  std::set<int> innovations;
  std::set<std::pair<int, int>> edges;
  for (const ConnectionGene& c : g.connections) {
    if (!innovations.insert(c.innovation).second) return false;
    if (!edges.insert({c.from, c.to}).second) return false;
    if (node_ids.count(c.from) == 0 || node_ids.count(c.to) == 0) return false;
    if (c.from == c.to || c.to < g.num_inputs || c.from == g.output_id())
      return false;
    if (!std::isfinite(c.weight)) return false;
  }
  return true;
}

bool criterion_neat_soundness() {
  const int num_inputs = 30;
  InnovationRegistry registry(num_inputs);
  EvolutionParams init;
  init.pop_size = 2;
  init.seed = 4242;
  Population pop = init_population(num_inputs, init, registry);
  Genome a = pop.genomes[0];
  Genome b = pop.genomes[1];

  EvolutionParams params;
  params.add_node_prob = 0.15;
  params.add_connection_prob = 0.25;
  params.weight_perturb_prob = 0.8;

  Rng rng(99);
  for (int cycle = 0; cycle < 1000; ++cycle) {
    a = mutate(std::move(a), params, registry, rng);
    b = mutate(std::move(b), params, registry, rng);
    if (!genome_ok(a) || !genome_ok(b)) {
      info("invariant violated after mutation, cycle %d", cycle);
      return false;
    }
    a.fitness = rng.uniform();
    b.fitness = rng.uniform();
    Genome child = a.fitness >= b.fitness ? crossover(a, b, rng)
                                          : crossover(b, a, rng);
    if (!genome_ok(child)) {
      info("invariant violated after crossover, cycle %d", cycle);
      return false;
    }
    (cycle % 2 == 0 ? a : b) = std::move(child);
  }
  info("final sizes: %zu/%zu nodes, %zu/%zu connections", a.nodes.size(),
       b.nodes.size(), a.connections.size(), b.connections.size());
  return true;
}

ExperimentConfig neat_irl_small() {
  ExperimentConfig config;
  config.algorithm = Algorithm::NeatIrl;
  config.grid.n = 4;
  config.grid.determinism = 1.0;
  config.n_samples = 4;
  config.sample_len = 1;
  config.evolution.pop_size = 50;
  config.evolution.max_generations = 50;
  config.runs = 25;
  config.base_seed = 1;
  return config;
}

// C5: desk-scale NEAT-IRL learning beats the random baseline and usually
// terminates early. The 80% rate was confirmed by the calibration run
// recorded in docs/calibration.md (observed 96% on this seed).
bool criterion_neat_irl_learning() {
  const ExperimentResult result = run_experiment(neat_irl_small());
  int early = 0;
  for (const RunRow& row : result.rows) early += row.terminated_early ? 1 : 0;
  const double rate = static_cast<double>(early) / result.rows.size();
  info("early termination %d/%zu (%.0f%%), mean misprediction %.4f", early,
       result.rows.size(), 100.0 * rate, result.aggregate.mean);
  return result.aggregate.count == 25 && rate >= 0.80 &&
         result.aggregate.mean < 0.8;
}

ExperimentConfig table_one_config(Algorithm algorithm, int goals) {
  ExperimentConfig config;
  config.algorithm = algorithm;
  config.grid.n = 4;
  config.grid.determinism = 0.7;
  config.num_goals = goals;
  config.goal_reward = 100.0;
  config.n_samples = 4;
  config.sample_len = 1;
  config.evolution.pop_size = 50;
  config.evolution.max_generations = 50;
  config.sampler.max_K = 8;
  config.sampler.iterations = 1000;
  config.sampler.eta = 1.0;
  config.trace_input_cap = 16;
  config.runs = 100;
  config.base_seed = 1;
  return config;
}

// C6: with four goals the evolved aggregator must beat the posterior mean,
// significantly.
bool criterion_multi_goal() {
  const ExperimentResult neat =
      run_experiment(table_one_config(Algorithm::BnpNeat, 4));
  const ExperimentResult mean =
      run_experiment(table_one_config(Algorithm::BnpMean, 4));
  const TTestResult t = compare_results(neat, mean);
  info("neat %.4f vs mean %.4f, t=%.3f, p=%.5f (ok %d/%d)",
       neat.aggregate.mean, mean.aggregate.mean, t.t_statistic, t.p_value,
       neat.aggregate.count, mean.aggregate.count);
  return neat.aggregate.count == 100 && mean.aggregate.count == 100 &&
         neat.aggregate.mean < mean.aggregate.mean && t.p_value < 0.05;
}

// C7: with one goal the posterior mean holds its own: better or within
// statistical noise.
bool criterion_single_goal() {
  const ExperimentResult neat =
      run_experiment(table_one_config(Algorithm::BnpNeat, 1));
  const ExperimentResult mean =
      run_experiment(table_one_config(Algorithm::BnpMean, 1));
  const TTestResult t = compare_results(neat, mean);
  info("mean %.4f vs neat %.4f, t=%.3f, p=%.5f (ok %d/%d)",
       mean.aggregate.mean, neat.aggregate.mean, t.t_statistic, t.p_value,
       mean.aggregate.count, neat.aggregate.count);
  return neat.aggregate.count == 100 && mean.aggregate.count == 100 &&
         (mean.aggregate.mean <= neat.aggregate.mean || t.p_value > 0.05);
}

// C8: algorithm wall-clock grows monotonically in population size and in
// generation budget. The sweep world is hard enough that no run terminates
// early, so the configured work is actually performed.
bool criterion_scaling() {
  ExperimentConfig base;
  base.algorithm = Algorithm::NeatIrl;
  base.grid.n = 8;
  base.grid.determinism = 0.7;
  base.n_samples = 12;
  base.sample_len = 6;
  base.evolution.pop_size = 50;
  base.evolution.max_generations = 40;
  base.runs = 20;
  base.base_seed = 42;

  bool ok = true;
  for (SweepAxis axis : {SweepAxis::Pop, SweepAxis::Gens}) {
    const std::vector<ExperimentResult> results =
        sweep(base, axis, {10, 25, 50, 100});
    double prev = -1.0;
    for (const ExperimentResult& r : results) {
      double total = 0.0;
      int early = 0;
      for (const RunRow& row : r.rows) {
        total += row.seconds;
        early += row.terminated_early ? 1 : 0;
      }
      const int value = axis == SweepAxis::Pop ? r.config.evolution.pop_size
                                               : r.config.evolution.max_generations;
      info("%s=%d: %.3fs (early %d, ok %d)", to_string(axis), value, total,
           early, r.aggregate.count);
      ok = ok && total > prev && early == 0 && r.aggregate.count == 20;
      prev = total;
    }
  }
  return ok;
}

// C9: identical configs reproduce byte-identical misprediction columns.
bool criterion_determinism() {
  const auto column_bytes = [](const ExperimentResult& result) {
    std::string bytes;
    char buffer[64];
    for (const double value : misprediction_column(result)) {
      std::snprintf(buffer, sizeof(buffer), "%.17g\n", value);
      bytes += buffer;
    }
    return bytes;
  };

  const ExperimentConfig irl = neat_irl_small();
  const bool irl_same =
      column_bytes(run_experiment(irl)) == column_bytes(run_experiment(irl));

  ExperimentConfig bnp = table_one_config(Algorithm::BnpNeat, 4);
  bnp.runs = 6;
  bnp.sampler.iterations = 200;
  const bool bnp_same =
      column_bytes(run_experiment(bnp)) == column_bytes(run_experiment(bnp));

  info("neat_irl identical: %s, bnp_neat identical: %s",
       irl_same ? "yes" : "no", bnp_same ? "yes" : "no");
  return irl_same && bnp_same;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "uniform baseline misprediction exactly 0.8", 1.0, criterion_baseline},
      {2, "VI greedy matches exhaustive policy enumeration", 10.0,
       criterion_enumeration},
      {3, "LMDP residual and exp/log round-trip", 10.0, criterion_lmdp},
      {4, "NEAT structural soundness over 1000 cycles", 30.0,
       criterion_neat_soundness},
      {5, "NEAT-IRL desk-scale learning", 300.0, criterion_neat_irl_learning},
      {6, "multi-goal: evolved aggregation beats the mean", 1800.0,
       criterion_multi_goal},
      {7, "single-goal: mean aggregation holds", 1800.0, criterion_single_goal},
      {8, "wall-clock scaling in pop size and generations", 600.0,
       criterion_scaling},
      {9, "byte-identical re-runs", 600.0, criterion_determinism},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    if (!selected.empty() && selected.count(criterion.id) == 0) continue;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = criterion.run();
    } catch (const std::exception& e) {
      info("exception: %s", e.what());
      ok = false;
    }
    const double elapsed = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    const bool within_budget = elapsed <= criterion.limit_seconds;
    const bool passed = ok && within_budget;
    std::printf("C%d %s  %s (%.2fs, limit %.0fs)%s\n", criterion.id,
                passed ? "PASS" : "FAIL", criterion.name, elapsed,
                criterion.limit_seconds,
                ok && !within_budget ? " [over time budget]" : "");
    if (!passed) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
