#include "neuroirl/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "neuroirl/demos.hpp"
#include "neuroirl/neat_irl.hpp"
#include "neuroirl/parallel.hpp"
#include "neuroirl/rng.hpp"
#include "neuroirl/solvers.hpp"

namespace neuroirl {

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::NeatIrl: return "neat_irl";
    case Algorithm::BnpMean: return "bnp_mean";
    case Algorithm::BnpNeat: return "bnp_neat";
  }
  return "?";
}

std::optional<Algorithm> algorithm_from_string(std::string_view name) {
  if (name == "neat_irl") return Algorithm::NeatIrl;
  if (name == "bnp_mean") return Algorithm::BnpMean;
  if (name == "bnp_neat") return Algorithm::BnpNeat;
  return std::nullopt;
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::Samples: return "samples";
    case SweepAxis::Pop: return "pop";
    case SweepAxis::Gens: return "gens";
    case SweepAxis::Goals: return "goals";
  }
  return "?";
}

std::optional<SweepAxis> sweep_axis_from_string(std::string_view name) {
  if (name == "samples") return SweepAxis::Samples;
  if (name == "pop") return SweepAxis::Pop;
  if (name == "gens") return SweepAxis::Gens;
  if (name == "goals") return SweepAxis::Goals;
  return std::nullopt;
}

namespace {

void validate_config(const ExperimentConfig& config) {
  if (config.runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (config.n_samples < 1 || config.sample_len < 1)
    throw std::invalid_argument("n_samples and sample_len must be >= 1");
  if (config.num_goals < 0 ||
      config.num_goals > config.grid.n * config.grid.n)
    throw std::invalid_argument("num_goals must fit in the grid");
  if (config.trace_input_cap < 1)
    throw std::invalid_argument("trace_input_cap must be >= 1");

  // Build a probe world so malformed grid specs fail before the run loop.
  GridSpec probe = config.grid;
  probe.seed = 0;
  if (config.num_goals > 0) {
    probe.reward_mode = RewardMode::ExplicitGoals;
    probe.goals.clear();
    for (int g = 0; g < config.num_goals; ++g) {
      probe.goals.push_back({g, config.goal_reward});
    }
  }
  build_gridworld(probe);
}

GridSpec spec_for_run(const ExperimentConfig& config, std::uint64_t run_seed) {
  GridSpec spec = config.grid;
  spec.seed = mix_seed(run_seed, stream::kWorldGen);
  if (config.num_goals > 0) {
    spec.reward_mode = RewardMode::ExplicitGoals;
    spec.goals.clear();
    // Distinct goal cells via a partial Fisher-Yates pass.
    Rng rng(spec.seed);
    const int num_states = config.grid.n * config.grid.n;
    std::vector<int> states(num_states);
    std::iota(states.begin(), states.end(), 0);
    for (int g = 0; g < config.num_goals; ++g) {
      std::swap(states[g], states[g + rng.uniform_int(num_states - g)]);
      spec.goals.push_back({states[g], config.goal_reward});
    }
  }
  return spec;
}

Policy expert_policy(const GridWorld& world) {
  if (world.spec.kind == MdpKind::Linear) {
    return lmdp_greedy_policy(solve_lmdp(world), world);
  }
  return extract_greedy_policy(value_iteration(world).q);
}

RunRow execute_run(const ExperimentConfig& config, int run_index) {
  RunRow row;
  row.run = run_index;
  row.seed = config.base_seed + static_cast<std::uint64_t>(run_index);
  row.algorithm = config.algorithm;
  row.n = config.grid.n;
  row.determinism = config.grid.determinism;
  row.mdp_kind = config.grid.kind;
  row.n_samples = config.n_samples;
  row.sample_len = config.sample_len;
  row.pop = config.evolution.pop_size;
  row.gens = config.evolution.max_generations;
  row.goals = config.num_goals;

  const GridWorld world = build_gridworld(spec_for_run(config, row.seed));
  const Policy expert = expert_policy(world);
  const Demonstration demo = sample_demonstrations(
      world, expert, config.n_samples, config.sample_len,
      mix_seed(row.seed, stream::kDemoSampling));

  Policy learned;
  const auto start = std::chrono::steady_clock::now();
  switch (config.algorithm) {
    case Algorithm::NeatIrl: {
      EvolutionParams evolution = config.evolution;
      evolution.seed = mix_seed(row.seed, stream::kEvolutionSeed);
      const IrlResult result = run_neat_irl(world, demo, evolution);
      learned = result.learned_policy;
      row.generations_run = result.generations_run;
      row.terminated_early = result.terminated_early;
      break;
    }
    case Algorithm::BnpMean: {
      SamplerParams sampler = config.sampler;
      sampler.seed = mix_seed(row.seed, stream::kSamplerSeed);
      const RewardTrace trace = sample_reward_trace(world, demo, sampler);
      learned = policy_from_rewards(world, aggregate_mean(trace));
      break;
    }
    case Algorithm::BnpNeat: {
      SamplerParams sampler = config.sampler;
      sampler.seed = mix_seed(row.seed, stream::kSamplerSeed);
      const RewardTrace trace = subsample_trace(
          sample_reward_trace(world, demo, sampler), config.trace_input_cap);
      EvolutionParams evolution = config.evolution;
      evolution.seed = mix_seed(row.seed, stream::kEvolutionSeed);
      const IrlResult result = run_bnp_neat(world, demo, trace, evolution);
      learned = result.learned_policy;
      row.generations_run = result.generations_run;
      row.terminated_early = result.terminated_early;
      break;
    }
  }
  const auto stop = std::chrono::steady_clock::now();
  row.seconds = std::chrono::duration<double>(stop - start).count();
  row.misprediction = misprediction(learned, expert).value;
  return row;
}

Aggregate aggregate_rows(const std::vector<RunRow>& rows) {
  Aggregate agg;
  double total = 0.0;
  for (const RunRow& row : rows) {
    if (row.failed) continue;
    total += row.misprediction;
    ++agg.count;
  }
  if (agg.count == 0) return agg;
  agg.mean = total / agg.count;
  double ss = 0.0;
  for (const RunRow& row : rows) {
    if (row.failed) continue;
    ss += (row.misprediction - agg.mean) * (row.misprediction - agg.mean);
  }
  agg.stddev = agg.count > 1 ? std::sqrt(ss / (agg.count - 1)) : 0.0;
  return agg;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate_config(config);

  ExperimentResult result;
  result.config = config;
  result.rows.resize(config.runs);

  const int runs = config.runs;
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (int i = 0; i < runs; ++i) {
    try {
      result.rows[i] = execute_run(config, i);
    } catch (const std::exception& e) {
      RunRow& row = result.rows[i];
      row.run = i;
      row.seed = config.base_seed + static_cast<std::uint64_t>(i);
      row.algorithm = config.algorithm;
      row.n = config.grid.n;
      row.determinism = config.grid.determinism;
      row.mdp_kind = config.grid.kind;
      row.n_samples = config.n_samples;
      row.sample_len = config.sample_len;
      row.pop = config.evolution.pop_size;
      row.gens = config.evolution.max_generations;
      row.goals = config.num_goals;
      row.misprediction = std::nan("");
      row.failed = true;
      row.error = e.what();
    }
  }

  result.aggregate = aggregate_rows(result.rows);
  if (!config.output_path.empty()) {
    write_csv_file(config.output_path, result.rows);
  }
  return result;
}

std::vector<ExperimentResult> sweep(const ExperimentConfig& base, SweepAxis axis,
                                    const std::vector<int>& values) {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  std::vector<ExperimentResult> results;
  results.reserve(values.size());
  for (int value : values) {
    ExperimentConfig config = base;
    config.output_path.clear();  // the caller owns the combined output
    switch (axis) {
      case SweepAxis::Samples: config.n_samples = value; break;
      case SweepAxis::Pop: config.evolution.pop_size = value; break;
      case SweepAxis::Gens: config.evolution.max_generations = value; break;
      case SweepAxis::Goals: config.num_goals = value; break;
    }
    results.push_back(run_experiment(config));
  }
  return results;
}

std::vector<double> misprediction_column(const ExperimentResult& result) {
  std::vector<double> column;
  column.reserve(result.rows.size());
  for (const RunRow& row : result.rows) {
    if (!row.failed) column.push_back(row.misprediction);
  }
  return column;
}

TTestResult compare_results(const ExperimentResult& a, const ExperimentResult& b) {
  const std::vector<double> ca = misprediction_column(a);
  const std::vector<double> cb = misprediction_column(b);
  return two_tailed_t_test(ca, cb);
}

void write_csv(std::ostream& out, const std::vector<RunRow>& rows) {
  out << "run,seed,algorithm,n,d,mdp_kind,n_samples,sample_len,pop,gens,goals,"
         "misprediction,seconds,generations_run,terminated_early\n";
  char buffer[256];
  for (const RunRow& row : rows) {
    std::snprintf(buffer, sizeof(buffer),
                  "%d,%llu,%s,%d,%g,%s,%d,%d,%d,%d,%d,%.17g,%.6f,%d,%d\n", row.run,
                  static_cast<unsigned long long>(row.seed), to_string(row.algorithm),
                  row.n, row.determinism, to_string(row.mdp_kind), row.n_samples,
                  row.sample_len, row.pop, row.gens, row.goals, row.misprediction,
                  row.seconds, row.generations_run, row.terminated_early ? 1 : 0);
    out << buffer;
  }
}

void write_csv_file(const std::string& path, const std::vector<RunRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_csv(out, rows);
}

}  // namespace neuroirl
