#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "neuroirl/gridworld.hpp"
#include "neuroirl/metrics.hpp"
#include "neuroirl/neat.hpp"
#include "neuroirl/reward_trace.hpp"

namespace neuroirl {

enum class Algorithm { NeatIrl, BnpMean, BnpNeat };

const char* to_string(Algorithm a);
std::optional<Algorithm> algorithm_from_string(std::string_view name);

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::NeatIrl;
  GridSpec grid;        // per-run seed fields are overwritten by the harness
  int num_goals = 0;    // > 0: place this many random goals per run
  double goal_reward = 100.0;
  int n_samples = 4;
  int sample_len = 1;
  EvolutionParams evolution;
  SamplerParams sampler;
  int trace_input_cap = 16;  // trace columns handed to the network
  int runs = 25;
  std::uint64_t base_seed = 0;
  std::string output_path;  // empty: caller decides where the CSV goes
};

struct RunRow {
  int run = 0;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::NeatIrl;
  int n = 0;
  double determinism = 0.0;
  MdpKind mdp_kind = MdpKind::Standard;
  int n_samples = 0;
  int sample_len = 0;
  int pop = 0;
  int gens = 0;
  int goals = 0;
  double misprediction = 0.0;
  double seconds = 0.0;
  int generations_run = 0;
  bool terminated_early = false;
  bool failed = false;
  std::string error;
};

struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;
  int count = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunRow> rows;  // run order, one per configured run
  Aggregate aggregate;       // over non-failed rows
};

// Runs `config.runs` independent seeded runs (seed_i = base_seed + i),
// parallel across a worker pool. Each run builds a fresh world, solves the
// expert, samples a demonstration, executes the configured algorithm, and
// scores misprediction over all states. Timing wraps the algorithm call
// only. Per-run failures are recorded in their row and left out of the
// aggregate.
ExperimentResult run_experiment(const ExperimentConfig& config);

enum class SweepAxis { Samples, Pop, Gens, Goals };

const char* to_string(SweepAxis a);
std::optional<SweepAxis> sweep_axis_from_string(std::string_view name);

// One experiment per axis value, applied onto the base config.
std::vector<ExperimentResult> sweep(const ExperimentConfig& base, SweepAxis axis,
                                    const std::vector<int>& values);

// Welch t-test over the misprediction columns of two result sets.
TTestResult compare_results(const ExperimentResult& a, const ExperimentResult& b);

// Exact header:
// run,seed,algorithm,n,d,mdp_kind,n_samples,sample_len,pop,gens,goals,misprediction,seconds,generations_run,terminated_early
void write_csv(std::ostream& out, const std::vector<RunRow>& rows);
void write_csv_file(const std::string& path, const std::vector<RunRow>& rows);

std::vector<double> misprediction_column(const ExperimentResult& result);

}  // namespace neuroirl
