#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "neuroirl/experiment.hpp"
#include "neuroirl/serialization.hpp"

namespace {

using neuroirl::ExperimentConfig;
using neuroirl::ExperimentResult;
using neuroirl::RunRow;

struct Flags {
  std::string config_path;
  std::string algorithm;
  int n = 0;
  double determinism = 0.0;
  std::string mdp_kind;
  int samples = 0;
  int sample_len = 0;
  int pop = 0;
  int gens = 0;
  int goals = 0;
  int runs = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string axis;
  std::string values;
};

void add_common_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON experiment manifest");
  cmd->add_option("--algorithm", flags.algorithm,
                  "neat_irl | bnp_mean | bnp_neat");
  cmd->add_option("--n", flags.n, "grid side length");
  cmd->add_option("--determinism", flags.determinism, "action determinism d");
  cmd->add_option("--mdp-kind", flags.mdp_kind, "standard | linear");
  cmd->add_option("--samples", flags.samples, "traces per demonstration");
  cmd->add_option("--sample-len", flags.sample_len, "steps per trace");
  cmd->add_option("--pop", flags.pop, "population size");
  cmd->add_option("--gens", flags.gens, "maximum generations");
  cmd->add_option("--goals", flags.goals,
                  "random goal count (0 keeps macroblock rewards)");
  cmd->add_option("--runs", flags.runs, "independent runs");
  cmd->add_option("--seed", flags.seed, "base seed");
  cmd->add_option("--out", flags.out, "CSV output path (default stdout)");
}

// Flag values win over the manifest; untouched fields keep manifest values.
ExperimentConfig build_config(const CLI::App* cmd, const Flags& flags) {
  ExperimentConfig config;
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw std::invalid_argument("cannot read config: " + flags.config_path);
    nlohmann::json j;
    in >> j;
    config = neuroirl::config_from_json(j);
  }
  if (cmd->count("--algorithm") > 0) {
    const auto algorithm = neuroirl::algorithm_from_string(flags.algorithm);
    if (!algorithm) throw std::invalid_argument("unknown algorithm: " + flags.algorithm);
    config.algorithm = *algorithm;
  }
  if (cmd->count("--n") > 0) config.grid.n = flags.n;
  if (cmd->count("--determinism") > 0) config.grid.determinism = flags.determinism;
  if (cmd->count("--mdp-kind") > 0) {
    const auto kind = neuroirl::mdp_kind_from_string(flags.mdp_kind);
    if (!kind) throw std::invalid_argument("unknown mdp kind: " + flags.mdp_kind);
    config.grid.kind = *kind;
  }
  if (cmd->count("--samples") > 0) config.n_samples = flags.samples;
  if (cmd->count("--sample-len") > 0) config.sample_len = flags.sample_len;
  if (cmd->count("--pop") > 0) config.evolution.pop_size = flags.pop;
  if (cmd->count("--gens") > 0) config.evolution.max_generations = flags.gens;
  if (cmd->count("--goals") > 0) config.num_goals = flags.goals;
  if (cmd->count("--runs") > 0) config.runs = flags.runs;
  if (cmd->count("--seed") > 0) config.base_seed = flags.seed;
  if (cmd->count("--out") > 0) config.output_path = flags.out;
  return config;
}

std::vector<int> parse_values(const std::string& csv) {
  std::vector<int> values;
  std::stringstream stream(csv);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    values.push_back(std::stoi(token));
  }
  if (values.empty()) throw std::invalid_argument("--values is empty");
  return values;
}

void emit(const std::vector<RunRow>& rows, const std::string& out_path) {
  if (out_path.empty()) {
    neuroirl::write_csv(std::cout, rows);
  } else {
    neuroirl::write_csv_file(out_path, rows);
  }
}

void print_summary(const ExperimentResult& result) {
  std::fprintf(stderr, "%s: mean=%.6f std=%.6f ok=%d/%d\n",
               to_string(result.config.algorithm), result.aggregate.mean,
               result.aggregate.stddev, result.aggregate.count,
               static_cast<int>(result.rows.size()));
  for (const RunRow& row : result.rows) {
    if (row.failed) {
      std::fprintf(stderr, "run %d failed: %s\n", row.run, row.error.c_str());
    }
  }
}

int run_command(const CLI::App* cmd, const Flags& flags) {
  ExperimentConfig config = build_config(cmd, flags);
  const bool to_file = !config.output_path.empty();
  const ExperimentResult result = neuroirl::run_experiment(config);
  if (!to_file) emit(result.rows, "");
  print_summary(result);
  return result.aggregate.count == 0 ? 1 : 0;
}

int sweep_command(const CLI::App* cmd, const Flags& flags) {
  ExperimentConfig config = build_config(cmd, flags);
  const auto axis = neuroirl::sweep_axis_from_string(flags.axis);
  if (!axis) throw std::invalid_argument("unknown sweep axis: " + flags.axis);
  const std::vector<int> values = parse_values(flags.values);

  const std::string out_path = config.output_path;
  const auto results = neuroirl::sweep(config, *axis, values);

  std::vector<RunRow> combined;
  int ok = 0;
  for (const ExperimentResult& result : results) {
    combined.insert(combined.end(), result.rows.begin(), result.rows.end());
    ok += result.aggregate.count;
    print_summary(result);
  }
  emit(combined, out_path);
  return ok == 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridworld inverse reinforcement learning experiment runner"};
  app.require_subcommand(1);

  Flags flags;
  CLI::App* run = app.add_subcommand("run", "one experiment, one CSV");
  add_common_flags(run, flags);
  CLI::App* sweep = app.add_subcommand("sweep", "experiments along one axis");
  add_common_flags(sweep, flags);
  sweep->add_option("--axis", flags.axis, "samples | pop | gens | goals")
      ->required();
  sweep->add_option("--values", flags.values, "comma-separated axis values")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return run_command(run, flags);
    return sweep_command(sweep, flags);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
