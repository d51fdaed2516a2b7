#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "neuroirl/experiment.hpp"

using namespace neuroirl;

namespace {

ExperimentConfig small_config(Algorithm algorithm, int runs) {
  ExperimentConfig config;
  config.algorithm = algorithm;
  config.grid.n = 4;
  config.grid.determinism = 1.0;
  config.n_samples = 4;
  config.sample_len = 1;
  config.evolution.pop_size = 20;
  config.evolution.max_generations = 8;
  config.sampler.iterations = 10;
  config.runs = runs;
  config.base_seed = 77;
  return config;
}

}  // namespace

TEST_CASE("algorithm and axis names round-trip") {
  for (Algorithm a : {Algorithm::NeatIrl, Algorithm::BnpMean, Algorithm::BnpNeat}) {
    CHECK(algorithm_from_string(to_string(a)) == a);
  }
  CHECK_FALSE(algorithm_from_string("nonsense").has_value());
  for (SweepAxis a : {SweepAxis::Samples, SweepAxis::Pop, SweepAxis::Gens,
                      SweepAxis::Goals}) {
    CHECK(sweep_axis_from_string(to_string(a)) == a);
  }
  CHECK_FALSE(sweep_axis_from_string("").has_value());
}

TEST_CASE("run_experiment fills rows from the config") {
  const ExperimentConfig config = small_config(Algorithm::NeatIrl, 4);
  const ExperimentResult result = run_experiment(config);

  REQUIRE(result.rows.size() == 4);
  for (int i = 0; i < 4; ++i) {
    const RunRow& row = result.rows[i];
    CHECK(row.run == i);
    CHECK(row.seed == config.base_seed + static_cast<std::uint64_t>(i));
    CHECK(row.algorithm == Algorithm::NeatIrl);
    CHECK(row.n == 4);
    CHECK(row.determinism == 1.0);
    CHECK(row.mdp_kind == MdpKind::Standard);
    CHECK(row.n_samples == 4);
    CHECK(row.sample_len == 1);
    CHECK(row.pop == 20);
    CHECK(row.gens == 8);
    CHECK(row.goals == 0);
    CHECK_FALSE(row.failed);
    CHECK(row.misprediction >= 0.0);
    CHECK(row.misprediction <= 1.0);
    CHECK(row.seconds >= 0.0);
    CHECK(row.generations_run >= 1);
  }
}

TEST_CASE("experiments are deterministic in the base seed") {
  for (Algorithm algorithm :
       {Algorithm::NeatIrl, Algorithm::BnpMean, Algorithm::BnpNeat}) {
    CAPTURE(to_string(algorithm));
    const ExperimentConfig config = small_config(algorithm, 3);
    const ExperimentResult a = run_experiment(config);
    const ExperimentResult b = run_experiment(config);
    CHECK(misprediction_column(a) == misprediction_column(b));
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      CHECK(a.rows[i].generations_run == b.rows[i].generations_run);
      CHECK(a.rows[i].terminated_early == b.rows[i].terminated_early);
    }
  }
}

TEST_CASE("aggregate matches a hand computation") {
  const ExperimentConfig config = small_config(Algorithm::NeatIrl, 5);
  const ExperimentResult result = run_experiment(config);
  const std::vector<double> scores = misprediction_column(result);
  REQUIRE(scores.size() == 5);

  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= static_cast<double>(scores.size());
  double var = 0.0;
  for (double s : scores) var += (s - mean) * (s - mean);
  var /= static_cast<double>(scores.size() - 1);

  CHECK(result.aggregate.count == 5);
  CHECK(result.aggregate.mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(result.aggregate.stddev == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
}

TEST_CASE("CSV output has the exact header and one line per run") {
  const ExperimentConfig config = small_config(Algorithm::NeatIrl, 3);
  const ExperimentResult result = run_experiment(config);

  std::ostringstream out;
  write_csv(out, result.rows);
  std::istringstream lines(out.str());
  std::string header;
  REQUIRE(std::getline(lines, header));
  CHECK(header ==
        "run,seed,algorithm,n,d,mdp_kind,n_samples,sample_len,pop,gens,goals,"
        "misprediction,seconds,generations_run,terminated_early");

  int count = 0;
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    ++count;
    CHECK(line.find("neat_irl") != std::string::npos);
    CHECK(line.find(",standard,") != std::string::npos);
    // terminated_early serializes as 0/1 at the end of the line.
    const char last = line.back();
    CHECK((last == '0' || last == '1'));
  }
  CHECK(count == 3);
}

TEST_CASE("sweep applies axis values and clears output paths") {
  ExperimentConfig base = small_config(Algorithm::NeatIrl, 2);
  base.output_path = "should_not_propagate.csv";
  const std::vector<ExperimentResult> results =
      sweep(base, SweepAxis::Pop, {10, 25});
  REQUIRE(results.size() == 2);
  CHECK(results[0].config.evolution.pop_size == 10);
  CHECK(results[1].config.evolution.pop_size == 25);
  for (const ExperimentResult& r : results) {
    CHECK(r.config.output_path.empty());
    CHECK(r.rows.size() == 2);
  }

  const std::vector<ExperimentResult> goal_sweep =
      sweep(small_config(Algorithm::NeatIrl, 2), SweepAxis::Goals, {1, 2});
  CHECK(goal_sweep[0].config.num_goals == 1);
  CHECK(goal_sweep[1].config.num_goals == 2);
  for (const RunRow& row : goal_sweep[1].rows) CHECK(row.goals == 2);
}

TEST_CASE("compare_results runs Welch over misprediction columns") {
  ExperimentConfig a = small_config(Algorithm::NeatIrl, 4);
  ExperimentConfig b = small_config(Algorithm::NeatIrl, 4);
  b.base_seed = 900;
  const ExperimentResult ra = run_experiment(a);
  const ExperimentResult rb = run_experiment(b);
  const TTestResult t = compare_results(ra, rb);
  CHECK(t.p_value >= 0.0);
  CHECK(t.p_value <= 1.0);
  CHECK(t.degrees_of_freedom > 0.0);
}

TEST_CASE("goal placement honours num_goals") {
  ExperimentConfig config = small_config(Algorithm::NeatIrl, 2);
  config.num_goals = 3;
  config.goal_reward = 42.0;
  const ExperimentResult result = run_experiment(config);
  for (const RunRow& row : result.rows) {
    CHECK(row.goals == 3);
    CHECK_FALSE(row.failed);
  }
}

TEST_CASE("invalid configs are rejected before any run starts") {
  ExperimentConfig bad = small_config(Algorithm::NeatIrl, 2);
  bad.grid.n = 1;
  CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);

  ExperimentConfig too_many = small_config(Algorithm::NeatIrl, 2);
  too_many.num_goals = 100;  // more goals than states on a 4x4 grid
  CHECK_THROWS_AS(run_experiment(too_many), std::invalid_argument);

  ExperimentConfig no_runs = small_config(Algorithm::NeatIrl, 0);
  CHECK_THROWS_AS(run_experiment(no_runs), std::invalid_argument);
}
