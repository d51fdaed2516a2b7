#pragma once

#include <array>
#include <span>
#include <vector>

#include "neuroirl/gridworld.hpp"
#include "neuroirl/solvers.hpp"

namespace neuroirl {

struct MispredictionScore {
  double value = 0.0;  // in [0, 1]
};

// Fraction of states, uniformly weighted, where the two policies disagree.
MispredictionScore misprediction(const Policy& learned, const Policy& expert);

// Expected misprediction of a stochastic policy: 1 - mean_s pi(expert(s)|s).
// Accumulates in extended precision; the uniform policy scores exactly 0.8.
MispredictionScore misprediction_stochastic(
    const std::vector<std::array<double, kNumActions>>& action_dist,
    const Policy& expert);

struct TTestResult {
  double t_statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;
};

// Welch's unequal-variance t-test, two tailed. p comes from the Student-t
// CDF evaluated through the regularized incomplete beta function.
TTestResult two_tailed_t_test(std::span<const double> sample_a,
                              std::span<const double> sample_b);

// I_x(a, b), exposed for testing against tabulated values.
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace neuroirl
