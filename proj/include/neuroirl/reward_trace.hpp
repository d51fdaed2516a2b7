#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "neuroirl/demos.hpp"
#include "neuroirl/gridworld.hpp"
#include "neuroirl/neat_irl.hpp"

namespace neuroirl {

struct SamplerParams {
  int max_K = 8;                  // composite feature count (fixed-size sampler)
  double kappa_lo = 0.05;         // interval for the usage-rate prior on kappa
  double kappa_hi = 0.95;
  double alpha = 1.0;             // accepted for config fidelity; unused here
  double eta = 1.0;               // action-optimality confidence
  int iterations = 8;             // T: recorded reward vectors
  double weight_prior_sigma = 1.0;
  std::uint64_t seed = 0;
};

// Markov chain state. Derived fields Phi and r are kept in sync with
// (Z, U, X, w) after every accepted proposal: r = Phi * w exactly.
struct SamplerState {
  int num_features = 0;    // M
  int num_composites = 0;  // K
  int num_states = 0;
  std::vector<std::uint8_t> Z;  // M x K: atomic i participates in composite j
  std::vector<std::uint8_t> U;  // M x K: negate atomic i inside composite j
  std::vector<std::uint8_t> X;  // M: atomic feature globally in use
  double kappa = 0.5;
  std::vector<double> w;        // K
  std::vector<std::uint8_t> Phi;  // |S| x K
  std::vector<double> r;          // |S|
};

// Phi(s,j) = AND over {i : Z(i,j)=1, X(i)=1} of (atomic(s,i) XOR U(i,j));
// an empty conjunction is 1.
std::vector<std::uint8_t> composite_features(std::span<const std::uint8_t> Z,
                                             std::span<const std::uint8_t> U,
                                             std::span<const std::uint8_t> X,
                                             const GridWorld& world,
                                             int num_composites);

std::vector<double> rewards_from(std::span<const std::uint8_t> Phi,
                                 std::span<const double> w, int num_states);

// Boltzmann action model: sum over every demonstrated pair of
// eta*Q(s,a) - logsumexp_a' eta*Q(s,a'), with Q from value iteration on r.
double demo_log_likelihood(std::span<const double> r, const GridWorld& world,
                           const Demonstration& demo, double eta);

struct RewardTrace {
  std::vector<std::vector<double>> iterations;  // T vectors of length |S|
};

// Metropolis-Hastings over SamplerState. Proposal kinds, uniform at random:
// flip one Z entry, flip one U entry, flip one X entry, redraw one w_k from
// the Normal(0, sigma) prior, redraw kappa uniformly on its interval. The
// reward vector is recorded after every step, accepted or not.
RewardTrace sample_reward_trace(const GridWorld& world, const Demonstration& demo,
                                const SamplerParams& params);

// Elementwise mean over iterations; the sum differs by the constant factor
// T, which no greedy policy can see.
std::vector<double> aggregate_mean(const RewardTrace& trace);

// Evenly spaced subsample down to at most cap iterations (first and last
// kept). Identity when the trace already fits.
RewardTrace subsample_trace(const RewardTrace& trace, int cap);

// Greedy policy for a reward vector under the world's own kind: value
// iteration for standard worlds, the linear Bellman solve for LMDPs.
Policy policy_from_rewards(const GridWorld& world, const std::vector<double>& rewards);

// BNP-style aggregation by evolution: networks map each state's trace
// column (r1(s), ..., rT(s)) to a scalar reward, rewards are solved to a
// policy (value iteration or LMDP, by world kind), and fitness is the same
// shifted coherence sum NEAT-IRL uses, with the same early termination.
IrlResult run_bnp_neat(const GridWorld& world, const Demonstration& demo,
                       const RewardTrace& trace, const EvolutionParams& evolution,
                       std::ostream* progress = nullptr);

}  // namespace neuroirl
