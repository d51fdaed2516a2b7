#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "neuroirl/rng.hpp"

namespace neuroirl {

enum class NodeKind { Input, Output, Hidden };
enum class ActivationKind { SteepSigmoid, Linear };

struct NodeGene {
  int id = 0;
  NodeKind kind = NodeKind::Input;
  ActivationKind activation = ActivationKind::Linear;
};

struct ConnectionGene {
  int from = 0;
  int to = 0;
  double weight = 0.0;
  bool enabled = true;
  int innovation = 0;
};

// Direct encoding. Node ids: inputs occupy 0..num_inputs-1, the single
// output is num_inputs, hidden nodes get fresh ids from the registry. The
// gene graph (enabled or not) is always acyclic.
struct Genome {
  std::vector<NodeGene> nodes;
  std::vector<ConnectionGene> connections;
  double fitness = 0.0;
  int num_inputs = 0;

  int output_id() const { return num_inputs; }
  bool has_node(int id) const;
  bool has_connection(int from, int to) const;
};

struct EvolutionParams {
  int pop_size = 50;
  int max_generations = 50;
  double add_node_prob = 0.03;
  double add_connection_prob = 0.05;
  double weight_perturb_prob = 0.8;
  double perturb_sigma = 0.5;
  double c1 = 1.0;  // excess coefficient
  double c2 = 1.0;  // disjoint coefficient
  double c3 = 0.4;  // mean weight difference coefficient
  double compatibility_threshold = 3.0;
  int elitism = 1;
  double crossover_fraction = 0.75;
  std::uint64_t seed = 0;
};

struct Population {
  std::vector<Genome> genomes;
};

// Run-global bookkeeping of structural innovations. The same (from, to)
// signature always maps to one innovation number, and splitting the same
// connection always yields the same hidden node id with the same pair of
// connection innovations, no matter which genome performs the mutation.
class InnovationRegistry {
 public:
  explicit InnovationRegistry(int num_inputs);

  int connection_innovation(int from, int to);

  struct SplitRecord {
    int node_id = 0;
    int in_innovation = 0;
    int out_innovation = 0;
  };
  const SplitRecord& split(int connection_innovation, int from, int to);

  int peak_innovation() const { return next_innovation_; }

 private:
  int next_innovation_ = 0;
  int next_node_id_ = 0;
  std::map<std::pair<int, int>, int> connections_;
  std::map<int, SplitRecord> splits_;
};

// N_P perceptron-like genomes: every input wired straight to the output
// with weights ~ Uniform(-1, 1). All genomes share innovation numbers.
Population init_population(int num_inputs, const EvolutionParams& params,
                           InnovationRegistry& registry);

// True when no directed cycle exists among the connection genes, enabled
// or disabled; disabled genes keep their structural meaning for crossover.
bool is_acyclic(const Genome& genome);

// Genome compiled to a dense topological evaluation plan. Activation is
// pure; callers hand in scratch (scratch_size doubles) so tight loops do
// not allocate.
class CompiledNetwork {
 public:
  explicit CompiledNetwork(const Genome& genome);  // throws on a cyclic genome

  int num_inputs() const { return num_inputs_; }
  int scratch_size() const { return static_cast<int>(slot_count_); }

  double activate(std::span<const double> inputs, std::span<double> scratch) const;

 private:
  struct Edge {
    int source_slot;
    double weight;
  };
  struct Step {
    int slot;
    ActivationKind activation;
    int first_edge;
    int edge_count;
  };
  int num_inputs_ = 0;
  int output_slot_ = 0;
  std::size_t slot_count_ = 0;
  std::vector<int> input_slots_;  // slot of input node id i
  std::vector<Edge> edges_;
  std::vector<Step> steps_;  // topological order, non-input nodes only
};

// Convenience wrapper for one-off evaluations.
double activate(const Genome& genome, std::span<const double> inputs);

// Applies, in order: per-connection weight perturbation (each with
// probability weight_perturb_prob), add-node (probability add_node_prob),
// add-connection (probability add_connection_prob). Structural mutations
// consult the registry; an add-connection with no legal site is skipped.
Genome mutate(Genome genome, const EvolutionParams& params,
              InnovationRegistry& registry, Rng& rng);

// Offspring topology is exactly the fitter parent's; matching innovations
// draw their weight from either parent at random. Keeping structure from
// one acyclic parent keeps the child acyclic by construction.
Genome crossover(const Genome& fitter, const Genome& other, Rng& rng);

// delta = c1*E/N + c2*D/N + c3*mean|dw| with N = larger connection count
// (at least 1), no small-genome exception.
double compatibility_distance(const Genome& a, const Genome& b,
                              const EvolutionParams& params);

// Greedy speciation: first member of each species is its representative.
// Returns the species index of every genome.
std::vector<int> speciate(const Population& pop, const EvolutionParams& params);

int count_species(const Population& pop, const EvolutionParams& params);

// One generation: speciate, share fitness, allocate offspring per species
// by largest remainder, copy elites unchanged, breed the rest. Children use
// RNG streams keyed by (seed, generation, child index), so results do not
// depend on evaluation order. Fitnesses must be non-negative.
Population evolve_generation(const Population& pop,
                             const std::vector<double>& fitnesses,
                             const EvolutionParams& params,
                             InnovationRegistry& registry, int generation);

// Evaluates every genome. The parallel form runs the evaluations under
// OpenMP; both fill the same slot-per-genome layout, so outputs are
// bit-identical.
std::vector<double> population_fitness(
    const Population& pop, const std::function<double(const Genome&)>& fitness);
std::vector<double> population_fitness_serial(
    const Population& pop, const std::function<double(const Genome&)>& fitness);

struct EvolutionRun {
  Genome best;
  double best_fitness = 0.0;
  int generations_run = 0;
  bool terminated_early = false;
  std::vector<double> fitness_history;  // best fitness of each generation
};

// Full evolution driver: init, evaluate, evolve, stop early once some
// genome reaches target_fitness. When progress is non-null, one JSON line
// per generation is written: {"generation":g,"best_fitness":f,"species":k}.
EvolutionRun run_evolution(int num_inputs, const EvolutionParams& params,
                           const std::function<double(const Genome&)>& fitness,
                           double target_fitness,
                           std::ostream* progress = nullptr);

}  // namespace neuroirl
