#include "neuroirl/neat_irl.hpp"

#include <stdexcept>

namespace neuroirl {

int coherence(Action generated, Action demonstrated) {
  if (generated == demonstrated) return 1;
  if (opposite(demonstrated) == generated) return -1;
  return 0;
}

Policy values_to_policy(std::span<const double> values, const GridWorld& world) {
  if (values.size() != static_cast<std::size_t>(world.num_states))
    throw std::invalid_argument("value vector length mismatch");
  Policy policy;
  policy.actions.resize(world.num_states, Action::Up);
  for (int s = 0; s < world.num_states; ++s) {
    double best = values[world.intended_successor(s, Action::Up)];
    Action best_a = Action::Up;
    for (int i = 1; i < kNumActions; ++i) {
      const Action a = kActionOrder[i];
      const double score = values[world.intended_successor(s, a)];
      if (score > best) {
        best = score;
        best_a = a;
      }
    }
    policy.actions[s] = best_a;
  }
  return policy;
}

DemoIndex DemoIndex::from(const Demonstration& demo) {
  return {distinct_pairs(demo)};
}

namespace {

std::vector<double> feature_inputs(const GridWorld& world) {
  std::vector<double> inputs(world.features.size());
  for (std::size_t i = 0; i < world.features.size(); ++i) {
    inputs[i] = static_cast<double>(world.features[i]);
  }
  return inputs;
}

std::vector<double> network_values(const CompiledNetwork& net,
                                   const std::vector<double>& inputs,
                                   const GridWorld& world,
                                   std::vector<double>& scratch) {
  std::vector<double> values(world.num_states);
  const int m = world.num_features;
  for (int s = 0; s < world.num_states; ++s) {
    values[s] = net.activate({inputs.data() + static_cast<std::size_t>(s) * m,
                              static_cast<std::size_t>(m)},
                             scratch);
  }
  return values;
}

}  // namespace

double coherence_fitness(const Policy& policy, const DemoIndex& demo) {
  int raw = 0;
  for (const DemoPair& pair : demo.pairs) {
    raw += coherence(policy.actions[pair.state], pair.action);
  }
  return static_cast<double>(raw + demo.size());
}

double genome_fitness(const Genome& genome, const GridWorld& world,
                      const DemoIndex& demo) {
  if (genome.num_inputs != world.num_features)
    throw std::invalid_argument("genome input width must match feature width");
  const CompiledNetwork net(genome);
  std::vector<double> scratch(net.scratch_size());
  const std::vector<double> inputs = feature_inputs(world);
  const std::vector<double> values = network_values(net, inputs, world, scratch);
  return coherence_fitness(values_to_policy(values, world), demo);
}

IrlResult run_neat_irl(const GridWorld& world, const Demonstration& demo,
                       const EvolutionParams& evolution, std::ostream* progress) {
  const DemoIndex index = DemoIndex::from(demo);
  if (index.size() == 0) throw std::invalid_argument("empty demonstration");
  for (const DemoPair& pair : index.pairs) {
    if (pair.state < 0 || pair.state >= world.num_states)
      throw std::invalid_argument("demonstrated state outside the world");
  }

  const std::vector<double> inputs = feature_inputs(world);
  const auto fitness = [&world, &index, &inputs](const Genome& genome) {
    const CompiledNetwork net(genome);
    std::vector<double> scratch(net.scratch_size());
    const std::vector<double> values = network_values(net, inputs, world, scratch);
    return coherence_fitness(values_to_policy(values, world), index);
  };

  const double target = 2.0 * index.size();
  const EvolutionRun run =
      run_evolution(world.num_features, evolution, fitness, target, progress);

  IrlResult result;
  result.best_genome = run.best;
  result.generations_run = run.generations_run;
  result.terminated_early = run.terminated_early;
  result.fitness_history = run.fitness_history;

  const CompiledNetwork net(result.best_genome);
  std::vector<double> scratch(net.scratch_size());
  result.learned_values = network_values(net, inputs, world, scratch);
  result.learned_policy = values_to_policy(result.learned_values, world);
  return result;
}

}  // namespace neuroirl
