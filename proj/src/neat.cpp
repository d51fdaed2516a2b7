#include "neuroirl/neat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "neuroirl/parallel.hpp"

namespace neuroirl {

bool Genome::has_node(int id) const {
  return std::any_of(nodes.begin(), nodes.end(),
                     [id](const NodeGene& n) { return n.id == id; });
}

bool Genome::has_connection(int from, int to) const {
  return std::any_of(connections.begin(), connections.end(),
                     [from, to](const ConnectionGene& c) {
                       return c.from == from && c.to == to;
                     });
}

InnovationRegistry::InnovationRegistry(int num_inputs)
    : next_node_id_(num_inputs + 1) {}

int InnovationRegistry::connection_innovation(int from, int to) {
  const auto [it, inserted] = connections_.try_emplace({from, to}, next_innovation_);
  if (inserted) ++next_innovation_;
  return it->second;
}

const InnovationRegistry::SplitRecord& InnovationRegistry::split(
    int connection_innovation_number, int from, int to) {
  const auto it = splits_.find(connection_innovation_number);
  if (it != splits_.end()) return it->second;
  SplitRecord record;
  record.node_id = next_node_id_++;
  record.in_innovation = connection_innovation(from, record.node_id);
  record.out_innovation = connection_innovation(record.node_id, to);
  return splits_.emplace(connection_innovation_number, record).first->second;
}

Population init_population(int num_inputs, const EvolutionParams& params,
                           InnovationRegistry& registry) {
  if (num_inputs < 1) throw std::invalid_argument("need at least one input");
  if (params.pop_size < 1) throw std::invalid_argument("population must be nonempty");

  Population pop;
  pop.genomes.resize(params.pop_size);
  for (int g = 0; g < params.pop_size; ++g) {
    Rng rng(mix_seed(params.seed, stream::kPopulationInit, g));
    Genome& genome = pop.genomes[g];
    genome.num_inputs = num_inputs;
    genome.nodes.reserve(num_inputs + 1);
    for (int i = 0; i < num_inputs; ++i) {
      genome.nodes.push_back({i, NodeKind::Input, ActivationKind::Linear});
    }
    genome.nodes.push_back({num_inputs, NodeKind::Output, ActivationKind::Linear});
    genome.connections.reserve(num_inputs);
    for (int i = 0; i < num_inputs; ++i) {
      genome.connections.push_back({i, num_inputs, rng.uniform(-1.0, 1.0), true,
                                    registry.connection_innovation(i, num_inputs)});
    }
  }
  return pop;
}

namespace {

std::unordered_map<int, int> node_slots(const Genome& genome) {
  std::unordered_map<int, int> slot;
  slot.reserve(genome.nodes.size());
  for (std::size_t i = 0; i < genome.nodes.size(); ++i) {
    if (!slot.emplace(genome.nodes[i].id, static_cast<int>(i)).second)
      throw std::invalid_argument("duplicate node id in genome");
  }
  return slot;
}

// Kahn's algorithm over the requested gene subset. Returns node slots in a
// deterministic topological order, or an empty vector if a cycle exists.
std::vector<int> topological_slots(const Genome& genome,
                                   const std::unordered_map<int, int>& slot,
                                   bool enabled_only) {
  const int n = static_cast<int>(genome.nodes.size());
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> out(n);
  for (const ConnectionGene& c : genome.connections) {
    if (enabled_only && !c.enabled) continue;
    const auto from = slot.find(c.from);
    const auto to = slot.find(c.to);
    if (from == slot.end() || to == slot.end())
      throw std::invalid_argument("connection references a missing node");
    out[from->second].push_back(to->second);
    ++indegree[to->second];
  }
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    const int i = ready.top();
    ready.pop();
    order.push_back(i);
    for (int j : out[i]) {
      if (--indegree[j] == 0) ready.push(j);
    }
  }
  if (static_cast<int>(order.size()) != n) order.clear();
  return order;
}

}  // namespace

bool is_acyclic(const Genome& genome) {
  const auto slot = node_slots(genome);
  return !topological_slots(genome, slot, /*enabled_only=*/false).empty() ||
         genome.nodes.empty();
}

CompiledNetwork::CompiledNetwork(const Genome& genome) {
  const auto slot = node_slots(genome);
  const auto order = topological_slots(genome, slot, /*enabled_only=*/false);
  if (order.empty() && !genome.nodes.empty())
    throw std::invalid_argument("cannot compile a cyclic genome");

  num_inputs_ = genome.num_inputs;
  slot_count_ = genome.nodes.size();

  std::vector<std::vector<Edge>> incoming(slot_count_);
  for (const ConnectionGene& c : genome.connections) {
    if (!c.enabled) continue;
    incoming[slot.at(c.to)].push_back({slot.at(c.from), c.weight});
  }

  bool output_seen = false;
  for (int i : order) {
    const NodeGene& node = genome.nodes[i];
    if (node.kind == NodeKind::Output) {
      output_slot_ = i;
      output_seen = true;
    }
    if (node.kind == NodeKind::Input) continue;
    Step step;
    step.slot = i;
    step.activation = node.activation;
    step.first_edge = static_cast<int>(edges_.size());
    step.edge_count = static_cast<int>(incoming[i].size());
    edges_.insert(edges_.end(), incoming[i].begin(), incoming[i].end());
    steps_.push_back(step);
  }
  if (!output_seen) throw std::invalid_argument("genome lacks an output node");

  input_slots_.resize(num_inputs_, -1);
  for (std::size_t i = 0; i < genome.nodes.size(); ++i) {
    const NodeGene& node = genome.nodes[i];
    if (node.kind == NodeKind::Input) {
      if (node.id < 0 || node.id >= num_inputs_)
        throw std::invalid_argument("input node id outside input range");
      input_slots_[node.id] = static_cast<int>(i);
    }
  }
  for (int s : input_slots_) {
    if (s < 0) throw std::invalid_argument("missing input node");
  }
}

double CompiledNetwork::activate(std::span<const double> inputs,
                                 std::span<double> scratch) const {
  if (inputs.size() != static_cast<std::size_t>(num_inputs_))
    throw std::invalid_argument("input width mismatch");
  if (scratch.size() < slot_count_) throw std::invalid_argument("scratch too small");

  for (int i = 0; i < num_inputs_; ++i) scratch[input_slots_[i]] = inputs[i];
  for (const Step& step : steps_) {
    double total = 0.0;
    for (int e = step.first_edge; e < step.first_edge + step.edge_count; ++e) {
      total += edges_[e].weight * scratch[edges_[e].source_slot];
    }
    scratch[step.slot] = step.activation == ActivationKind::SteepSigmoid
                             ? 1.0 / (1.0 + std::exp(-4.9 * total))
                             : total;
  }
  return scratch[output_slot_];
}

double activate(const Genome& genome, std::span<const double> inputs) {
  const CompiledNetwork net(genome);
  std::vector<double> scratch(net.scratch_size());
  return net.activate(inputs, scratch);
}

namespace {

// Full transitive reachability over all genes as slot-indexed bitsets:
// word-packed rows, row i holding every slot reachable from i. One pass in
// reverse topological order; the gene graph is acyclic by invariant.
std::vector<std::uint64_t> reachability(const Genome& genome,
                                        const std::unordered_map<int, int>& slot) {
  const int n = static_cast<int>(genome.nodes.size());
  const int words = (n + 63) / 64;
  std::vector<std::vector<int>> out(n);
  std::vector<int> indegree(n, 0);
  for (const ConnectionGene& c : genome.connections) {
    out[slot.at(c.from)].push_back(slot.at(c.to));
    ++indegree[slot.at(c.to)];
  }

  std::vector<int> topo;
  topo.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (indegree[i] == 0) topo.push_back(i);
  }
  for (std::size_t head = 0; head < topo.size(); ++head) {
    for (int j : out[topo[head]]) {
      if (--indegree[j] == 0) topo.push_back(j);
    }
  }

  std::vector<std::uint64_t> reach(static_cast<std::size_t>(n) * words, 0);
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const int i = *it;
    std::uint64_t* row = reach.data() + static_cast<std::size_t>(i) * words;
    for (int j : out[i]) {
      row[j / 64] |= std::uint64_t{1} << (j % 64);
      const std::uint64_t* child = reach.data() + static_cast<std::size_t>(j) * words;
      for (int w = 0; w < words; ++w) row[w] |= child[w];
    }
  }
  return reach;
}

}  // namespace

Genome mutate(Genome genome, const EvolutionParams& params,
              InnovationRegistry& registry, Rng& rng) {
  for (ConnectionGene& c : genome.connections) {
    if (rng.flip(params.weight_perturb_prob)) {
      c.weight += rng.normal(0.0, params.perturb_sigma);
    }
  }

  if (rng.flip(params.add_node_prob)) {
    int enabled_count = 0;
    for (const ConnectionGene& c : genome.connections) {
      if (c.enabled) ++enabled_count;
    }
    if (enabled_count > 0) {
      int pick = rng.uniform_int(enabled_count);
      int chosen = -1;
      for (std::size_t i = 0; i < genome.connections.size(); ++i) {
        if (genome.connections[i].enabled && pick-- == 0) {
          chosen = static_cast<int>(i);
          break;
        }
      }
      ConnectionGene& conn = genome.connections[chosen];
      const auto& record = registry.split(conn.innovation, conn.from, conn.to);
      if (!genome.has_node(record.node_id)) {
        conn.enabled = false;
        const int from = conn.from, to = conn.to;
        const double old_weight = conn.weight;
        genome.nodes.push_back(
            {record.node_id, NodeKind::Hidden, ActivationKind::SteepSigmoid});
        genome.connections.push_back(
            {from, record.node_id, 1.0, true, record.in_innovation});
        genome.connections.push_back(
            {record.node_id, to, old_weight, true, record.out_innovation});
      }
    }
  }

  if (rng.flip(params.add_connection_prob)) {
    const auto slot = node_slots(genome);
    const std::vector<std::uint64_t> reach = reachability(genome, slot);
    const int words = (static_cast<int>(genome.nodes.size()) + 63) / 64;
    std::set<std::pair<int, int>> existing;
    for (const ConnectionGene& c : genome.connections) {
      existing.insert({c.from, c.to});
    }
    // u -> v is legal when the edge is new and u is not reachable from v.
    std::vector<std::pair<int, int>> candidates;
    for (const NodeGene& u : genome.nodes) {
      if (u.kind == NodeKind::Output) continue;
      const int us = slot.at(u.id);
      for (const NodeGene& v : genome.nodes) {
        if (v.kind == NodeKind::Input) continue;
        if (u.id == v.id || existing.count({u.id, v.id}) != 0) continue;
        const std::uint64_t* from_v =
            reach.data() + static_cast<std::size_t>(slot.at(v.id)) * words;
        if ((from_v[us / 64] >> (us % 64)) & 1) continue;
        candidates.emplace_back(u.id, v.id);
      }
    }
    if (!candidates.empty()) {
      const auto [from, to] = candidates[rng.uniform_int(
          static_cast<int>(candidates.size()))];
      genome.connections.push_back({from, to, rng.uniform(-1.0, 1.0), true,
                                    registry.connection_innovation(from, to)});
    }
  }
  return genome;
}

Genome crossover(const Genome& fitter, const Genome& other, Rng& rng) {
  std::unordered_map<int, double> other_weights;
  other_weights.reserve(other.connections.size());
  for (const ConnectionGene& c : other.connections) {
    other_weights.emplace(c.innovation, c.weight);
  }

  Genome child = fitter;
  child.fitness = 0.0;
  for (ConnectionGene& c : child.connections) {
    const auto match = other_weights.find(c.innovation);
    if (match != other_weights.end() && rng.flip(0.5)) {
      c.weight = match->second;
    }
  }
  return child;
}

double compatibility_distance(const Genome& a, const Genome& b,
                              const EvolutionParams& params) {
  std::unordered_map<int, double> wb;
  wb.reserve(b.connections.size());
  int max_b = -1;
  for (const ConnectionGene& c : b.connections) {
    wb.emplace(c.innovation, c.weight);
    max_b = std::max(max_b, c.innovation);
  }
  int max_a = -1;
  for (const ConnectionGene& c : a.connections) max_a = std::max(max_a, c.innovation);

  int excess = 0, disjoint = 0, matching = 0;
  double weight_diff = 0.0;
  for (const ConnectionGene& c : a.connections) {
    const auto match = wb.find(c.innovation);
    if (match != wb.end()) {
      ++matching;
      weight_diff += std::abs(c.weight - match->second);
    } else if (c.innovation > max_b) {
      ++excess;
    } else {
      ++disjoint;
    }
  }
  std::unordered_map<int, double> wa;
  wa.reserve(a.connections.size());
  for (const ConnectionGene& c : a.connections) wa.emplace(c.innovation, c.weight);
  for (const ConnectionGene& c : b.connections) {
    if (wa.count(c.innovation)) continue;
    if (c.innovation > max_a) {
      ++excess;
    } else {
      ++disjoint;
    }
  }

  const double n = std::max<std::size_t>(
      {a.connections.size(), b.connections.size(), std::size_t{1}});
  const double mean_diff = matching > 0 ? weight_diff / matching : 0.0;
  return params.c1 * excess / n + params.c2 * disjoint / n + params.c3 * mean_diff;
}

std::vector<int> speciate(const Population& pop, const EvolutionParams& params) {
  std::vector<int> species_of(pop.genomes.size(), -1);
  std::vector<int> representatives;
  for (std::size_t g = 0; g < pop.genomes.size(); ++g) {
    for (std::size_t s = 0; s < representatives.size(); ++s) {
      if (compatibility_distance(pop.genomes[g], pop.genomes[representatives[s]],
                                 params) < params.compatibility_threshold) {
        species_of[g] = static_cast<int>(s);
        break;
      }
    }
    if (species_of[g] < 0) {
      species_of[g] = static_cast<int>(representatives.size());
      representatives.push_back(static_cast<int>(g));
    }
  }
  return species_of;
}

int count_species(const Population& pop, const EvolutionParams& params) {
  const std::vector<int> species_of = speciate(pop, params);
  int count = 0;
  for (int s : species_of) count = std::max(count, s + 1);
  return count;
}

namespace {

// Largest-remainder apportionment of `slots` among nonnegative weights.
std::vector<int> apportion(const std::vector<double>& weights, int slots) {
  const int k = static_cast<int>(weights.size());
  std::vector<int> alloc(k, 0);
  double total = 0.0;
  for (double w : weights) total += w;

  std::vector<double> quota(k);
  for (int j = 0; j < k; ++j) {
    quota[j] = total > 0.0 ? slots * weights[j] / total
                           : static_cast<double>(slots) / k;
  }
  int assigned = 0;
  for (int j = 0; j < k; ++j) {
    alloc[j] = static_cast<int>(quota[j]);
    assigned += alloc[j];
  }
  std::vector<int> by_remainder(k);
  for (int j = 0; j < k; ++j) by_remainder[j] = j;
  std::stable_sort(by_remainder.begin(), by_remainder.end(),
                   [&quota, &alloc](int x, int y) {
                     return quota[x] - alloc[x] > quota[y] - alloc[y];
                   });
  for (int i = 0; assigned < slots; ++i) {
    ++alloc[by_remainder[i % k]];
    ++assigned;
  }
  return alloc;
}

int roulette_pick(const std::vector<int>& members,
                  const std::vector<double>& fitnesses, Rng& rng) {
  double total = 0.0;
  for (int m : members) total += fitnesses[m];
  if (total <= 0.0) {
    return members[rng.uniform_int(static_cast<int>(members.size()))];
  }
  double x = rng.uniform() * total;
  for (int m : members) {
    x -= fitnesses[m];
    if (x <= 0.0) return m;
  }
  return members.back();
}

}  // namespace

Population evolve_generation(const Population& pop,
                             const std::vector<double>& fitnesses,
                             const EvolutionParams& params,
                             InnovationRegistry& registry, int generation) {
  const int n = static_cast<int>(pop.genomes.size());
  if (static_cast<int>(fitnesses.size()) != n)
    throw std::invalid_argument("fitness vector size mismatch");
  for (double f : fitnesses) {
    if (f < 0.0 || !std::isfinite(f))
      throw std::invalid_argument("fitnesses must be finite and non-negative");
  }

  const std::vector<int> species_of = speciate(pop, params);
  const int num_species = 1 + *std::max_element(species_of.begin(), species_of.end());
  std::vector<std::vector<int>> members(num_species);
  for (int g = 0; g < n; ++g) members[species_of[g]].push_back(g);

  // Fitness sharing: each member counts f/|species|, so a species' weight is
  // its mean fitness and large species claim no extra offspring.
  std::vector<double> species_weight(num_species, 0.0);
  for (int j = 0; j < num_species; ++j) {
    for (int m : members[j]) species_weight[j] += fitnesses[m];
    species_weight[j] /= static_cast<double>(members[j].size());
  }

  const int elite_count = std::min(params.elitism, n);
  std::vector<int> by_fitness(n);
  for (int g = 0; g < n; ++g) by_fitness[g] = g;
  std::stable_sort(by_fitness.begin(), by_fitness.end(),
                   [&fitnesses](int x, int y) { return fitnesses[x] > fitnesses[y]; });

  Population next;
  next.genomes.reserve(n);
  for (int e = 0; e < elite_count; ++e) {
    next.genomes.push_back(pop.genomes[by_fitness[e]]);
  }

  const int slots = n - elite_count;
  const std::vector<int> alloc = apportion(species_weight, slots);

  int child_index = 0;
  for (int j = 0; j < num_species; ++j) {
    for (int c = 0; c < alloc[j]; ++c, ++child_index) {
      Rng rng(mix_seed(params.seed, stream::kReproduction,
                       static_cast<std::uint64_t>(generation) + 1, child_index));
      const int parent_a = roulette_pick(members[j], fitnesses, rng);
      Genome child;
      if (members[j].size() >= 2 && rng.flip(params.crossover_fraction)) {
        const int parent_b = roulette_pick(members[j], fitnesses, rng);
        const bool a_fitter =
            fitnesses[parent_a] > fitnesses[parent_b] ||
            (fitnesses[parent_a] == fitnesses[parent_b] && parent_a <= parent_b);
        child = a_fitter ? crossover(pop.genomes[parent_a], pop.genomes[parent_b], rng)
                         : crossover(pop.genomes[parent_b], pop.genomes[parent_a], rng);
      } else {
        child = pop.genomes[parent_a];
        child.fitness = 0.0;
      }
      next.genomes.push_back(mutate(std::move(child), params, registry, rng));
    }
  }
  return next;
}

std::vector<double> population_fitness(
    const Population& pop, const std::function<double(const Genome&)>& fitness) {
  const int n = static_cast<int>(pop.genomes.size());
  std::vector<double> out(n);
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (int g = 0; g < n; ++g) {
    out[g] = fitness(pop.genomes[g]);
  }
  return out;
}

std::vector<double> population_fitness_serial(
    const Population& pop, const std::function<double(const Genome&)>& fitness) {
  std::vector<double> out(pop.genomes.size());
  for (std::size_t g = 0; g < pop.genomes.size(); ++g) {
    out[g] = fitness(pop.genomes[g]);
  }
  return out;
}

EvolutionRun run_evolution(int num_inputs, const EvolutionParams& params,
                           const std::function<double(const Genome&)>& fitness,
                           double target_fitness, std::ostream* progress) {
  if (params.max_generations < 1)
    throw std::invalid_argument("need at least one generation");

  InnovationRegistry registry(num_inputs);
  Population pop = init_population(num_inputs, params, registry);

  EvolutionRun run;
  run.best_fitness = -std::numeric_limits<double>::infinity();
  for (int g = 0; g < params.max_generations; ++g) {
    const std::vector<double> fitnesses = population_fitness(pop, fitness);
    int gen_best = 0;
    for (int i = 1; i < static_cast<int>(fitnesses.size()); ++i) {
      if (fitnesses[i] > fitnesses[gen_best]) gen_best = i;
    }
    if (fitnesses[gen_best] > run.best_fitness) {
      run.best = pop.genomes[gen_best];
      run.best.fitness = fitnesses[gen_best];
      run.best_fitness = fitnesses[gen_best];
    }
    run.fitness_history.push_back(fitnesses[gen_best]);
    run.generations_run = g + 1;

    if (progress != nullptr) {
      char line[128];
      std::snprintf(line, sizeof(line),
                    "{\"generation\":%d,\"best_fitness\":%.17g,\"species\":%d}\n", g,
                    fitnesses[gen_best], count_species(pop, params));
      *progress << line;
    }

    if (fitnesses[gen_best] >= target_fitness) {
      run.terminated_early = true;
      break;
    }
    if (g + 1 < params.max_generations) {
      pop = evolve_generation(pop, fitnesses, params, registry, g);
    }
  }
  return run;
}

}  // namespace neuroirl
