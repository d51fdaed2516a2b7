#include "neuroirl/serialization.hpp"

#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

namespace neuroirl {

using nlohmann::json;

json spec_to_json(const GridSpec& spec) {
  json goals = json::array();
  for (const GoalReward& g : spec.goals) {
    goals.push_back({{"state", g.state}, {"reward", g.reward}});
  }
  return {
      {"n", spec.n},
      {"b", spec.b},
      {"determinism", spec.determinism},
      {"kind", to_string(spec.kind)},
      {"gamma", spec.gamma},
      {"reward_mode",
       spec.reward_mode == RewardMode::ExplicitGoals ? "explicit_goals"
                                                     : "random_macroblock"},
      {"goals", goals},
      {"seed", spec.seed},
      {"cost_scale", spec.cost_scale},
  };
}

GridSpec spec_from_json(const json& j) {
  GridSpec spec;
  if (j.contains("n")) spec.n = j.at("n").get<int>();
  if (j.contains("b")) spec.b = j.at("b").get<int>();
  if (j.contains("determinism")) spec.determinism = j.at("determinism").get<double>();
  if (j.contains("kind")) {
    const auto kind = mdp_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw std::invalid_argument("unknown mdp kind");
    spec.kind = *kind;
  }
  if (j.contains("gamma")) spec.gamma = j.at("gamma").get<double>();
  if (j.contains("reward_mode")) {
    const std::string mode = j.at("reward_mode").get<std::string>();
    if (mode == "explicit_goals") {
      spec.reward_mode = RewardMode::ExplicitGoals;
    } else if (mode == "random_macroblock") {
      spec.reward_mode = RewardMode::RandomPerMacroblock;
    } else {
      throw std::invalid_argument("unknown reward mode");
    }
  }
  if (j.contains("goals")) {
    for (const json& g : j.at("goals")) {
      spec.goals.push_back(
          {g.at("state").get<int>(), g.at("reward").get<double>()});
    }
  }
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("cost_scale")) spec.cost_scale = j.at("cost_scale").get<double>();
  return spec;
}

json world_to_json(const GridWorld& world) {
  json transitions = json::array();
  for (const auto& row : world.transitions) {
    json r = json::array();
    for (const Transition& t : row) r.push_back({{"next", t.next}, {"prob", t.prob}});
    transitions.push_back(r);
  }
  json out = {
      {"spec", spec_to_json(world.spec)},
      {"num_states", world.num_states},
      {"num_features", world.num_features},
      {"rewards", world.rewards},
      {"features", world.features},
      {"transitions", transitions},
  };
  if (!world.state_costs.empty()) {
    out["state_costs"] = world.state_costs;
    json passive = json::array();
    for (const auto& row : world.passive_dynamics) {
      json r = json::array();
      for (const Transition& t : row) r.push_back({{"next", t.next}, {"prob", t.prob}});
      passive.push_back(r);
    }
    out["passive_dynamics"] = passive;
  }
  return out;
}

void write_demo_jsonl(std::ostream& out, const Demonstration& demo) {
  for (const Trace& trace : demo.traces) {
    json pairs = json::array();
    for (const DemoPair& p : trace.pairs) {
      pairs.push_back({p.state, to_string(p.action)});
    }
    out << json{{"pairs", pairs}}.dump() << '\n';
  }
}

Demonstration read_demo_jsonl(std::istream& in) {
  Demonstration demo;
  std::set<int> seen;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    Trace trace;
    for (const json& p : j.at("pairs")) {
      const auto action = action_from_string(p.at(1).get<std::string>());
      if (!action) throw std::invalid_argument("unknown action in demo line");
      trace.pairs.push_back({p.at(0).get<int>(), *action});
      seen.insert(p.at(0).get<int>());
    }
    demo.traces.push_back(std::move(trace));
  }
  demo.demo_states.assign(seen.begin(), seen.end());
  return demo;
}

namespace {

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Input: return "input";
    case NodeKind::Output: return "output";
    case NodeKind::Hidden: return "hidden";
  }
  return "?";
}

NodeKind node_kind_from_string(const std::string& s) {
  if (s == "input") return NodeKind::Input;
  if (s == "output") return NodeKind::Output;
  if (s == "hidden") return NodeKind::Hidden;
  throw std::invalid_argument("unknown node kind");
}

const char* to_string(ActivationKind a) {
  return a == ActivationKind::SteepSigmoid ? "steep_sigmoid" : "linear";
}

ActivationKind activation_from_string(const std::string& s) {
  if (s == "steep_sigmoid") return ActivationKind::SteepSigmoid;
  if (s == "linear") return ActivationKind::Linear;
  throw std::invalid_argument("unknown activation");
}

}  // namespace

json genome_to_json(const Genome& genome) {
  json nodes = json::array();
  for (const NodeGene& n : genome.nodes) {
    nodes.push_back({{"id", n.id},
                     {"kind", to_string(n.kind)},
                     {"activation", to_string(n.activation)}});
  }
  json connections = json::array();
  for (const ConnectionGene& c : genome.connections) {
    connections.push_back({{"from", c.from},
                           {"to", c.to},
                           {"weight", c.weight},
                           {"enabled", c.enabled},
                           {"innovation", c.innovation}});
  }
  return {{"num_inputs", genome.num_inputs},
          {"fitness", genome.fitness},
          {"nodes", nodes},
          {"connections", connections}};
}

Genome genome_from_json(const json& j) {
  Genome genome;
  genome.num_inputs = j.at("num_inputs").get<int>();
  genome.fitness = j.at("fitness").get<double>();
  for (const json& n : j.at("nodes")) {
    genome.nodes.push_back(
        {n.at("id").get<int>(), node_kind_from_string(n.at("kind").get<std::string>()),
         activation_from_string(n.at("activation").get<std::string>())});
  }
  for (const json& c : j.at("connections")) {
    genome.connections.push_back({c.at("from").get<int>(), c.at("to").get<int>(),
                                  c.at("weight").get<double>(),
                                  c.at("enabled").get<bool>(),
                                  c.at("innovation").get<int>()});
  }
  return genome;
}

json trace_to_json(const RewardTrace& trace) {
  return {{"iterations", trace.iterations}};
}

RewardTrace trace_from_json(const json& j) {
  RewardTrace trace;
  trace.iterations = j.at("iterations").get<std::vector<std::vector<double>>>();
  return trace;
}

namespace {

json evolution_to_json(const EvolutionParams& e) {
  return {{"pop_size", e.pop_size},
          {"max_generations", e.max_generations},
          {"add_node_prob", e.add_node_prob},
          {"add_connection_prob", e.add_connection_prob},
          {"weight_perturb_prob", e.weight_perturb_prob},
          {"perturb_sigma", e.perturb_sigma},
          {"c1", e.c1},
          {"c2", e.c2},
          {"c3", e.c3},
          {"compatibility_threshold", e.compatibility_threshold},
          {"elitism", e.elitism},
          {"crossover_fraction", e.crossover_fraction},
          {"seed", e.seed}};
}

EvolutionParams evolution_from_json(const json& j) {
  EvolutionParams e;
  if (j.contains("pop_size")) e.pop_size = j.at("pop_size").get<int>();
  if (j.contains("max_generations"))
    e.max_generations = j.at("max_generations").get<int>();
  if (j.contains("add_node_prob")) e.add_node_prob = j.at("add_node_prob").get<double>();
  if (j.contains("add_connection_prob"))
    e.add_connection_prob = j.at("add_connection_prob").get<double>();
  if (j.contains("weight_perturb_prob"))
    e.weight_perturb_prob = j.at("weight_perturb_prob").get<double>();
  if (j.contains("perturb_sigma")) e.perturb_sigma = j.at("perturb_sigma").get<double>();
  if (j.contains("c1")) e.c1 = j.at("c1").get<double>();
  if (j.contains("c2")) e.c2 = j.at("c2").get<double>();
  if (j.contains("c3")) e.c3 = j.at("c3").get<double>();
  if (j.contains("compatibility_threshold"))
    e.compatibility_threshold = j.at("compatibility_threshold").get<double>();
  if (j.contains("elitism")) e.elitism = j.at("elitism").get<int>();
  if (j.contains("crossover_fraction"))
    e.crossover_fraction = j.at("crossover_fraction").get<double>();
  if (j.contains("seed")) e.seed = j.at("seed").get<std::uint64_t>();
  return e;
}

json sampler_to_json(const SamplerParams& s) {
  return {{"max_K", s.max_K},
          {"kappa_lo", s.kappa_lo},
          {"kappa_hi", s.kappa_hi},
          {"alpha", s.alpha},
          {"eta", s.eta},
          {"iterations", s.iterations},
          {"weight_prior_sigma", s.weight_prior_sigma},
          {"seed", s.seed}};
}

SamplerParams sampler_from_json(const json& j) {
  SamplerParams s;
  if (j.contains("max_K")) s.max_K = j.at("max_K").get<int>();
  if (j.contains("kappa_lo")) s.kappa_lo = j.at("kappa_lo").get<double>();
  if (j.contains("kappa_hi")) s.kappa_hi = j.at("kappa_hi").get<double>();
  if (j.contains("alpha")) s.alpha = j.at("alpha").get<double>();
  if (j.contains("eta")) s.eta = j.at("eta").get<double>();
  if (j.contains("iterations")) s.iterations = j.at("iterations").get<int>();
  if (j.contains("weight_prior_sigma"))
    s.weight_prior_sigma = j.at("weight_prior_sigma").get<double>();
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

}  // namespace

json config_to_json(const ExperimentConfig& config) {
  return {{"algorithm", to_string(config.algorithm)},
          {"grid", spec_to_json(config.grid)},
          {"num_goals", config.num_goals},
          {"goal_reward", config.goal_reward},
          {"n_samples", config.n_samples},
          {"sample_len", config.sample_len},
          {"evolution", evolution_to_json(config.evolution)},
          {"sampler", sampler_to_json(config.sampler)},
          {"trace_input_cap", config.trace_input_cap},
          {"runs", config.runs},
          {"base_seed", config.base_seed},
          {"output_path", config.output_path}};
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig config;
  if (j.contains("algorithm")) {
    const auto algorithm =
        algorithm_from_string(j.at("algorithm").get<std::string>());
    if (!algorithm) throw std::invalid_argument("unknown algorithm");
    config.algorithm = *algorithm;
  }
  if (j.contains("grid")) config.grid = spec_from_json(j.at("grid"));
  if (j.contains("num_goals")) config.num_goals = j.at("num_goals").get<int>();
  if (j.contains("goal_reward")) config.goal_reward = j.at("goal_reward").get<double>();
  if (j.contains("n_samples")) config.n_samples = j.at("n_samples").get<int>();
  if (j.contains("sample_len")) config.sample_len = j.at("sample_len").get<int>();
  if (j.contains("evolution"))
    config.evolution = evolution_from_json(j.at("evolution"));
  if (j.contains("sampler")) config.sampler = sampler_from_json(j.at("sampler"));
  if (j.contains("trace_input_cap"))
    config.trace_input_cap = j.at("trace_input_cap").get<int>();
  if (j.contains("runs")) config.runs = j.at("runs").get<int>();
  if (j.contains("base_seed")) config.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("output_path"))
    config.output_path = j.at("output_path").get<std::string>();
  return config;
}

}  // namespace neuroirl

