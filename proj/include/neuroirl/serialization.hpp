#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "neuroirl/demos.hpp"
#include "neuroirl/experiment.hpp"
#include "neuroirl/gridworld.hpp"
#include "neuroirl/neat.hpp"
#include "neuroirl/reward_trace.hpp"

namespace neuroirl {

nlohmann::json spec_to_json(const GridSpec& spec);
GridSpec spec_from_json(const nlohmann::json& j);

// Full world dump (spec plus derived arrays) for golden-file comparisons.
nlohmann::json world_to_json(const GridWorld& world);

// One trace per line: {"pairs": [[state, "action"], ...]}.
void write_demo_jsonl(std::ostream& out, const Demonstration& demo);
Demonstration read_demo_jsonl(std::istream& in);

nlohmann::json genome_to_json(const Genome& genome);
Genome genome_from_json(const nlohmann::json& j);

nlohmann::json trace_to_json(const RewardTrace& trace);
RewardTrace trace_from_json(const nlohmann::json& j);

// Experiment manifests. Fields mirror ExperimentConfig; absent fields keep
// their defaults, so partial documents are valid.
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

}  // namespace neuroirl
