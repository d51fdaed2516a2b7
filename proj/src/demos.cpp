#include "neuroirl/demos.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "neuroirl/rng.hpp"

namespace neuroirl {

Demonstration sample_demonstrations(const GridWorld& world, const Policy& expert,
                                    int n_samples, int len, std::uint64_t seed) {
  if (n_samples < 1 || len < 1)
    throw std::invalid_argument("need at least one trace of at least one step");
  if (static_cast<int>(expert.actions.size()) != world.num_states)
    throw std::invalid_argument("expert policy size mismatch");

  Rng rng(seed);
  Demonstration demo;
  demo.traces.resize(n_samples);
  std::set<int> seen;
  for (Trace& trace : demo.traces) {
    int s = rng.uniform_int(world.num_states);
    trace.pairs.reserve(len);
    for (int step = 0; step < len; ++step) {
      const Action a = expert.actions[s];
      trace.pairs.push_back({s, a});
      seen.insert(s);
      s = world.intended_successor(s, a);
    }
  }
  demo.demo_states.assign(seen.begin(), seen.end());
  return demo;
}

std::vector<DemoPair> distinct_pairs(const Demonstration& demo) {
  std::vector<DemoPair> pairs;
  pairs.reserve(demo.demo_states.size());
  for (int s : demo.demo_states) {
    for (const Trace& trace : demo.traces) {
      const auto it = std::find_if(trace.pairs.begin(), trace.pairs.end(),
                                   [s](const DemoPair& p) { return p.state == s; });
      if (it != trace.pairs.end()) {
        pairs.push_back(*it);
        break;
      }
    }
  }
  return pairs;
}

}  // namespace neuroirl
