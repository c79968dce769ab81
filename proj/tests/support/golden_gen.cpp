// Regenerates the committed fixtures that are derived from code: the
// reference car network (from car.cpp) and the random-network run golden
// (expected output computed by the brute-force oracle, never by the engine).
//
//   golden_gen <fixtures-dir>
//
// Run manually when a fixture definition changes; outputs are committed.

#include <cstdio>
#include <filesystem>

#include "nsk/car.hpp"
#include "nsk/netio.hpp"
#include "nsk/rng.hpp"
#include "support/netgen.hpp"
#include "support/oracle.hpp"

using namespace nsk;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: golden_gen <fixtures-dir>\n");
    return 2;
  }
  const std::filesystem::path dir = argv[1];

  save_network(reference_network(), dir / "car_reference.json",
               {{"name", "car-reference"},
                {"description", "hand-designed car-following controller"}});

  // random-network fixture; seed chosen so the output neurons actually fire
  const std::uint64_t seed = 20240614;
  Rng rng(seed);
  const Network net = testsupport::random_network(rng, 10, 20, false);
  const Timestep horizon = 50;

  SpikeTrace inputs;
  for (int i = 0; i < 20; ++i) {
    const auto pick = rng.uniform_int(0, static_cast<std::int64_t>(net.inputs.size()) - 1);
    inputs.push_back({rng.uniform_int(0, horizon - 1),
                      net.inputs[static_cast<std::size_t>(pick)],
                      0.25 * static_cast<double>(rng.uniform_int(1, 6))});
  }
  std::sort(inputs.begin(), inputs.end());

  const auto log = testsupport::oracle_run(net, inputs, horizon);
  SpikeTrace out;
  for (const auto& ev : log)
    if (net.is_output(ev.neuron)) out.push_back(ev);

  save_network(net, dir / "random_small.json", {{"name", "random-small"}});
  save_spike_trace(inputs, dir / "random_small_in.spikes");
  save_spike_trace(out, dir / "random_small_out.golden.spikes");

  std::fprintf(stderr, "random_small: %zu neurons, %zu synapses, %zu output fires\n",
               net.neurons.size(), net.synapses.size(), out.size());
  return out.empty() ? 1 : 0;
}
