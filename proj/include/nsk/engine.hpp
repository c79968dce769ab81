#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "nsk/network.hpp"

namespace nsk {

// Deterministic discrete-time execution engine.
//
// One step at time t:
//   1. every charge scheduled to arrive at t is added to its target's
//      potential; targets inside a refractory window discard the charge
//   2. every non-refractory neuron whose potential meets its threshold
//      fires: the spike is logged, the potential resets to 0, the window
//      (t, t+refractory] opens, and each outgoing synapse schedules its
//      current weight for arrival at t+delay
//   3. leak=all neurons that did not fire drop their potential to 0
//   4. plastic synapse weights update when the network carries an STDP rule
//   5. time advances to t+1
//
// Fire decisions at t therefore see exactly the charges that arrived at or
// before t; a synapse with delay d can never influence its target earlier
// than d steps after the presynaptic fire.
//
// Instances are single-threaded. Distinct instances share nothing and may
// run concurrently; an instance may be handed between threads between calls.
class Engine {
 public:
  struct Options {
    // Benchmarks disable the full log; output fire times and the total
    // fire counter are tracked either way.
    bool record_fire_log = true;
  };

  explicit Engine(Network net) : Engine(std::move(net), Options{}) {}
  Engine(Network net, Options options);

  // Schedules an external charge for an input neuron. `at` must not be in
  // the past and `neuron` must be listed in network().inputs.
  void apply_input_spike(NeuronId neuron, double charge, Timestep at);

  // Runs one timestep; returns the spikes fired at that step.
  std::vector<SpikeEvent> step();

  // Enqueues `inputs` (every time must fall in [0, horizon)) and steps the
  // engine `horizon` times. Requires a fresh or reset engine (now() == 0).
  OutputRecord run(std::span<const SpikeEvent> inputs, Timestep horizon);

  // Applies one STDP update for the set of neurons that fired at the step
  // that just completed. step() calls this internally; exposed so the rule
  // can be driven directly.
  void apply_stdp_update(const std::vector<NeuronId>& fired);

  // Clears all dynamic state: time, potentials, pending charges, logs and
  // refractory windows. Weights learned through STDP survive unless
  // reset_weights is set.
  void reset(bool reset_weights = false);

  const Network& network() const { return net_; }
  Timestep now() const { return now_; }

  // All fires so far, ascending (time, neuron id).
  const std::vector<SpikeEvent>& fire_log() const { return fire_log_; }
  std::uint64_t total_fires() const { return total_fires_; }

  // Fire times of the designated output neurons, in network().outputs order.
  OutputRecord output_record() const;

  double potential(NeuronId id) const;
  double synapse_weight(NeuronId from, NeuronId to) const;

 private:
  struct Arrival {
    std::uint32_t target;  // dense index
    double charge;
  };

  std::size_t index_of(NeuronId id) const;
  bool refractory_at(std::size_t idx, Timestep t) const;

  Network net_;
  Options options_;
  std::vector<double> initial_weights_;

  // Dense per-neuron state, indexed by position in net_.neurons.
  std::vector<double> potential_;
  std::vector<Timestep> refractory_until_;
  std::vector<Timestep> last_fire_;                    // -1 = never fired
  std::vector<std::int32_t> output_slot_;              // -1 = not an output
  std::vector<std::vector<std::uint32_t>> outgoing_;   // synapse indices

  std::map<Timestep, std::vector<Arrival>> pending_;
  std::vector<std::vector<Timestep>> output_times_;
  std::vector<SpikeEvent> fire_log_;
  std::vector<NeuronId> fired_scratch_;
  std::uint64_t total_fires_ = 0;
  Timestep now_ = 0;
};

}  // namespace nsk
