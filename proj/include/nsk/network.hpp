#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nsk {

using NeuronId = std::uint32_t;
using Timestep = std::int64_t;

enum class Leak { none, all };

// One clocked integrate-and-fire neuron. Charge accumulates until it meets
// the threshold; leak=all clears any sub-threshold remainder at the end of
// every step. refractory is the number of steps after a fire during which
// incoming charge is discarded and the neuron cannot fire again.
struct Neuron {
  NeuronId id = 0;
  double threshold = 1.0;
  Leak leak = Leak::none;
  Timestep refractory = 0;

  bool operator==(const Neuron&) const = default;
};

struct Synapse {
  NeuronId from = 0;
  NeuronId to = 0;
  double weight = 1.0;
  Timestep delay = 1;  // whole timesteps, >= 1
  bool plastic = false;

  bool operator==(const Synapse&) const = default;
};

// Additive nearest-neighbour pair rule. At a step where spikes occurred,
// each plastic synapse pre->post is adjusted from the most recent fire
// times: post at t with pre at t-dt (1 <= dt <= window) gains a_plus;
// pre at t with post at t-dt (0 <= dt <= window) loses a_minus. Weights
// stay clamped to [w_min, w_max].
struct StdpRule {
  double a_plus = 0.0;
  double a_minus = 0.0;
  Timestep window = 1;
  double w_min = 0.0;
  double w_max = 0.0;

  bool operator==(const StdpRule&) const = default;
};

// The universal currency between modules: a charge landing on (or emitted
// by) a neuron at a discrete timestep. Plain spikes carry charge 1.0.
struct SpikeEvent {
  Timestep time = 0;
  NeuronId neuron = 0;
  double charge = 1.0;

  auto operator<=>(const SpikeEvent&) const = default;
};

struct Network {
  std::vector<Neuron> neurons;    // canonical order: ascending id
  std::vector<Synapse> synapses;  // canonical order: ascending (from, to)
  std::vector<NeuronId> inputs;   // binding order is meaningful, never sorted
  std::vector<NeuronId> outputs;
  std::optional<StdpRule> stdp;

  bool operator==(const Network&) const = default;

  // Restores canonical element order (ids and (from, to) ascending).
  void normalize();

  const Neuron* find_neuron(NeuronId id) const;
  const Synapse* find_synapse(NeuronId from, NeuronId to) const;
  bool is_input(NeuronId id) const;
  bool is_output(NeuronId id) const;
};

// Structural invariant check; an empty report means the network is valid.
// Each violation names the offending element.
std::vector<std::string> validate_network(const Network& net);

// Joins a validation report into one printable block, one violation per line.
std::string format_report(const std::vector<std::string>& report);

// Fire times per output neuron, aligned with Network::outputs.
struct OutputRecord {
  std::vector<NeuronId> neurons;
  std::vector<std::vector<Timestep>> fire_times;

  bool operator==(const OutputRecord&) const = default;

  // nullptr when the neuron is not part of the record.
  const std::vector<Timestep>* times_for(NeuronId id) const;
};

}  // namespace nsk
