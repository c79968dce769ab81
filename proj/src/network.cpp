#include "nsk/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace nsk {

void Network::normalize() {
  std::sort(neurons.begin(), neurons.end(),
            [](const Neuron& a, const Neuron& b) { return a.id < b.id; });
  std::sort(synapses.begin(), synapses.end(), [](const Synapse& a, const Synapse& b) {
    return std::pair{a.from, a.to} < std::pair{b.from, b.to};
  });
}

const Neuron* Network::find_neuron(NeuronId id) const {
  for (const auto& n : neurons)
    if (n.id == id) return &n;
  return nullptr;
}

const Synapse* Network::find_synapse(NeuronId from, NeuronId to) const {
  for (const auto& s : synapses)
    if (s.from == from && s.to == to) return &s;
  return nullptr;
}

bool Network::is_input(NeuronId id) const {
  return std::find(inputs.begin(), inputs.end(), id) != inputs.end();
}

bool Network::is_output(NeuronId id) const {
  return std::find(outputs.begin(), outputs.end(), id) != outputs.end();
}

namespace {

std::string id_list_problem(const char* label, const std::vector<NeuronId>& ids,
                            const std::unordered_set<NeuronId>& known,
                            std::vector<std::string>& report) {
  if (ids.empty()) report.push_back(std::string(label) + ": must not be empty");
  std::set<NeuronId> seen;
  for (NeuronId id : ids) {
    if (!seen.insert(id).second)
      report.push_back(std::string(label) + ": neuron " + std::to_string(id) +
                       " listed more than once");
    if (!known.count(id))
      report.push_back(std::string(label) + ": neuron " + std::to_string(id) +
                       " does not exist");
  }
  return {};
}

}  // namespace

std::vector<std::string> validate_network(const Network& net) {
  std::vector<std::string> report;

  std::unordered_set<NeuronId> ids;
  for (const auto& n : net.neurons) {
    if (!ids.insert(n.id).second)
      report.push_back("neuron " + std::to_string(n.id) + ": duplicate id");
    if (!std::isfinite(n.threshold))
      report.push_back("neuron " + std::to_string(n.id) + ": threshold is not finite");
    if (n.refractory < 0)
      report.push_back("neuron " + std::to_string(n.id) + ": refractory period is negative");
  }

  std::set<std::pair<NeuronId, NeuronId>> pairs;
  for (const auto& s : net.synapses) {
    const std::string name =
        "synapse " + std::to_string(s.from) + "->" + std::to_string(s.to);
    if (s.delay < 1) report.push_back(name + ": delay must be >= 1");
    if (!std::isfinite(s.weight)) report.push_back(name + ": weight is not finite");
    if (!ids.count(s.from)) report.push_back(name + ": source neuron does not exist");
    if (!ids.count(s.to)) report.push_back(name + ": target neuron does not exist");
    if (!pairs.insert({s.from, s.to}).second)
      report.push_back(name + ": duplicate (from, to) pair");
  }

  id_list_problem("inputs", net.inputs, ids, report);
  id_list_problem("outputs", net.outputs, ids, report);

  if (net.stdp) {
    const auto& r = *net.stdp;
    if (r.a_plus < 0) report.push_back("stdp: a_plus must be >= 0");
    if (r.a_minus < 0) report.push_back("stdp: a_minus must be >= 0");
    if (r.window < 1) report.push_back("stdp: window must be >= 1");
    if (!(r.w_min <= r.w_max)) report.push_back("stdp: w_min must be <= w_max");
  }

  return report;
}

std::string format_report(const std::vector<std::string>& report) {
  std::ostringstream out;
  for (std::size_t i = 0; i < report.size(); ++i) {
    if (i) out << '\n';
    out << report[i];
  }
  return out.str();
}

const std::vector<Timestep>* OutputRecord::times_for(NeuronId id) const {
  for (std::size_t i = 0; i < neurons.size(); ++i)
    if (neurons[i] == id) return &fire_times[i];
  return nullptr;
}

}  // namespace nsk
