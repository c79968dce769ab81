#include "nsk/engine.hpp"

#include <algorithm>
#include <cmath>

#include "nsk/error.hpp"

namespace nsk {

Engine::Engine(Network net, Options options) : net_(std::move(net)), options_(options) {
  if (auto report = validate_network(net_); !report.empty())
    throw ValidationError(format_report(report));
  net_.normalize();

  const std::size_t n = net_.neurons.size();
  potential_.assign(n, 0.0);
  refractory_until_.assign(n, -1);
  last_fire_.assign(n, -1);
  output_slot_.assign(n, -1);
  outgoing_.assign(n, {});

  initial_weights_.reserve(net_.synapses.size());
  for (std::uint32_t si = 0; si < net_.synapses.size(); ++si) {
    initial_weights_.push_back(net_.synapses[si].weight);
    outgoing_[index_of(net_.synapses[si].from)].push_back(si);
  }
  for (std::size_t slot = 0; slot < net_.outputs.size(); ++slot)
    output_slot_[index_of(net_.outputs[slot])] = static_cast<std::int32_t>(slot);
  output_times_.assign(net_.outputs.size(), {});
}

std::size_t Engine::index_of(NeuronId id) const {
  auto it = std::lower_bound(net_.neurons.begin(), net_.neurons.end(), id,
                             [](const Neuron& n, NeuronId v) { return n.id < v; });
  if (it == net_.neurons.end() || it->id != id)
    throw DomainError("neuron " + std::to_string(id) + " does not exist");
  return static_cast<std::size_t>(it - net_.neurons.begin());
}

bool Engine::refractory_at(std::size_t idx, Timestep t) const {
  return last_fire_[idx] >= 0 && t > last_fire_[idx] && t <= refractory_until_[idx];
}

void Engine::apply_input_spike(NeuronId neuron, double charge, Timestep at) {
  if (!net_.is_input(neuron))
    throw DomainError("neuron " + std::to_string(neuron) + " is not an input neuron");
  if (at < now_)
    throw DomainError("cannot apply a spike at t=" + std::to_string(at) +
                      ": engine is already at t=" + std::to_string(now_));
  if (!std::isfinite(charge))
    throw DomainError("spike charge must be finite");
  pending_[at].push_back({static_cast<std::uint32_t>(index_of(neuron)), charge});
}

std::vector<SpikeEvent> Engine::step() {
  const Timestep t = now_;
  const std::size_t n = net_.neurons.size();

  // 1. integrate arrivals; refractory targets discard
  if (auto it = pending_.find(t); it != pending_.end()) {
    for (const Arrival& a : it->second)
      if (!refractory_at(a.target, t)) potential_[a.target] += a.charge;
    pending_.erase(it);
  }

  // 2. fire
  std::vector<SpikeEvent> fired;
  fired_scratch_.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const Neuron& nn = net_.neurons[i];
    if (refractory_at(i, t)) continue;
    if (potential_[i] < nn.threshold) continue;
    potential_[i] = 0.0;
    refractory_until_[i] = t + nn.refractory;
    last_fire_[i] = t;
    fired.push_back({t, nn.id, 1.0});
    fired_scratch_.push_back(nn.id);
    if (output_slot_[i] >= 0) output_times_[output_slot_[i]].push_back(t);
    for (std::uint32_t si : outgoing_[i]) {
      const Synapse& s = net_.synapses[si];
      pending_[t + s.delay].push_back(
          {static_cast<std::uint32_t>(index_of(s.to)), s.weight});
    }
  }

  // 3. leak
  for (std::size_t i = 0; i < n; ++i)
    if (net_.neurons[i].leak == Leak::all && last_fire_[i] != t) potential_[i] = 0.0;

  // 4. plasticity
  if (net_.stdp && !fired_scratch_.empty()) apply_stdp_update(fired_scratch_);

  // 5. advance
  now_ = t + 1;
  total_fires_ += fired.size();
  if (options_.record_fire_log)
    fire_log_.insert(fire_log_.end(), fired.begin(), fired.end());
  return fired;
}

void Engine::apply_stdp_update(const std::vector<NeuronId>& fired) {
  if (!net_.stdp || fired.empty()) return;
  const StdpRule& rule = *net_.stdp;
  // `fired` lists the neurons that fired at the step being finalized; their
  // last_fire entries already point at that step.
  const Timestep t = last_fire_[index_of(fired.front())];
  for (auto& s : net_.synapses) {
    if (!s.plastic) continue;
    const Timestep pre = last_fire_[index_of(s.from)];
    const Timestep post = last_fire_[index_of(s.to)];
    double w = s.weight;
    bool changed = false;
    if (post == t && pre >= 0) {
      const Timestep dt = t - pre;
      if (dt >= 1 && dt <= rule.window) {
        w += rule.a_plus;
        changed = true;
      }
    }
    if (pre == t && post >= 0) {
      const Timestep dt = t - post;
      if (dt >= 0 && dt <= rule.window) {
        w -= rule.a_minus;
        changed = true;
      }
    }
    if (changed) s.weight = std::clamp(w, rule.w_min, rule.w_max);
  }
}

OutputRecord Engine::run(std::span<const SpikeEvent> inputs, Timestep horizon) {
  if (now_ != 0)
    throw DomainError("run requires a fresh engine (now=" + std::to_string(now_) +
                      "); call reset first");
  if (horizon < 1) throw DomainError("horizon must be >= 1");
  for (const SpikeEvent& ev : inputs) {
    if (ev.time >= horizon)
      throw DomainError("input spike at t=" + std::to_string(ev.time) +
                        " lies outside horizon " + std::to_string(horizon));
    apply_input_spike(ev.neuron, ev.charge, ev.time);
  }
  for (Timestep t = 0; t < horizon; ++t) step();
  return output_record();
}

OutputRecord Engine::output_record() const {
  OutputRecord rec;
  rec.neurons = net_.outputs;
  rec.fire_times = output_times_;
  return rec;
}

void Engine::reset(bool reset_weights) {
  now_ = 0;
  total_fires_ = 0;
  pending_.clear();
  fire_log_.clear();
  std::fill(potential_.begin(), potential_.end(), 0.0);
  std::fill(refractory_until_.begin(), refractory_until_.end(), -1);
  std::fill(last_fire_.begin(), last_fire_.end(), -1);
  for (auto& times : output_times_) times.clear();
  if (reset_weights)
    for (std::size_t i = 0; i < net_.synapses.size(); ++i)
      net_.synapses[i].weight = initial_weights_[i];
}

double Engine::potential(NeuronId id) const { return potential_[index_of(id)]; }

double Engine::synapse_weight(NeuronId from, NeuronId to) const {
  const Synapse* s = net_.find_synapse(from, to);
  if (!s)
    throw DomainError("synapse " + std::to_string(from) + "->" + std::to_string(to) +
                      " does not exist");
  return s->weight;
}

}  // namespace nsk
