#include "support/oracle.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace nsk::testsupport {

namespace {

struct WeightChange {
  Timestep applied_at;  // step whose plasticity phase set the value
  double value;
};

// Weight a fire at step `t` propagates: the initial value, or the latest
// change applied strictly before `t`.
double weight_for_fire_at(double initial, const std::vector<WeightChange>& log,
                          Timestep t) {
  double w = initial;
  for (const auto& c : log) {
    if (c.applied_at < t) w = c.value;
  }
  return w;
}

// Latest value overall (what the next update starts from).
double current_weight(double initial, const std::vector<WeightChange>& log) {
  return log.empty() ? initial : log.back().value;
}

}  // namespace

std::vector<SpikeEvent> oracle_run(const Network& net_in,
                                   const std::vector<SpikeEvent>& inputs,
                                   Timestep horizon) {
  Network net = net_in;
  net.normalize();
  const std::size_t n = net.neurons.size();

  std::map<NeuronId, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[net.neurons[i].id] = i;

  // inputs grouped per step, original order preserved
  std::map<Timestep, std::vector<std::pair<std::size_t, double>>> external;
  for (const auto& ev : inputs) external[ev.time].push_back({index.at(ev.neuron), ev.charge});

  std::vector<std::vector<Timestep>> history(n);  // fire times per neuron
  std::vector<double> potential(n, 0.0);
  std::vector<double> initial_w;
  std::vector<std::vector<WeightChange>> wlog(net.synapses.size());
  for (const auto& s : net.synapses) initial_w.push_back(s.weight);

  std::vector<SpikeEvent> log;

  auto refractory = [&](std::size_t v, Timestep t) {
    const Timestep r = net.neurons[v].refractory;
    for (Timestep tf : history[v])
      if (tf < t && t <= tf + r) return true;
    return false;
  };
  auto fired_at = [&](std::size_t v, Timestep t) {
    return std::find(history[v].begin(), history[v].end(), t) != history[v].end();
  };
  auto last_fire_upto = [&](std::size_t v, Timestep t) -> Timestep {
    Timestep best = -1;
    for (Timestep tf : history[v])
      if (tf <= t) best = std::max(best, tf);
    return best;
  };

  for (Timestep t = 0; t < horizon; ++t) {
    // integrate: external charges plus one full synapse-table scan
    for (std::size_t v = 0; v < n; ++v) {
      if (refractory(v, t)) continue;
      double arriving = 0.0;
      if (auto it = external.find(t); it != external.end())
        for (const auto& [target, charge] : it->second)
          if (target == v) arriving += charge;
      for (std::size_t si = 0; si < net.synapses.size(); ++si) {
        const Synapse& s = net.synapses[si];
        if (index.at(s.to) != v) continue;
        const Timestep tf = t - s.delay;
        if (tf >= 0 && fired_at(index.at(s.from), tf))
          arriving += weight_for_fire_at(initial_w[si], wlog[si], tf);
      }
      potential[v] += arriving;
    }

    // fire
    std::vector<std::size_t> fired;
    for (std::size_t v = 0; v < n; ++v) {
      if (refractory(v, t)) continue;
      if (potential[v] >= net.neurons[v].threshold) fired.push_back(v);
    }
    for (std::size_t v : fired) {
      potential[v] = 0.0;
      history[v].push_back(t);
      log.push_back({t, net.neurons[v].id, 1.0});
    }

    // leak
    for (std::size_t v = 0; v < n; ++v)
      if (net.neurons[v].leak == Leak::all && !fired_at(v, t)) potential[v] = 0.0;

    // plasticity
    if (net.stdp && !fired.empty()) {
      const StdpRule& rule = *net.stdp;
      for (std::size_t si = 0; si < net.synapses.size(); ++si) {
        const Synapse& s = net.synapses[si];
        if (!s.plastic) continue;
        const Timestep pre = last_fire_upto(index.at(s.from), t);
        const Timestep post = last_fire_upto(index.at(s.to), t);
        double w = current_weight(initial_w[si], wlog[si]);
        bool changed = false;
        if (post == t && pre >= 0 && t - pre >= 1 && t - pre <= rule.window) {
          w += rule.a_plus;
          changed = true;
        }
        if (pre == t && post >= 0 && t - post >= 0 && t - post <= rule.window) {
          w -= rule.a_minus;
          changed = true;
        }
        if (changed) wlog[si].push_back({t, std::clamp(w, rule.w_min, rule.w_max)});
      }
    }
  }

  return log;
}

}  // namespace nsk::testsupport
