#include "nsk/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>

#include "nsk/engine.hpp"
#include "nsk/error.hpp"

namespace nsk {

Network make_bench_network(std::uint32_t neurons, std::uint32_t synapses, Rng& rng) {
  if (neurons < 1 || synapses < 1)
    throw DomainError("bench: neurons and synapses must be >= 1");
  Network net;
  for (std::uint32_t i = 0; i < neurons; ++i)
    net.neurons.push_back({i, 1.0, Leak::none, 3});

  std::set<std::pair<NeuronId, NeuronId>> used;
  const std::uint32_t ring = std::min(neurons, synapses);
  for (std::uint32_t i = 0; i < ring; ++i) {
    const NeuronId to = (i + 1) % neurons;
    if (i == to) break;  // single-neuron degenerate ring
    net.synapses.push_back({i, to, 1.0, rng.uniform_int(1, 8), false});
    used.insert({i, to});
  }
  while (net.synapses.size() < synapses && neurons > 1) {
    const auto from = static_cast<NeuronId>(rng.uniform_int(0, neurons - 1));
    const auto to = static_cast<NeuronId>(rng.uniform_int(0, neurons - 1));
    if (from == to || !used.insert({from, to}).second) continue;
    net.synapses.push_back({from, to, 1.0, rng.uniform_int(1, 8), false});
  }

  net.inputs.resize(neurons);
  for (std::uint32_t i = 0; i < neurons; ++i) net.inputs[i] = i;
  net.outputs = {0};
  net.normalize();
  return net;
}

BenchReport run_bench(std::uint32_t neurons, std::uint32_t synapses, std::int64_t horizon,
                      std::uint64_t seed) {
  if (horizon < 1) throw DomainError("bench: horizon must be >= 1");
  Rng rng(seed);
  Network net = make_bench_network(neurons, synapses, rng);

  Engine::Options opt;
  opt.record_fire_log = false;
  Engine engine(std::move(net), opt);

  const std::uint32_t drive = std::max<std::uint32_t>(1, neurons / 10);

  const auto start = std::chrono::steady_clock::now();
  for (std::int64_t t = 0; t < horizon; ++t) {
    for (std::uint32_t id : rng.sample_distinct(neurons, drive))
      engine.apply_input_spike(id, 1.0, t);
    engine.step();
  }
  const auto stop = std::chrono::steady_clock::now();

  BenchReport report;
  report.neurons = neurons;
  report.synapses = synapses;
  report.horizon = horizon;
  report.host_seconds = std::chrono::duration<double>(stop - start).count();
  report.timesteps_per_second =
      static_cast<double>(horizon) / std::max(report.host_seconds, 1e-12);
  report.spikes_processed = engine.total_fires();
  return report;
}

std::string bench_report_text(const BenchReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "neurons %u\n"
                "synapses %u\n"
                "horizon %lld\n"
                "host_seconds %.6f\n"
                "timesteps_per_second %.1f\n"
                "spikes_processed %llu\n",
                r.neurons, r.synapses, static_cast<long long>(r.horizon), r.host_seconds,
                r.timesteps_per_second,
                static_cast<unsigned long long>(r.spikes_processed));
  return buf;
}

}  // namespace nsk
