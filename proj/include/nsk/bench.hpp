#pragma once

#include <cstdint>
#include <string>

#include "nsk/network.hpp"
#include "nsk/rng.hpp"

namespace nsk {

struct BenchReport {
  std::uint32_t neurons = 0;
  std::uint32_t synapses = 0;
  std::int64_t horizon = 0;
  double host_seconds = 0.0;
  double timesteps_per_second = 0.0;  // horizon / host_seconds
  std::uint64_t spikes_processed = 0;  // total fires across the run
};

// Fixed, documented benchmark workload: a ring of `neurons` (i -> i+1 mod N,
// weight 1, threshold 1, refractory 3, random delays in [1, 8]) plus random
// extra synapses up to `synapses` total; every tick a random 10% of the
// neurons are driven with charge 1.0.
Network make_bench_network(std::uint32_t neurons, std::uint32_t synapses, Rng& rng);

BenchReport run_bench(std::uint32_t neurons, std::uint32_t synapses, std::int64_t horizon,
                      std::uint64_t seed);

std::string bench_report_text(const BenchReport& report);

}  // namespace nsk
