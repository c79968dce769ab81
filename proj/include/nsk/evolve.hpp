#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nsk/network.hpp"
#include "nsk/rng.hpp"

namespace nsk {

struct GABounds {
  double weight_min = -2.0;
  double weight_max = 2.0;
  Timestep delay_min = 1;
  Timestep delay_max = 3;
  double threshold_min = 0.0;
  double threshold_max = 2.0;
};

// Closed-loop fitness evaluation knobs (ga.json `fitness` section). Scores
// are averaged over these fixed episode seeds so one lucky walk cannot
// dominate selection.
struct FitnessParams {
  std::int64_t steps = 200;
  std::vector<std::uint64_t> seeds = {101, 202, 303};
};

struct GAConfig {
  int population = 32;
  int generations = 30;
  int tournament_k = 4;
  double mutation_rate = 0.15;
  double crossover_rate = 0.5;
  int elitism = 1;
  std::uint64_t seed = 1;
  GABounds bounds;
  int max_neurons = 16;
  int max_synapses = 32;
  FitnessParams fitness;
};

std::vector<std::string> validate_ga(const GAConfig& cfg);

// Genomes are Networks with immutable input/output bindings. Evolvable:
// synapse weights and delays, neuron thresholds, leak flags, and synapse
// presence (within max_synapses). Neuron count is fixed by the template.

// Each evolvable scalar redraws uniformly within bounds with probability
// mutation_rate; a synapse is added or removed each with probability
// mutation_rate/4. The result always validates.
Network mutate(const GAConfig& cfg, const Network& genome, Rng& rng);

// Synapses present in both parents take their parameters from a random
// parent; synapses present in one are inherited with probability 1/2;
// neuron parameters come from a random parent. Repaired to validity.
Network crossover(const GAConfig& cfg, const Network& a, const Network& b, Rng& rng);

// The template plus population-1 seeded random perturbations.
std::vector<Network> init_population(const GAConfig& cfg, const Network& templ);

// k distinct competitors, winner by fitness, ties to the lower index.
std::size_t tournament_select(const std::vector<double>& fitness, int k, Rng& rng);

struct GenerationStats {
  double best = 0.0;
  double median = 0.0;
};

struct EvolveResult {
  Network best;
  double best_fitness = 0.0;
  std::vector<GenerationStats> stats;  // index 0 = initial population
};

using FitnessFn = std::function<double(const Network&)>;

// Tournament selection with elitism. Fitness must be deterministic per
// genome; evaluations may fan out across threads, results are reduced in
// population order so concurrency never changes the outcome.
EvolveResult evolve_loop(const GAConfig& cfg, const FitnessFn& fitness,
                         const Network& templ, bool parallel = true);

// "gen\tbest\tmedian" lines, one per generation.
std::string stats_tsv(const std::vector<GenerationStats>& stats);

}  // namespace nsk
