#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nsk/error.hpp"
#include "nsk/evolve.hpp"
#include "nsk/rng.hpp"

using namespace nsk;

namespace {

Network template_net() {
  Network net;
  net.neurons = {{0, 1.0, Leak::none, 0},
                 {1, 1.0, Leak::none, 0},
                 {2, 1.0, Leak::none, 0},
                 {3, 1.0, Leak::all, 0},
                 {4, 0.0, Leak::none, 0},
                 {5, 1.0, Leak::none, 0}};
  net.synapses = {{0, 2, 0.5, 1, false}, {1, 3, 0.5, 1, false}, {4, 5, 0.5, 1, false}};
  net.inputs = {0, 1};
  net.outputs = {2, 3};
  net.normalize();
  return net;
}

GAConfig small_cfg() {
  GAConfig cfg;
  cfg.population = 8;
  cfg.generations = 6;
  cfg.tournament_k = 2;
  cfg.mutation_rate = 0.3;
  cfg.crossover_rate = 0.5;
  cfg.elitism = 1;
  cfg.seed = 5;
  cfg.max_neurons = 8;
  cfg.max_synapses = 12;
  return cfg;
}

// cheap deterministic stand-in fitness: reward total synaptic weight
double weight_sum_fitness(const Network& net) {
  double sum = 0.0;
  for (const auto& s : net.synapses) sum += s.weight;
  return sum;
}

}  // namespace

TEST_CASE("init_population: population below 2 is rejected") {
  GAConfig cfg = small_cfg();
  cfg.population = 1;
  CHECK_THROWS_AS(init_population(cfg, template_net()), ConfigError);
}

TEST_CASE("init_population: deterministic and valid") {
  const GAConfig cfg = small_cfg();
  const auto a = init_population(cfg, template_net());
  const auto b = init_population(cfg, template_net());
  REQUIRE(a.size() == 8);
  CHECK(a == b);
  CHECK(a[0] == template_net());  // the template itself leads
  for (const auto& g : a) CHECK(validate_network(g).empty());
}

TEST_CASE("mutate: rate 0 is the identity") {
  GAConfig cfg = small_cfg();
  cfg.mutation_rate = 0.0;
  Rng rng(1);
  CHECK(mutate(cfg, template_net(), rng) == template_net());
}

TEST_CASE("mutate: rate 1 redraws every scalar inside the bounds") {
  GAConfig cfg = small_cfg();
  cfg.mutation_rate = 1.0;
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Network g = mutate(cfg, template_net(), rng);
    for (const auto& n : g.neurons) {
      CHECK(n.threshold >= cfg.bounds.threshold_min);
      CHECK(n.threshold <= cfg.bounds.threshold_max);
    }
    for (const auto& s : g.synapses) {
      CHECK(s.weight >= cfg.bounds.weight_min);
      CHECK(s.weight <= cfg.bounds.weight_max);
      CHECK(s.delay >= cfg.bounds.delay_min);
      CHECK(s.delay <= cfg.bounds.delay_max);
    }
    CHECK(validate_network(g).empty());
  }
}

TEST_CASE("mutate: delays stay integral and >= 1, budgets hold") {
  GAConfig cfg = small_cfg();
  cfg.mutation_rate = 0.9;
  Rng rng(3);
  Network g = template_net();
  for (int round = 0; round < 200; ++round) {
    g = mutate(cfg, g, rng);
    CHECK(g.synapses.size() <= static_cast<std::size_t>(cfg.max_synapses));
    CHECK(g.neurons.size() == template_net().neurons.size());
    for (const auto& s : g.synapses) CHECK(s.delay >= 1);
    CHECK(g.inputs == template_net().inputs);
    CHECK(g.outputs == template_net().outputs);
    CHECK(validate_network(g).empty());
  }
}

TEST_CASE("crossover: identical parents reproduce themselves") {
  const GAConfig cfg = small_cfg();
  Rng rng(4);
  const Network parent = template_net();
  for (int trial = 0; trial < 10; ++trial)
    CHECK(crossover(cfg, parent, parent, rng) == parent);
}

TEST_CASE("crossover: children stay valid and within budget") {
  GAConfig cfg = small_cfg();
  cfg.mutation_rate = 1.0;
  Rng rng(5);
  const Network a = mutate(cfg, template_net(), rng);
  const Network b = mutate(cfg, template_net(), rng);
  for (int trial = 0; trial < 50; ++trial) {
    const Network child = crossover(cfg, a, b, rng);
    CHECK(child.synapses.size() <= static_cast<std::size_t>(cfg.max_synapses));
    CHECK(validate_network(child).empty());
    CHECK(child.inputs == a.inputs);
    CHECK(child.outputs == a.outputs);
  }
}

TEST_CASE("crossover: mismatched bindings are rejected") {
  const GAConfig cfg = small_cfg();
  Rng rng(6);
  Network other = template_net();
  other.outputs = {2, 5};
  CHECK_THROWS_AS(crossover(cfg, template_net(), other, rng), ConfigError);
}

TEST_CASE("tournament_select: k = population always picks the best") {
  const std::vector<double> fitness = {0.3, 0.9, 0.1, 0.5};
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial)
    CHECK(tournament_select(fitness, 4, rng) == 1);
}

TEST_CASE("tournament_select: ties break to the lower index") {
  const std::vector<double> fitness = {0.5, 0.5, 0.5};
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) CHECK(tournament_select(fitness, 3, rng) == 0);
}

TEST_CASE("evolve_loop: elitism keeps best-so-far non-decreasing") {
  const GAConfig cfg = small_cfg();
  const EvolveResult result = evolve_loop(cfg, weight_sum_fitness, template_net(), false);
  REQUIRE(result.stats.size() == static_cast<std::size_t>(cfg.generations) + 1);
  for (std::size_t g = 1; g < result.stats.size(); ++g)
    CHECK(result.stats[g].best >= result.stats[g - 1].best);
  CHECK(result.best_fitness == result.stats.back().best);
  CHECK(validate_network(result.best).empty());
}

TEST_CASE("evolve_loop: deterministic, and parallel equals sequential") {
  const GAConfig cfg = small_cfg();
  const EvolveResult seq1 = evolve_loop(cfg, weight_sum_fitness, template_net(), false);
  const EvolveResult seq2 = evolve_loop(cfg, weight_sum_fitness, template_net(), false);
  const EvolveResult par = evolve_loop(cfg, weight_sum_fitness, template_net(), true);
  REQUIRE(seq1.stats.size() == seq2.stats.size());
  for (std::size_t g = 0; g < seq1.stats.size(); ++g) {
    CHECK(seq1.stats[g].best == seq2.stats[g].best);
    CHECK(seq1.stats[g].median == seq2.stats[g].median);
    CHECK(seq1.stats[g].best == par.stats[g].best);
    CHECK(seq1.stats[g].median == par.stats[g].median);
  }
  CHECK(seq1.best == par.best);
}

TEST_CASE("evolve_loop: selection pressure improves a simple objective") {
  GAConfig cfg = small_cfg();
  cfg.generations = 10;
  const EvolveResult result = evolve_loop(cfg, weight_sum_fitness, template_net(), false);
  CHECK(result.stats.back().median > result.stats.front().median);
  CHECK(result.best_fitness > weight_sum_fitness(template_net()));
}

TEST_CASE("stats_tsv: one line per generation plus a header") {
  const std::vector<GenerationStats> stats = {{1.0, 0.5}, {2.0, 1.0}};
  const std::string tsv = stats_tsv(stats);
  CHECK(tsv == "gen\tbest\tmedian\n0\t1\t0.5\n1\t2\t1\n");
}
