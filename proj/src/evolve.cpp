#include "nsk/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <map>
#include <set>
#include <thread>

#include "nsk/error.hpp"

namespace nsk {

namespace {

void require_valid(const Network& net, const char* stage) {
  if (auto report = validate_network(net); !report.empty())
    throw ValidationError(std::string(stage) + " produced an invalid genome:\n" +
                          format_report(report));
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> evaluate_all(const std::vector<Network>& pop, const FitnessFn& fitness,
                                 bool parallel) {
  std::vector<double> scores(pop.size());
  if (!parallel || pop.size() < 2) {
    for (std::size_t i = 0; i < pop.size(); ++i) scores[i] = fitness(pop[i]);
    return scores;
  }
  // fan out over index-striped chunks; results land in fixed slots
  const unsigned hw = std::max(2u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(pop.size()));
  std::vector<std::future<void>> futures;
  for (unsigned w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < pop.size(); i += workers) scores[i] = fitness(pop[i]);
    }));
  }
  for (auto& f : futures) f.get();
  return scores;
}

}  // namespace

std::vector<std::string> validate_ga(const GAConfig& cfg) {
  std::vector<std::string> report;
  if (cfg.population < 2) report.push_back("ga: population must be >= 2");
  if (cfg.generations < 0) report.push_back("ga: generations must be >= 0");
  if (cfg.tournament_k < 1) report.push_back("ga: tournament_k must be >= 1");
  if (cfg.tournament_k > cfg.population)
    report.push_back("ga: tournament_k must be <= population");
  if (cfg.mutation_rate < 0.0 || cfg.mutation_rate > 1.0)
    report.push_back("ga: mutation_rate must be in [0, 1]");
  if (cfg.crossover_rate < 0.0 || cfg.crossover_rate > 1.0)
    report.push_back("ga: crossover_rate must be in [0, 1]");
  if (cfg.elitism < 0) report.push_back("ga: elitism must be >= 0");
  if (cfg.elitism >= cfg.population) report.push_back("ga: elitism must be < population");
  if (!(cfg.bounds.weight_min < cfg.bounds.weight_max))
    report.push_back("ga: weight bounds are degenerate");
  if (cfg.bounds.delay_min < 1) report.push_back("ga: delay_min must be >= 1");
  if (cfg.bounds.delay_min > cfg.bounds.delay_max)
    report.push_back("ga: delay bounds are degenerate");
  if (!(cfg.bounds.threshold_min < cfg.bounds.threshold_max))
    report.push_back("ga: threshold bounds are degenerate");
  if (cfg.max_neurons < 1) report.push_back("ga: max_neurons must be >= 1");
  if (cfg.max_synapses < 0) report.push_back("ga: max_synapses must be >= 0");
  if (cfg.fitness.steps < 1) report.push_back("ga: fitness.steps must be >= 1");
  if (cfg.fitness.seeds.empty()) report.push_back("ga: fitness.seeds must not be empty");
  return report;
}

Network mutate(const GAConfig& cfg, const Network& genome, Rng& rng) {
  Network g = genome;
  g.normalize();
  const GABounds& b = cfg.bounds;

  for (auto& n : g.neurons) {
    if (rng.chance(cfg.mutation_rate))
      n.threshold = rng.uniform(b.threshold_min, b.threshold_max);
    if (rng.chance(cfg.mutation_rate)) n.leak = rng.coin() ? Leak::all : Leak::none;
  }
  for (auto& s : g.synapses) {
    if (rng.chance(cfg.mutation_rate)) s.weight = rng.uniform(b.weight_min, b.weight_max);
    if (rng.chance(cfg.mutation_rate)) s.delay = rng.uniform_int(b.delay_min, b.delay_max);
  }

  // structural edits at a quarter of the scalar rate
  if (rng.chance(cfg.mutation_rate / 4.0) &&
      g.synapses.size() < static_cast<std::size_t>(cfg.max_synapses)) {
    const auto n = static_cast<std::int64_t>(g.neurons.size());
    for (int attempt = 0; attempt < 32; ++attempt) {
      const auto from = g.neurons[static_cast<std::size_t>(rng.uniform_int(0, n - 1))].id;
      const auto to = g.neurons[static_cast<std::size_t>(rng.uniform_int(0, n - 1))].id;
      if (g.find_synapse(from, to)) continue;  // re-draw occupied pairs
      Synapse s;
      s.from = from;
      s.to = to;
      s.weight = rng.uniform(b.weight_min, b.weight_max);
      s.delay = rng.uniform_int(b.delay_min, b.delay_max);
      g.synapses.push_back(s);
      break;
    }
  }
  if (rng.chance(cfg.mutation_rate / 4.0) && !g.synapses.empty()) {
    const auto victim = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(g.synapses.size()) - 1));
    g.synapses.erase(g.synapses.begin() + static_cast<std::ptrdiff_t>(victim));
  }

  g.normalize();
  require_valid(g, "mutate");
  return g;
}

Network crossover(const GAConfig& cfg, const Network& a, const Network& b, Rng& rng) {
  if (a.inputs != b.inputs || a.outputs != b.outputs)
    throw ConfigError("crossover parents have different input/output bindings");
  std::vector<NeuronId> ids_a, ids_b;
  for (const auto& n : a.neurons) ids_a.push_back(n.id);
  for (const auto& n : b.neurons) ids_b.push_back(n.id);
  std::sort(ids_a.begin(), ids_a.end());
  std::sort(ids_b.begin(), ids_b.end());
  if (ids_a != ids_b) throw ConfigError("crossover parents have different neuron sets");

  Network child;
  child.inputs = a.inputs;
  child.outputs = a.outputs;
  child.stdp = a.stdp;

  Network na = a, nb = b;
  na.normalize();
  nb.normalize();
  for (std::size_t i = 0; i < na.neurons.size(); ++i)
    child.neurons.push_back(rng.coin() ? na.neurons[i] : nb.neurons[i]);

  std::map<std::pair<NeuronId, NeuronId>, const Synapse*> in_a, in_b;
  for (const auto& s : na.synapses) in_a[{s.from, s.to}] = &s;
  for (const auto& s : nb.synapses) in_b[{s.from, s.to}] = &s;
  std::set<std::pair<NeuronId, NeuronId>> keys;
  for (const auto& [k, _] : in_a) keys.insert(k);
  for (const auto& [k, _] : in_b) keys.insert(k);

  for (const auto& key : keys) {
    const auto ita = in_a.find(key);
    const auto itb = in_b.find(key);
    if (ita != in_a.end() && itb != in_b.end()) {
      child.synapses.push_back(rng.coin() ? *ita->second : *itb->second);
    } else {
      const Synapse* only = ita != in_a.end() ? ita->second : itb->second;
      if (rng.coin()) child.synapses.push_back(*only);
    }
  }

  // repair: enforce the synapse budget by dropping random extras
  while (child.synapses.size() > static_cast<std::size_t>(cfg.max_synapses)) {
    const auto victim = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(child.synapses.size()) - 1));
    child.synapses.erase(child.synapses.begin() + static_cast<std::ptrdiff_t>(victim));
  }

  child.normalize();
  require_valid(child, "crossover");
  return child;
}

std::vector<Network> init_population(const GAConfig& cfg, const Network& templ) {
  if (auto report = validate_ga(cfg); !report.empty())
    throw ConfigError(format_report(report));
  require_valid(templ, "init_population template");
  if (templ.neurons.size() > static_cast<std::size_t>(cfg.max_neurons))
    throw ConfigError("template exceeds max_neurons");

  Rng rng(Rng::mix(cfg.seed, 0x696e6974ull));  // init stream
  std::vector<Network> pop;
  pop.push_back(templ);
  GAConfig full = cfg;
  full.mutation_rate = 1.0;  // every scalar redrawn for the initial spread
  for (int i = 1; i < cfg.population; ++i) pop.push_back(mutate(full, templ, rng));
  return pop;
}

std::size_t tournament_select(const std::vector<double>& fitness, int k, Rng& rng) {
  const auto entrants = rng.sample_distinct(static_cast<std::uint32_t>(fitness.size()),
                                            static_cast<std::uint32_t>(k));
  std::size_t winner = entrants[0];
  for (std::uint32_t idx : entrants) {
    if (fitness[idx] > fitness[winner] ||
        (fitness[idx] == fitness[winner] && idx < winner))
      winner = idx;
  }
  return winner;
}

EvolveResult evolve_loop(const GAConfig& cfg, const FitnessFn& fitness,
                         const Network& templ, bool parallel) {
  std::vector<Network> pop = init_population(cfg, templ);
  std::vector<double> scores = evaluate_all(pop, fitness, parallel);

  Rng rng(Rng::mix(cfg.seed, 0x6c6f6f70ull));  // selection stream
  EvolveResult result;
  result.best = pop[0];
  result.best_fitness = scores[0];

  auto note_generation = [&] {
    double best = scores[0];
    std::size_t best_idx = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
      if (scores[i] > best) {
        best = scores[i];
        best_idx = i;
      }
    if (best > result.best_fitness) {
      result.best_fitness = best;
      result.best = pop[best_idx];
    }
    result.stats.push_back({best, median_of(scores)});
  };

  note_generation();

  for (int gen = 0; gen < cfg.generations; ++gen) {
    // rank current population: fitness descending, index ascending on ties
    std::vector<std::size_t> order(pop.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return scores[x] > scores[y]; });

    std::vector<Network> next;
    next.reserve(pop.size());
    for (int e = 0; e < cfg.elitism; ++e) next.push_back(pop[order[static_cast<std::size_t>(e)]]);
    while (next.size() < pop.size()) {
      const std::size_t pa = tournament_select(scores, cfg.tournament_k, rng);
      Network child;
      if (rng.chance(cfg.crossover_rate)) {
        const std::size_t pb = tournament_select(scores, cfg.tournament_k, rng);
        child = crossover(cfg, pop[pa], pop[pb], rng);
      } else {
        child = pop[pa];
      }
      next.push_back(mutate(cfg, child, rng));
    }

    pop = std::move(next);
    scores = evaluate_all(pop, fitness, parallel);
    note_generation();
  }

  return result;
}

std::string stats_tsv(const std::vector<GenerationStats>& stats) {
  std::string out = "gen\tbest\tmedian\n";
  char buf[96];
  for (std::size_t i = 0; i < stats.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu\t%.9g\t%.9g\n", i, stats[i].best, stats[i].median);
    out += buf;
  }
  return out;
}

}  // namespace nsk
