#include "nsk/car.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "nsk/error.hpp"

namespace nsk {

double SensorModel::reading(double distance) const {
  return std::clamp(distance, r_min, r_max);
}

CarWorld::CarWorld(const CarParams& params, std::uint64_t seed)
    : params_(params), car_pos_(params.car_start_cm), leader_pos_(params.leader_start_cm),
      rng_(seed) {
  if (!(leader_pos_ > car_pos_))
    throw ConfigError("car world: leader must start ahead of the car");
  if (!(params_.sensor.r_min < params_.sensor.r_max))
    throw ConfigError("car world: sensor range is degenerate");
  if (params_.target_distance < params_.sensor.r_min ||
      params_.target_distance > params_.sensor.r_max)
    throw ConfigError("car world: target distance lies outside the sensor range");
  if (!(params_.motor.max_step_cm > 0.0))
    throw ConfigError("car world: max_step_cm must be > 0");
}

void CarWorld::step(double action) {
  // leader walks first; it cannot leave the track or back through the car
  const double dir = rng_.coin() ? 1.0 : -1.0;
  leader_pos_ = std::clamp(leader_pos_ + dir * params_.leader_step_cm, car_pos_,
                           params_.track_length_cm);
  // then the car moves; it stops at contact rather than passing the leader
  const double a = std::clamp(action, -1.0, 1.0);
  car_pos_ = std::clamp(car_pos_ + a * params_.motor.max_step_cm, 0.0, leader_pos_);
}

Network reference_network() {
  Network net;
  // 0, 1: flip-flop inputs  2: forward output  3: backward output  4: tonic
  net.neurons = {
      {0, 1.0, Leak::none, 0},
      {1, 1.0, Leak::none, 0},
      {2, 1.0, Leak::none, 0},
      {3, 1.0, Leak::all, 0},
      {4, 0.0, Leak::none, 0},
  };
  // forward counts input spikes; backward counts the tonic ticks the inputs
  // fail to cancel, so the two counts pivot around the half-full window
  net.synapses = {
      {0, 2, 1.0, 1, false},
      {0, 3, -1.0, 1, false},
      {1, 2, 1.0, 1, false},
      {1, 3, -1.0, 1, false},
      {4, 3, 1.0, 1, false},
  };
  net.inputs = {0, 1};
  net.outputs = {2, 3};
  net.normalize();
  return net;
}

EncoderSpec car_reference_encoder() {
  EncoderSpec enc;
  enc.kind = EncoderKind::flipflop;
  enc.v_min = 10.0;
  enc.v_max = 80.0;
  enc.window = 11;
  enc.neurons = {0, 1};
  return enc;
}

DecoderSpec car_reference_decoder() {
  DecoderSpec dec;
  dec.kind = DecoderKind::diff;
  dec.window = 11;
  dec.neurons = {2, 3};
  dec.scale = 1.0;
  return dec;
}

CarEpisodeResult car_episode(const PipelineConfig& cfg, const CarParams& params,
                             std::int64_t steps, std::uint64_t seed) {
  if (cfg.decoder.kind != DecoderKind::diff)
    throw ConfigError("car app needs a diff decoder (forward, backward)");

  CarWorld world(params, 0);  // replaced on reset
  std::vector<double> distances;

  ClosedLoopApp app;
  app.sensor_min = params.sensor.r_min;
  app.sensor_max = params.sensor.r_max;
  app.action_min = -1.0;
  app.action_max = 1.0;
  app.reset = [&](std::uint64_t s) {
    world = CarWorld(params, s);
    distances.clear();
  };
  app.read_sensor = [&] {
    distances.push_back(world.distance());
    return world.sensor_reading();
  };
  app.apply_action = [&](double action) { world.step(action); };
  app.score = [&] {
    double sum = 0.0;
    const std::size_t half = distances.size() / 2;
    for (std::size_t i = half; i < distances.size(); ++i)
      sum += std::abs(distances[i] - params.target_distance);
    return distances.size() > half ? sum / static_cast<double>(distances.size() - half) : 0.0;
  };

  auto episodes = run_pipeline_closed(cfg, app, 1, steps, seed);
  EpisodeResult& ep = episodes.front();

  CarEpisodeResult result;
  result.score = ep.score;
  result.trace = std::move(ep.trace);
  for (std::size_t i = 0; i < ep.steps.size(); ++i) {
    EpisodeTraceRow row;
    row.step = static_cast<std::int64_t>(i);
    row.distance = distances[i];
    row.reading = ep.steps[i].reading;
    row.action = ep.steps[i].action;
    row.fwd_count = ep.steps[i].output_counts.size() > 0 ? ep.steps[i].output_counts[0] : 0;
    row.bwd_count = ep.steps[i].output_counts.size() > 1 ? ep.steps[i].output_counts[1] : 0;
    result.rows.push_back(row);
  }
  return result;
}

double car_baseline_score(const CarParams& params, std::int64_t steps, std::uint64_t seed) {
  // same seed derivation as episode 0 of car_episode
  CarWorld world(params, Rng::mix(seed, 0));
  std::vector<double> distances;
  for (std::int64_t s = 0; s < steps; ++s) {
    distances.push_back(world.distance());
    world.step(0.0);
  }
  double sum = 0.0;
  const std::size_t half = distances.size() / 2;
  for (std::size_t i = half; i < distances.size(); ++i)
    sum += std::abs(distances[i] - params.target_distance);
  return distances.size() > half ? sum / static_cast<double>(distances.size() - half) : 0.0;
}

std::string episode_trace_tsv(const CarEpisodeResult& episode) {
  std::string out = "step\tdistance\treading\taction\tfwd_count\tbwd_count\n";
  char buf[160];
  for (const auto& row : episode.rows) {
    std::snprintf(buf, sizeof buf, "%lld\t%.9g\t%.9g\t%.9g\t%zu\t%zu\n",
                  static_cast<long long>(row.step), row.distance, row.reading, row.action,
                  row.fwd_count, row.bwd_count);
    out += buf;
  }
  return out;
}

double car_fitness(const PipelineConfig& base, const CarParams& params,
                   const FitnessParams& fitness, const Network& genome) {
  PipelineConfig cfg = base;
  cfg.network = genome;
  double total = 0.0;
  for (std::uint64_t seed : fitness.seeds)
    total += car_episode(cfg, params, fitness.steps, seed).score;
  return -total / static_cast<double>(fitness.seeds.size());
}

EvolveResult train_car(const GAConfig& ga, const PipelineConfig& base,
                       const CarParams& params) {
  FitnessFn fitness = [&](const Network& genome) {
    return car_fitness(base, params, ga.fitness, genome);
  };
  return evolve_loop(ga, fitness, base.network);
}

}  // namespace nsk
