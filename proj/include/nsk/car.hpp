#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsk/evolve.hpp"
#include "nsk/network.hpp"
#include "nsk/pipeline.hpp"
#include "nsk/rng.hpp"

namespace nsk {

// Infrared-style proximity sensor modeled as a linear clamp over its range.
struct SensorModel {
  double r_min = 10.0;  // cm
  double r_max = 80.0;  // cm

  double reading(double distance) const;
};

// Drive stage: an action in [-1, 1] moves the car by up to max_step_cm.
struct MotorModel {
  double max_step_cm = 2.0;
};

struct CarParams {
  double target_distance = 42.0;  // cm, inside the controller's dead band
  double leader_step_cm = 1.0;
  double track_length_cm = 200.0;
  double car_start_cm = 30.0;
  double leader_start_cm = 72.0;
  SensorModel sensor;
  MotorModel motor;
};

// 1-D car-following world: a leader object on a seeded random walk and a
// follower car driven by decoded actions. Neither vehicle passes the other;
// distance never goes negative.
class CarWorld {
 public:
  CarWorld(const CarParams& params, std::uint64_t seed);

  // Leader takes one fair-coin step, then the car moves clamp(action) *
  // max_step_cm; both stay on the track.
  void step(double action);

  double distance() const { return leader_pos_ - car_pos_; }
  double sensor_reading() const { return params_.sensor.reading(distance()); }
  double car_pos() const { return car_pos_; }
  double leader_pos() const { return leader_pos_; }
  const CarParams& params() const { return params_; }

 private:
  CarParams params_;
  double car_pos_;
  double leader_pos_;
  Rng rng_;
};

// The committed hand-designed controller: flip-flop inputs (0, 1), forward
// and backward outputs (2, 3), and a tonic unit (4) whose drive onto the
// backward path is cancelled spike-for-spike by the inputs. Readings above
// the dead band decode positive (drive forward), below negative.
Network reference_network();

// Coder specs matching reference_network and the default CarParams.
EncoderSpec car_reference_encoder();
DecoderSpec car_reference_decoder();

struct EpisodeTraceRow {
  std::int64_t step = 0;
  double distance = 0.0;  // at sensor-read time
  double reading = 0.0;
  double action = 0.0;
  std::size_t fwd_count = 0;
  std::size_t bwd_count = 0;
};

struct CarEpisodeResult {
  double score = 0.0;  // mean |distance - target| over the last half
  std::vector<EpisodeTraceRow> rows;
  std::vector<SpikeEvent> trace;
};

// One closed-loop episode. The world is seeded with mix(seed, 0) so that a
// pipeline episode and the never-move baseline see the same leader walk.
CarEpisodeResult car_episode(const PipelineConfig& cfg, const CarParams& params,
                             std::int64_t steps, std::uint64_t seed);

// Score of a car that never moves, same world and seed derivation.
double car_baseline_score(const CarParams& params, std::int64_t steps, std::uint64_t seed);

// Tab-separated trace: step, distance, reading, action, fwd_count, bwd_count.
std::string episode_trace_tsv(const CarEpisodeResult& episode);

// GA fitness: negative episode score averaged over the configured seeds.
double car_fitness(const PipelineConfig& base, const CarParams& params,
                   const FitnessParams& fitness, const Network& genome);

// Full training pathway: evolve networks against car_fitness, starting from
// the pipeline's network as the template.
EvolveResult train_car(const GAConfig& ga, const PipelineConfig& base,
                       const CarParams& params);

}  // namespace nsk
