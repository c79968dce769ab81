#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nsk/coding.hpp"
#include "nsk/network.hpp"

namespace nsk {

enum class WireMode { binary, pwm };

// One modeled inter-unit wire bundle: `lines` parallel lines clocked at
// wire_hz frames per second. Binary lines carry levels, PWM lines carry a
// duty cycle quantized to pwm_slots per frame.
struct WireConfig {
  WireMode mode = WireMode::binary;
  double wire_hz = 1.0;
  std::uint32_t lines = 1;
  std::uint32_t pwm_slots = 256;  // pwm mode only

  bool operator==(const WireConfig&) const = default;
};

struct WireFrame {
  std::int64_t frame_index = 0;
  // binary: levels in {0,1}; pwm: duty in {0, 1/pwm_slots, ..., 1}
  std::vector<double> payload;

  bool operator==(const WireFrame&) const = default;
};

std::vector<std::string> validate_wire(const WireConfig& cfg);

// values[tick][line] -> one frame per tick. Binary levels must be 0 or 1;
// PWM duties must lie in [0,1] and are quantized to the nearest multiple of
// 1/pwm_slots, ties up.
std::vector<WireFrame> wire_transmit(const WireConfig& cfg,
                                     const std::vector<std::vector<double>>& values);

// Exact inverse of wire_transmit up to PWM quantization; binary is lossless.
std::vector<std::vector<double>> wire_receive(const WireConfig& cfg,
                                              const std::vector<WireFrame>& frames);

// One open-loop input sample.
struct TimedValue {
  double wall_time = 0.0;
  double value = 0.0;

  bool operator==(const TimedValue&) const = default;
};

// The virtual kit: encoder -> input wire -> engine -> output wire -> decoder.
// The coder window T defines the control period; each window the engine
// state is cleared (STDP-learned weights persist) and run for T ticks.
struct PipelineConfig {
  EncoderSpec encoder;
  Network network;
  DecoderSpec decoder;
  WireConfig input_wire;
  WireConfig output_wire;
  double neuroprocessor_hz = 1.0;
};

std::vector<std::string> validate_pipeline(const PipelineConfig& cfg);

// Modeled wall-clock timing, derived from the configured rates, never from
// host execution speed. The three units advance in lockstep, so a window
// takes T ticks of the slowest clock.
struct TimingReport {
  std::int64_t windows = 0;
  std::int64_t window_ticks = 0;
  WireMode input_mode = WireMode::binary;
  WireMode output_mode = WireMode::binary;
  double input_frame_ms = 0.0;
  double output_frame_ms = 0.0;
  double tick_ms = 0.0;
  double window_ms = 0.0;
  double total_ms = 0.0;

  std::string to_text() const;  // line-oriented key/value, golden-file stable
};

TimingReport timing_report(const PipelineConfig& cfg, std::int64_t windows);

struct OpenLoopResult {
  std::vector<double> decoded;      // one value per window
  std::vector<TimedValue> inputs;   // echo of the driving samples
  std::vector<SpikeEvent> trace;    // every engine fire, global tick times
  TimingReport timing;

  std::string decoded_text() const;  // "<window> <wall_time> <decoded>" lines
};

OpenLoopResult run_pipeline_open(const PipelineConfig& cfg,
                                 const std::vector<TimedValue>& values);

// Closed-loop application binding. The declared ranges must match the coder
// specs; apply_action also advances the application's world by one control
// period.
struct ClosedLoopApp {
  double sensor_min = 0.0;
  double sensor_max = 1.0;
  double action_min = -1.0;
  double action_max = 1.0;
  std::function<void(std::uint64_t seed)> reset;
  std::function<double()> read_sensor;
  std::function<void(double action)> apply_action;
  std::function<double()> score;  // episode score, queried after the last step
};

struct ClosedLoopStep {
  double reading = 0.0;
  double action = 0.0;
  std::vector<std::size_t> output_counts;  // per decoder-bound neuron
};

struct EpisodeResult {
  double score = 0.0;
  std::vector<ClosedLoopStep> steps;
  std::vector<SpikeEvent> trace;
};

// Runs `episodes` seeded episodes of `steps_per_episode` control periods
// each. Episode e uses world seed mix(seed, e). Deterministic.
std::vector<EpisodeResult> run_pipeline_closed(const PipelineConfig& cfg, ClosedLoopApp& app,
                                               int episodes, std::int64_t steps_per_episode,
                                               std::uint64_t seed);

}  // namespace nsk
