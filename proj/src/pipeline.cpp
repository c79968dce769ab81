#include "nsk/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "nsk/engine.hpp"
#include "nsk/error.hpp"
#include "nsk/rng.hpp"

namespace nsk {

namespace {

void check(const std::vector<std::string>& report) {
  if (!report.empty()) throw ConfigError(format_report(report));
}

double quantize_duty(double duty, std::uint32_t slots) {
  if (!(duty >= 0.0 && duty <= 1.0))
    throw DomainError("pwm duty " + std::to_string(duty) + " outside [0, 1]");
  const auto k = round_half_up(duty * static_cast<double>(slots));
  return static_cast<double>(k) / static_cast<double>(slots);
}

// Spikes -> dense [tick][line] matrix for one window. Binary wires carry
// presence, so only spikes with charge > 0 raise a line.
std::vector<std::vector<double>> to_line_values(const WireConfig& wire,
                                                const std::vector<NeuronId>& bound,
                                                const std::vector<SpikeEvent>& spikes,
                                                Timestep window) {
  std::vector<std::vector<double>> values(
      static_cast<std::size_t>(window), std::vector<double>(bound.size(), 0.0));
  for (const auto& ev : spikes) {
    const auto line_it = std::find(bound.begin(), bound.end(), ev.neuron);
    if (line_it == bound.end())
      throw DomainError("spike targets neuron " + std::to_string(ev.neuron) +
                        " which is not bound to the wire");
    if (ev.time < 0 || ev.time >= window)
      throw DomainError("spike at t=" + std::to_string(ev.time) + " outside window");
    const auto line = static_cast<std::size_t>(line_it - bound.begin());
    auto& cell = values[static_cast<std::size_t>(ev.time)][line];
    cell = wire.mode == WireMode::binary ? (ev.charge > 0.0 ? 1.0 : cell)
                                         : cell + ev.charge;
  }
  return values;
}

// Received line values -> spikes on the bound neurons. A zero value is
// silence; binary levels become plain charge-1 spikes, PWM duties carry
// their value as the charge.
std::vector<SpikeEvent> to_spikes(const std::vector<NeuronId>& bound,
                                  const std::vector<std::vector<double>>& values) {
  std::vector<SpikeEvent> out;
  for (std::size_t t = 0; t < values.size(); ++t)
    for (std::size_t line = 0; line < values[t].size(); ++line)
      if (values[t][line] > 0.0)
        out.push_back({static_cast<Timestep>(t), bound[line], values[t][line]});
  return out;
}

struct WindowOutcome {
  double decoded = 0.0;
  std::vector<std::size_t> output_counts;
  std::vector<SpikeEvent> fires;  // window-local times
};

// One control period: encode -> input wire -> engine for T ticks -> output
// wire -> decode. The engine keeps its (possibly STDP-adjusted) weights but
// starts the window with cleared potentials and queues.
WindowOutcome run_window(const PipelineConfig& cfg, Engine& engine, double value) {
  const Timestep window = cfg.encoder.window;

  const auto encoded = encode(cfg.encoder, value);
  const auto tx_in = wire_transmit(cfg.input_wire, to_line_values(cfg.input_wire,
                                                                  cfg.encoder.neurons,
                                                                  encoded, window));
  const auto rx_in = wire_receive(cfg.input_wire, tx_in);

  engine.reset(false);
  for (const auto& ev : to_spikes(cfg.encoder.neurons, rx_in))
    engine.apply_input_spike(ev.neuron, ev.charge, ev.time);
  const OutputRecord record = engine.run({}, window);

  std::vector<SpikeEvent> out_spikes;
  for (std::size_t i = 0; i < record.neurons.size(); ++i)
    for (Timestep t : record.fire_times[i])
      if (std::find(cfg.decoder.neurons.begin(), cfg.decoder.neurons.end(),
                    record.neurons[i]) != cfg.decoder.neurons.end())
        out_spikes.push_back({t, record.neurons[i], 1.0});

  const auto tx_out = wire_transmit(cfg.output_wire, to_line_values(cfg.output_wire,
                                                                    cfg.decoder.neurons,
                                                                    out_spikes, window));
  const auto rx_out = wire_receive(cfg.output_wire, tx_out);

  OutputRecord received;
  received.neurons = cfg.decoder.neurons;
  received.fire_times.resize(cfg.decoder.neurons.size());
  for (std::size_t t = 0; t < rx_out.size(); ++t)
    for (std::size_t line = 0; line < rx_out[t].size(); ++line)
      if (rx_out[t][line] > 0.0)
        received.fire_times[line].push_back(static_cast<Timestep>(t));

  WindowOutcome outcome;
  outcome.decoded = decode(cfg.decoder, received);
  for (const auto& times : received.fire_times) outcome.output_counts.push_back(times.size());
  outcome.fires = engine.fire_log();
  return outcome;
}

}  // namespace

std::vector<std::string> validate_wire(const WireConfig& cfg) {
  std::vector<std::string> report;
  if (!(cfg.wire_hz > 0.0)) report.push_back("wire: wire_hz must be > 0");
  if (cfg.lines < 1) report.push_back("wire: lines must be >= 1");
  if (cfg.mode == WireMode::pwm && cfg.pwm_slots < 2)
    report.push_back("wire: pwm_slots must be >= 2 in pwm mode");
  return report;
}

std::vector<WireFrame> wire_transmit(const WireConfig& cfg,
                                     const std::vector<std::vector<double>>& values) {
  check(validate_wire(cfg));
  std::vector<WireFrame> frames;
  frames.reserve(values.size());
  for (std::size_t t = 0; t < values.size(); ++t) {
    if (values[t].size() != cfg.lines)
      throw DomainError("tick " + std::to_string(t) + " has " +
                        std::to_string(values[t].size()) + " lines, wire has " +
                        std::to_string(cfg.lines));
    WireFrame frame;
    frame.frame_index = static_cast<std::int64_t>(t);
    frame.payload.reserve(cfg.lines);
    for (double v : values[t]) {
      if (cfg.mode == WireMode::binary) {
        if (v != 0.0 && v != 1.0)
          throw DomainError("binary level must be 0 or 1, got " + std::to_string(v));
        frame.payload.push_back(v);
      } else {
        frame.payload.push_back(quantize_duty(v, cfg.pwm_slots));
      }
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

std::vector<std::vector<double>> wire_receive(const WireConfig& cfg,
                                              const std::vector<WireFrame>& frames) {
  check(validate_wire(cfg));
  std::vector<std::vector<double>> values;
  values.reserve(frames.size());
  for (const auto& frame : frames) {
    if (frame.payload.size() != cfg.lines)
      throw DomainError("frame " + std::to_string(frame.frame_index) + " carries " +
                        std::to_string(frame.payload.size()) + " lines, wire has " +
                        std::to_string(cfg.lines));
    values.push_back(frame.payload);
  }
  return values;
}

std::vector<std::string> validate_pipeline(const PipelineConfig& cfg) {
  std::vector<std::string> report = validate_network(cfg.network);
  for (auto& r : validate_coder(cfg.encoder)) report.push_back(r);
  for (auto& r : validate_coder(cfg.decoder)) report.push_back(r);
  for (auto& r : validate_wire(cfg.input_wire)) report.push_back("input_" + r);
  for (auto& r : validate_wire(cfg.output_wire)) report.push_back("output_" + r);
  if (!(cfg.neuroprocessor_hz > 0.0))
    report.push_back("pipeline: neuroprocessor_hz must be > 0");

  for (NeuronId id : cfg.encoder.neurons)
    if (!cfg.network.is_input(id))
      report.push_back("pipeline: encoder binds neuron " + std::to_string(id) +
                       " which is not a network input");
  for (NeuronId id : cfg.decoder.neurons)
    if (!cfg.network.is_output(id))
      report.push_back("pipeline: decoder binds neuron " + std::to_string(id) +
                       " which is not a network output");
  if (cfg.input_wire.lines != cfg.encoder.neurons.size())
    report.push_back("pipeline: input wire has " + std::to_string(cfg.input_wire.lines) +
                     " lines but the encoder binds " +
                     std::to_string(cfg.encoder.neurons.size()) + " neurons");
  if (cfg.output_wire.lines != cfg.decoder.neurons.size())
    report.push_back("pipeline: output wire has " + std::to_string(cfg.output_wire.lines) +
                     " lines but the decoder binds " +
                     std::to_string(cfg.decoder.neurons.size()) + " neurons");
  if (cfg.encoder.window != cfg.decoder.window)
    report.push_back("pipeline: encoder window " + std::to_string(cfg.encoder.window) +
                     " != decoder window " + std::to_string(cfg.decoder.window));
  return report;
}

TimingReport timing_report(const PipelineConfig& cfg, std::int64_t windows) {
  TimingReport r;
  r.windows = windows;
  r.window_ticks = cfg.encoder.window;
  r.input_mode = cfg.input_wire.mode;
  r.output_mode = cfg.output_wire.mode;
  r.input_frame_ms = 1000.0 / cfg.input_wire.wire_hz;
  r.output_frame_ms = 1000.0 / cfg.output_wire.wire_hz;
  r.tick_ms = 1000.0 / cfg.neuroprocessor_hz;
  const double slowest = std::max({r.input_frame_ms, r.output_frame_ms, r.tick_ms});
  r.window_ms = static_cast<double>(r.window_ticks) * slowest;
  r.total_ms = static_cast<double>(r.windows) * r.window_ms;
  return r;
}

std::string TimingReport::to_text() const {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "windows %lld\n"
                "window_ticks %lld\n"
                "input_wire.mode %s\n"
                "input_wire.frame_ms %.6f\n"
                "output_wire.mode %s\n"
                "output_wire.frame_ms %.6f\n"
                "engine.tick_ms %.6f\n"
                "window_ms %.6f\n"
                "total_ms %.6f\n",
                static_cast<long long>(windows), static_cast<long long>(window_ticks),
                input_mode == WireMode::pwm ? "pwm" : "binary", input_frame_ms,
                output_mode == WireMode::pwm ? "pwm" : "binary", output_frame_ms,
                tick_ms, window_ms, total_ms);
  return buf;
}

std::string OpenLoopResult::decoded_text() const {
  char buf[128];
  std::string out;
  for (std::size_t i = 0; i < decoded.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu %.9g %.9g\n", i, inputs[i].wall_time, decoded[i]);
    out += buf;
  }
  return out;
}

OpenLoopResult run_pipeline_open(const PipelineConfig& cfg,
                                 const std::vector<TimedValue>& values) {
  check(validate_pipeline(cfg));
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i].wall_time < values[i - 1].wall_time)
      throw DomainError("input values must be sorted by wall time");

  Engine engine(cfg.network);
  OpenLoopResult result;
  result.inputs = values;
  const Timestep window = cfg.encoder.window;
  for (std::size_t w = 0; w < values.size(); ++w) {
    WindowOutcome outcome = run_window(cfg, engine, values[w].value);
    result.decoded.push_back(outcome.decoded);
    const Timestep offset = static_cast<Timestep>(w) * window;
    for (const auto& ev : outcome.fires)
      result.trace.push_back({ev.time + offset, ev.neuron, ev.charge});
  }
  result.timing = timing_report(cfg, static_cast<std::int64_t>(values.size()));
  return result;
}

std::vector<EpisodeResult> run_pipeline_closed(const PipelineConfig& cfg, ClosedLoopApp& app,
                                               int episodes, std::int64_t steps_per_episode,
                                               std::uint64_t seed) {
  check(validate_pipeline(cfg));
  if (app.sensor_min != cfg.encoder.v_min || app.sensor_max != cfg.encoder.v_max)
    throw ConfigError("app sensor range [" + std::to_string(app.sensor_min) + ", " +
                      std::to_string(app.sensor_max) + "] does not match encoder range [" +
                      std::to_string(cfg.encoder.v_min) + ", " +
                      std::to_string(cfg.encoder.v_max) + "]");
  // diff and count decoders scale their output; it must stay inside the
  // app's declared action range
  if (cfg.decoder.kind == DecoderKind::diff || cfg.decoder.kind == DecoderKind::count) {
    const double reach = std::abs(cfg.decoder.scale);
    if (reach > std::max(std::abs(app.action_min), std::abs(app.action_max)))
      throw ConfigError("decoder scale " + std::to_string(cfg.decoder.scale) +
                        " exceeds the app action range");
  }

  std::vector<EpisodeResult> results;
  const Timestep window = cfg.encoder.window;
  for (int ep = 0; ep < episodes; ++ep) {
    app.reset(Rng::mix(seed, static_cast<std::uint64_t>(ep)));
    Engine engine(cfg.network);
    EpisodeResult episode;
    for (std::int64_t s = 0; s < steps_per_episode; ++s) {
      ClosedLoopStep step;
      step.reading = app.read_sensor();
      WindowOutcome outcome = run_window(cfg, engine, step.reading);
      step.action = outcome.decoded;
      step.output_counts = outcome.output_counts;
      app.apply_action(step.action);
      const Timestep offset = s * window;
      for (const auto& ev : outcome.fires)
        episode.trace.push_back({ev.time + offset, ev.neuron, ev.charge});
      episode.steps.push_back(std::move(step));
    }
    episode.score = app.score ? app.score() : 0.0;
    results.push_back(std::move(episode));
  }
  return results;
}

}  // namespace nsk
