#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nsk/error.hpp"
#include "nsk/pipeline.hpp"
#include "nsk/rng.hpp"

using namespace nsk;

namespace {

WireConfig binary_wire(std::uint32_t lines, double hz = 5000.0) {
  WireConfig cfg;
  cfg.mode = WireMode::binary;
  cfg.wire_hz = hz;
  cfg.lines = lines;
  return cfg;
}

WireConfig pwm_wire(std::uint32_t lines, double hz = 10.0, std::uint32_t slots = 256) {
  WireConfig cfg;
  cfg.mode = WireMode::pwm;
  cfg.wire_hz = hz;
  cfg.lines = lines;
  cfg.pwm_slots = slots;
  return cfg;
}

// relay: one input neuron mirrored straight to the output
PipelineConfig relay_pipeline(Timestep window, double scale) {
  PipelineConfig cfg;
  cfg.network.neurons = {{0, 1.0, Leak::none, 0}};
  cfg.network.inputs = {0};
  cfg.network.outputs = {0};
  cfg.encoder = {EncoderKind::rate, 0.0, 1.0, window, {0}};
  cfg.decoder = {DecoderKind::count, window, {0}, scale};
  cfg.input_wire = binary_wire(1);
  cfg.output_wire = binary_wire(1);
  cfg.neuroprocessor_hz = 5000.0;
  return cfg;
}

}  // namespace

TEST_CASE("wire_transmit: binary levels mirror the spike pattern") {
  const auto frames = wire_transmit(binary_wire(1), {{1}, {0}, {1}, {0}});
  REQUIRE(frames.size() == 4);
  CHECK(frames[0].payload == std::vector<double>{1});
  CHECK(frames[1].payload == std::vector<double>{0});
  CHECK(frames[2].payload == std::vector<double>{1});
  CHECK(frames[3].payload == std::vector<double>{0});
  CHECK(frames[2].frame_index == 2);
}

TEST_CASE("wire_transmit: binary rejects non-binary levels") {
  CHECK_THROWS_AS(wire_transmit(binary_wire(1), {{0.5}}), DomainError);
}

TEST_CASE("wire_transmit: pwm quantizes to the nearest slot, ties up") {
  const auto frames = wire_transmit(pwm_wire(1, 10.0, 8), {{0.5}, {1.0}, {0.0}});
  CHECK(frames[0].payload[0] == 0.5);   // 4/8
  CHECK(frames[1].payload[0] == 1.0);   // 8/8
  CHECK(frames[2].payload[0] == 0.0);
  // exact tie between 0/8 and 1/8 goes up
  const auto tie = wire_transmit(pwm_wire(1, 10.0, 8), {{1.0 / 16.0}});
  CHECK(tie[0].payload[0] == 1.0 / 8.0);
}

TEST_CASE("wire_transmit: duty outside [0,1] is a signal error") {
  CHECK_THROWS_AS(wire_transmit(pwm_wire(1), {{1.2}}), DomainError);
  CHECK_THROWS_AS(wire_transmit(pwm_wire(1), {{-0.1}}), DomainError);
}

TEST_CASE("wire_receive: binary round trip is lossless") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto lines = static_cast<std::uint32_t>(rng.uniform_int(1, 4));
    std::vector<std::vector<double>> pattern(rng.uniform_int(1, 40),
                                             std::vector<double>(lines, 0.0));
    for (auto& tick : pattern)
      for (auto& level : tick) level = rng.coin() ? 1.0 : 0.0;
    const auto cfg = binary_wire(lines);
    CHECK(wire_receive(cfg, wire_transmit(cfg, pattern)) == pattern);
  }
}

TEST_CASE("wire_receive: pwm round trip stays within the quantization bound") {
  Rng rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const auto slots = static_cast<std::uint32_t>(rng.uniform_int(2, 512));
    const double duty = rng.uniform();
    const auto cfg = pwm_wire(1, 10.0, slots);
    const auto recovered = wire_receive(cfg, wire_transmit(cfg, {{duty}}));
    CHECK(std::abs(recovered[0][0] - duty) <= 1.0 / (2.0 * slots));
  }
}

TEST_CASE("wire_receive: line-count mismatch is an error") {
  WireFrame frame;
  frame.frame_index = 0;
  frame.payload = {1.0, 0.0, 1.0};
  CHECK_THROWS_AS(wire_receive(binary_wire(2), {frame}), DomainError);
}

TEST_CASE("pipeline validation: binding and line-count mismatches are caught") {
  PipelineConfig cfg = relay_pipeline(10, 1.0);
  cfg.input_wire.lines = 2;
  CHECK(!validate_pipeline(cfg).empty());

  cfg = relay_pipeline(10, 1.0);
  cfg.encoder.neurons = {5};
  CHECK(!validate_pipeline(cfg).empty());

  cfg = relay_pipeline(10, 1.0);
  cfg.decoder.window = 9;
  CHECK(!validate_pipeline(cfg).empty());

  CHECK(validate_pipeline(relay_pipeline(10, 1.0)).empty());
}

TEST_CASE("run_pipeline_open: full-scale input through a relay decodes to scale") {
  const PipelineConfig cfg = relay_pipeline(10, 3.0);
  const auto result = run_pipeline_open(cfg, {{0.0, 1.0}});
  REQUIRE(result.decoded.size() == 1);
  CHECK(result.decoded[0] == 3.0);
}

TEST_CASE("run_pipeline_open: decoded values follow the encoder resolution") {
  const PipelineConfig cfg = relay_pipeline(10, 1.0);
  const auto result = run_pipeline_open(cfg, {{0.0, 0.0}, {1.0, 0.5}, {2.0, 1.0}});
  REQUIRE(result.decoded.size() == 3);
  CHECK(result.decoded[0] == 0.0);
  CHECK(result.decoded[1] == 0.5);
  CHECK(result.decoded[2] == 1.0);
  // trace times are global: window w starts at w * T
  REQUIRE(!result.trace.empty());
  CHECK(result.trace.front().time == 10);  // first fire of window 1
}

TEST_CASE("run_pipeline_open: unsorted values are rejected") {
  const PipelineConfig cfg = relay_pipeline(10, 1.0);
  CHECK_THROWS_AS(run_pipeline_open(cfg, {{1.0, 0.5}, {0.0, 0.5}}), DomainError);
}

TEST_CASE("timing: the stated anchor rates") {
  // 5 kHz binary wire, window of 50 ticks: 0.2 ms frames, 10 ms windows
  PipelineConfig fast = relay_pipeline(50, 1.0);
  const TimingReport t_fast = timing_report(fast, 1);
  CHECK(t_fast.input_frame_ms == 0.2);
  CHECK(t_fast.tick_ms == 0.2);
  CHECK(t_fast.window_ms == 10.0);

  // 10 Hz PWM wire: 100 ms frames
  PipelineConfig slow = relay_pipeline(50, 1.0);
  slow.input_wire = pwm_wire(1, 10.0);
  const TimingReport t_slow = timing_report(slow, 2);
  CHECK(t_slow.input_frame_ms == 100.0);
  CHECK(t_slow.window_ms == 50.0 * 100.0);
  CHECK(t_slow.total_ms == 2.0 * 50.0 * 100.0);

  const std::string text = t_slow.to_text();
  CHECK(text.find("input_wire.frame_ms 100.000000") != std::string::npos);
  CHECK(text.find("input_wire.mode pwm") != std::string::npos);
  CHECK(text.find("engine.tick_ms 0.200000") != std::string::npos);
}

TEST_CASE("timing: slowing a wire never shortens the modeled window") {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    PipelineConfig cfg = relay_pipeline(rng.uniform_int(1, 60), 1.0);
    cfg.input_wire.wire_hz = rng.uniform(1.0, 10000.0);
    cfg.output_wire.wire_hz = rng.uniform(1.0, 10000.0);
    cfg.neuroprocessor_hz = rng.uniform(1.0, 10000.0);
    const double before = timing_report(cfg, 1).window_ms;
    cfg.input_wire.wire_hz /= rng.uniform(1.0, 8.0);
    const double after = timing_report(cfg, 1).window_ms;
    CHECK(after >= before);
  }
}

TEST_CASE("run_pipeline_open: determinism") {
  const PipelineConfig cfg = relay_pipeline(10, 1.0);
  std::vector<TimedValue> values;
  Rng rng(24);
  for (int i = 0; i < 10; ++i) values.push_back({static_cast<double>(i), rng.uniform()});
  const auto a = run_pipeline_open(cfg, values);
  const auto b = run_pipeline_open(cfg, values);
  CHECK(a.decoded == b.decoded);
  CHECK(a.trace == b.trace);
}

TEST_CASE("run_pipeline_open: pwm wires carry charge-coded spikes") {
  PipelineConfig cfg = relay_pipeline(10, 1.0);
  cfg.encoder.kind = EncoderKind::charge;
  cfg.input_wire = pwm_wire(1, 10.0, 256);
  cfg.network.neurons[0].threshold = 0.5;
  // charge 0.75 passes the wire quantized and still crosses the threshold
  const auto result = run_pipeline_open(cfg, {{0.0, 0.75}});
  CHECK(result.decoded[0] == doctest::Approx(0.1));  // one fire / window 10
}

TEST_CASE("run_pipeline_closed: silent network yields zero actions") {
  PipelineConfig cfg = relay_pipeline(10, 1.0);
  cfg.network.neurons[0].threshold = 100.0;  // never fires

  ClosedLoopApp app;
  app.sensor_min = 0.0;
  app.sensor_max = 1.0;
  double sensor = 0.5;
  app.reset = [&](std::uint64_t) {};
  app.read_sensor = [&] { return sensor; };
  app.apply_action = [&](double action) { CHECK(action == 0.0); };
  const auto episodes = run_pipeline_closed(cfg, app, 1, 20, 9);
  REQUIRE(episodes.size() == 1);
  CHECK(episodes[0].trace.empty());
  for (const auto& step : episodes[0].steps) CHECK(step.action == 0.0);
}

TEST_CASE("run_pipeline_closed: same seed reproduces the episode exactly") {
  PipelineConfig cfg = relay_pipeline(8, 1.0);
  auto make_app = [](Rng& rng, std::vector<double>& actions) {
    ClosedLoopApp app;
    app.sensor_min = 0.0;
    app.sensor_max = 1.0;
    app.reset = [&rng](std::uint64_t seed) { rng = Rng(seed); };
    app.read_sensor = [&rng] { return rng.uniform(); };
    app.apply_action = [&actions](double a) { actions.push_back(a); };
    return app;
  };
  Rng rng_a(0), rng_b(0);
  std::vector<double> actions_a, actions_b;
  auto app_a = make_app(rng_a, actions_a);
  auto app_b = make_app(rng_b, actions_b);
  const auto ea = run_pipeline_closed(cfg, app_a, 2, 15, 77);
  const auto eb = run_pipeline_closed(cfg, app_b, 2, 15, 77);
  CHECK(actions_a == actions_b);
  REQUIRE(ea.size() == eb.size());
  for (std::size_t i = 0; i < ea.size(); ++i) CHECK(ea[i].trace == eb[i].trace);
}

TEST_CASE("run_pipeline_closed: sensor range mismatch is rejected") {
  PipelineConfig cfg = relay_pipeline(10, 1.0);
  ClosedLoopApp app;
  app.sensor_min = 10.0;
  app.sensor_max = 80.0;
  app.reset = [](std::uint64_t) {};
  app.read_sensor = [] { return 45.0; };
  app.apply_action = [](double) {};
  CHECK_THROWS_AS(run_pipeline_closed(cfg, app, 1, 5, 1), ConfigError);
}
