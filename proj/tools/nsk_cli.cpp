// nsk command-line driver. Uses only the public C API from nsk.h.
//
// Exit codes: 0 success, 1 domain/validation/config error, 2 usage or
// document parse error.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nsk.h"

namespace {

int exit_code_for(nsk_status status) {
  switch (status) {
    case NSK_OK: return 0;
    case NSK_ERR_PARSE: return 2;
    default: return 1;
  }
}

int fail(nsk_status status) {
  std::fprintf(stderr, "error: %s\n", nsk_last_error());
  return exit_code_for(status);
}

struct StringGuard {
  char* s = nullptr;
  ~StringGuard() { nsk_string_free(s); }
};

struct SpikesGuard {
  nsk_spike* s = nullptr;
  size_t n = 0;
  ~SpikesGuard() { nsk_spikes_free(s); }
};

int cmd_validate(const std::string& network_path) {
  nsk_network* net = nullptr;
  const nsk_status status = nsk_network_load_file(network_path.c_str(), &net);
  if (status != NSK_OK) return fail(status);
  std::printf("ok: %s (%u neurons, %u synapses)\n", network_path.c_str(),
              nsk_network_neuron_count(net), nsk_network_synapse_count(net));
  nsk_network_free(net);
  return 0;
}

int cmd_run(const std::string& network_path, const std::string& spikes_path,
            std::int64_t horizon, const std::string& out_path) {
  nsk_network* net = nullptr;
  nsk_status status = nsk_network_load_file(network_path.c_str(), &net);
  if (status != NSK_OK) return fail(status);

  SpikesGuard inputs;
  status = nsk_trace_load_file(spikes_path.c_str(), &inputs.s, &inputs.n);
  if (status != NSK_OK) {
    nsk_network_free(net);
    return fail(status);
  }

  nsk_engine* eng = nullptr;
  status = nsk_engine_create(net, &eng);
  if (status == NSK_OK) status = nsk_engine_run(eng, inputs.s, inputs.n, horizon);

  SpikesGuard fires;
  if (status == NSK_OK) status = nsk_engine_output_fires(eng, &fires.s, &fires.n);
  if (status == NSK_OK && !out_path.empty())
    status = nsk_trace_save_file(out_path.c_str(), fires.s, fires.n);
  if (status == NSK_OK) {
    std::printf("input_spikes %zu\noutput_spikes %zu\n", inputs.n, fires.n);
    if (out_path.empty())
      for (size_t i = 0; i < fires.n; ++i)
        std::printf("%" PRId64 " %u %.9g\n", fires.s[i].time, fires.s[i].neuron,
                    fires.s[i].charge);
  }

  nsk_engine_free(eng);
  nsk_network_free(net);
  return status == NSK_OK ? 0 : fail(status);
}

int cmd_bench(std::uint32_t neurons, std::uint32_t synapses, std::int64_t horizon,
              std::uint64_t seed) {
  nsk_bench_report report;
  const nsk_status status = nsk_bench_run(neurons, synapses, horizon, seed, &report);
  if (status != NSK_OK) return fail(status);
  std::printf("neurons %u\n", report.neurons);
  std::printf("synapses %u\n", report.synapses);
  std::printf("horizon %" PRId64 "\n", report.horizon);
  std::printf("host_seconds %.6f\n", report.host_seconds);
  std::printf("timesteps_per_second %.1f\n", report.timesteps_per_second);
  std::printf("spikes_processed %" PRIu64 "\n", report.spikes_processed);
  return 0;
}

int cmd_pipeline(const std::string& config_path, const std::string& values_path,
                 const std::string& out_path) {
  nsk_pipeline* pipeline = nullptr;
  nsk_status status = nsk_pipeline_load_file(config_path.c_str(), &pipeline);
  if (status != NSK_OK) return fail(status);

  StringGuard decoded, timing;
  SpikesGuard trace;
  status = nsk_pipeline_run_values_file(pipeline, values_path.c_str(), &decoded.s,
                                        &timing.s, &trace.s, &trace.n);
  if (status == NSK_OK && !out_path.empty())
    status = nsk_trace_save_file(out_path.c_str(), trace.s, trace.n);
  if (status == NSK_OK) {
    std::printf("# decoded\n%s# timing\n%s", decoded.s, timing.s);
  }
  nsk_pipeline_free(pipeline);
  return status == NSK_OK ? 0 : fail(status);
}

int cmd_car(const std::string& config_path, std::int64_t steps,
            const std::vector<std::uint64_t>& seeds, const std::string& out_prefix) {
  nsk_pipeline* pipeline = nullptr;
  nsk_status status = nsk_pipeline_load_file(config_path.c_str(), &pipeline);
  if (status != NSK_OK) return fail(status);

  for (std::uint64_t seed : seeds) {
    double score = 0.0;
    StringGuard trace;
    status = nsk_car_run(pipeline, steps, seed, &score,
                         out_prefix.empty() ? nullptr : &trace.s);
    if (status != NSK_OK) break;
    double baseline = 0.0;
    status = nsk_car_baseline(steps, seed, &baseline);
    if (status != NSK_OK) break;
    std::printf("seed %" PRIu64 " score %.9g baseline %.9g\n", seed, score, baseline);
    if (!out_prefix.empty()) {
      const std::string path = out_prefix + ".seed" + std::to_string(seed) + ".tsv";
      FILE* f = std::fopen(path.c_str(), "wb");
      if (!f) {
        std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
        nsk_pipeline_free(pipeline);
        return 1;
      }
      std::fputs(trace.s, f);
      std::fclose(f);
    }
  }

  nsk_pipeline_free(pipeline);
  return status == NSK_OK ? 0 : fail(status);
}

int cmd_train(const std::string& ga_path, const std::string& pipeline_path,
              const std::string& out_path) {
  StringGuard stats;
  const nsk_status status =
      nsk_train_car(ga_path.c_str(), pipeline_path.c_str(), out_path.c_str(), &stats.s);
  if (status != NSK_OK) return fail(status);
  std::fputs(stats.s, stdout);
  std::printf("best_network %s\n", out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nsk - spiking neural network toolkit"};
  app.require_subcommand(1);

  std::string network_path, spikes_path, config_path, values_path, out_path, ga_path;
  std::int64_t horizon = 0;
  std::int64_t steps = 500;
  std::uint64_t seed = 1;
  std::uint32_t neurons = 512, synapses = 512;
  std::vector<std::uint64_t> seeds = {1};

  auto* validate = app.add_subcommand("validate", "check a network file");
  validate->add_option("--network", network_path, "network.json")->required();

  auto* run = app.add_subcommand("run", "run a network over a spike trace");
  run->add_option("--network", network_path, "network.json")->required();
  run->add_option("--spikes", spikes_path, "input .spikes trace")->required();
  run->add_option("--horizon", horizon, "timesteps to run")->required();
  run->add_option("--out", out_path, "write output-neuron fires here");

  auto* bench = app.add_subcommand("bench", "seeded throughput benchmark");
  bench->add_option("--neurons", neurons, "network size");
  bench->add_option("--synapses", synapses, "synapse count");
  bench->add_option("--horizon", horizon, "timesteps")->default_val(50000);
  bench->add_option("--seed", seed, "workload seed");

  auto* pipeline = app.add_subcommand("pipeline", "open-loop pipeline over a values file");
  pipeline->add_option("--config", config_path, "pipeline.json")->required();
  pipeline->add_option("--values", values_path, "'<wall_time> <value>' lines")->required();
  pipeline->add_option("--out", out_path, "write the full spike trace here");

  auto* car = app.add_subcommand("car", "closed-loop car-following episodes");
  car->add_option("--config", config_path, "pipeline.json")->required();
  car->add_option("--steps", steps, "control steps per episode");
  car->add_option("--seeds", seeds, "episode seeds")->delimiter(',');
  car->add_option("--out", out_path, "trace file prefix");

  auto* train = app.add_subcommand("train", "evolve a network for the car task");
  train->add_option("--config", ga_path, "ga.json")->required();
  train->add_option("--pipeline", config_path, "pipeline.json")->required();
  train->add_option("--out", out_path, "where to write the best network")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (validate->parsed()) return cmd_validate(network_path);
  if (run->parsed()) return cmd_run(network_path, spikes_path, horizon, out_path);
  if (bench->parsed()) return cmd_bench(neurons, synapses, horizon, seed);
  if (pipeline->parsed()) return cmd_pipeline(config_path, values_path, out_path);
  if (car->parsed()) return cmd_car(config_path, steps, seeds, out_path);
  if (train->parsed()) return cmd_train(ga_path, config_path, out_path);
  return 2;
}
