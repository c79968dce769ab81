#include "nsk.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>

#include "nsk/bench.hpp"
#include "nsk/car.hpp"
#include "nsk/engine.hpp"
#include "nsk/error.hpp"
#include "nsk/netio.hpp"
#include "nsk/pipeline.hpp"

struct nsk_network {
  nsk::Network net;
};

struct nsk_engine {
  nsk::Engine engine;
};

struct nsk_pipeline {
  nsk::PipelineConfig cfg;
};

namespace {

thread_local std::string g_last_error;

nsk_status status_of(const nsk::Error& e) {
  switch (e.code()) {
    case nsk::Error::Code::io: return NSK_ERR_IO;
    case nsk::Error::Code::parse: return NSK_ERR_PARSE;
    case nsk::Error::Code::validation: return NSK_ERR_VALIDATION;
    case nsk::Error::Code::config: return NSK_ERR_CONFIG;
    case nsk::Error::Code::domain: return NSK_ERR_DOMAIN;
  }
  return NSK_ERR_DOMAIN;
}

// Runs the body, translating exceptions into status codes + the thread-local
// message. Every entry point funnels through here.
template <typename Fn>
nsk_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return NSK_OK;
  } catch (const nsk::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NSK_ERR_DOMAIN;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nsk_spike* dup_spikes(const std::vector<nsk::SpikeEvent>& events) {
  nsk_spike* out = new nsk_spike[events.size() ? events.size() : 1];
  for (std::size_t i = 0; i < events.size(); ++i)
    out[i] = {events[i].time, events[i].neuron, events[i].charge};
  return out;
}

std::vector<nsk::SpikeEvent> to_events(const nsk_spike* spikes, size_t n) {
  std::vector<nsk::SpikeEvent> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i)
    out.push_back({spikes[i].time, spikes[i].neuron, spikes[i].charge});
  return out;
}

nsk_status invalid_argument(const char* msg) {
  g_last_error = msg;
  return NSK_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* nsk_version(void) { return "1.0.0"; }

uint32_t nsk_api_version(void) { return NSK_API_VERSION; }

const char* nsk_last_error(void) { return g_last_error.c_str(); }

void nsk_string_free(char* s) { delete[] s; }

void nsk_spikes_free(nsk_spike* s) { delete[] s; }

nsk_status nsk_network_load_file(const char* path, nsk_network** out) {
  if (!path || !out) return invalid_argument("null argument");
  return guarded([&] { *out = new nsk_network{nsk::load_network(path)}; });
}

nsk_status nsk_network_load_string(const char* json_text, nsk_network** out) {
  if (!json_text || !out) return invalid_argument("null argument");
  return guarded(
      [&] { *out = new nsk_network{nsk::load_network_document_string(json_text).network}; });
}

nsk_status nsk_network_save_file(const nsk_network* net, const char* path) {
  if (!net || !path) return invalid_argument("null argument");
  return guarded([&] { nsk::save_network(net->net, path); });
}

nsk_status nsk_network_save_string(const nsk_network* net, char** json_out) {
  if (!net || !json_out) return invalid_argument("null argument");
  return guarded([&] { *json_out = dup_string(nsk::save_network_string(net->net)); });
}

void nsk_network_free(nsk_network* net) { delete net; }

uint32_t nsk_network_neuron_count(const nsk_network* net) {
  return net ? static_cast<uint32_t>(net->net.neurons.size()) : 0;
}

uint32_t nsk_network_synapse_count(const nsk_network* net) {
  return net ? static_cast<uint32_t>(net->net.synapses.size()) : 0;
}

nsk_status nsk_engine_create(const nsk_network* net, nsk_engine** out) {
  if (!net || !out) return invalid_argument("null argument");
  return guarded([&] { *out = new nsk_engine{nsk::Engine(net->net)}; });
}

nsk_status nsk_engine_apply_spike(nsk_engine* eng, uint32_t neuron, double charge,
                                  int64_t at) {
  if (!eng) return invalid_argument("null engine");
  return guarded([&] { eng->engine.apply_input_spike(neuron, charge, at); });
}

nsk_status nsk_engine_step(nsk_engine* eng) {
  if (!eng) return invalid_argument("null engine");
  return guarded([&] { eng->engine.step(); });
}

nsk_status nsk_engine_run(nsk_engine* eng, const nsk_spike* inputs, size_t n_inputs,
                          int64_t horizon) {
  if (!eng || (n_inputs > 0 && !inputs)) return invalid_argument("null argument");
  return guarded([&] {
    const auto events = to_events(inputs, n_inputs);
    eng->engine.run(events, horizon);
  });
}

int64_t nsk_engine_now(const nsk_engine* eng) { return eng ? eng->engine.now() : -1; }

nsk_status nsk_engine_fire_log(const nsk_engine* eng, nsk_spike** out, size_t* n_out) {
  if (!eng || !out || !n_out) return invalid_argument("null argument");
  return guarded([&] {
    *out = dup_spikes(eng->engine.fire_log());
    *n_out = eng->engine.fire_log().size();
  });
}

nsk_status nsk_engine_output_fires(const nsk_engine* eng, nsk_spike** out, size_t* n_out) {
  if (!eng || !out || !n_out) return invalid_argument("null argument");
  return guarded([&] {
    const nsk::OutputRecord record = eng->engine.output_record();
    std::vector<nsk::SpikeEvent> events;
    for (std::size_t i = 0; i < record.neurons.size(); ++i)
      for (nsk::Timestep t : record.fire_times[i])
        events.push_back({t, record.neurons[i], 1.0});
    std::sort(events.begin(), events.end());
    *out = dup_spikes(events);
    *n_out = events.size();
  });
}

nsk_status nsk_engine_reset(nsk_engine* eng, int reset_weights) {
  if (!eng) return invalid_argument("null engine");
  return guarded([&] { eng->engine.reset(reset_weights != 0); });
}

void nsk_engine_free(nsk_engine* eng) { delete eng; }

nsk_status nsk_trace_load_file(const char* path, nsk_spike** out, size_t* n_out) {
  if (!path || !out || !n_out) return invalid_argument("null argument");
  return guarded([&] {
    const nsk::SpikeTrace trace = nsk::load_spike_trace(path);
    *out = dup_spikes(trace);
    *n_out = trace.size();
  });
}

nsk_status nsk_trace_save_file(const char* path, const nsk_spike* events, size_t n) {
  if (!path || (n > 0 && !events)) return invalid_argument("null argument");
  return guarded([&] { nsk::save_spike_trace(to_events(events, n), path); });
}

nsk_status nsk_pipeline_load_file(const char* path, nsk_pipeline** out) {
  if (!path || !out) return invalid_argument("null argument");
  return guarded([&] { *out = new nsk_pipeline{nsk::load_pipeline(path)}; });
}

void nsk_pipeline_free(nsk_pipeline* p) { delete p; }

nsk_status nsk_pipeline_run_values_file(nsk_pipeline* p, const char* values_path,
                                        char** decoded_out, char** timing_out,
                                        nsk_spike** trace_out, size_t* trace_len) {
  if (!p || !values_path || !decoded_out || !timing_out)
    return invalid_argument("null argument");
  if ((trace_out == nullptr) != (trace_len == nullptr))
    return invalid_argument("trace_out and trace_len must be passed together");
  return guarded([&] {
    const auto values = nsk::load_values(values_path);
    const nsk::OpenLoopResult result = nsk::run_pipeline_open(p->cfg, values);
    *decoded_out = dup_string(result.decoded_text());
    *timing_out = dup_string(result.timing.to_text());
    if (trace_out) {
      *trace_out = dup_spikes(result.trace);
      *trace_len = result.trace.size();
    }
  });
}

nsk_status nsk_car_run(nsk_pipeline* p, int64_t steps, uint64_t seed, double* score_out,
                       char** trace_tsv_out) {
  if (!p || !score_out) return invalid_argument("null argument");
  return guarded([&] {
    const nsk::CarEpisodeResult episode =
        nsk::car_episode(p->cfg, nsk::CarParams{}, steps, seed);
    *score_out = episode.score;
    if (trace_tsv_out) *trace_tsv_out = dup_string(nsk::episode_trace_tsv(episode));
  });
}

nsk_status nsk_car_baseline(int64_t steps, uint64_t seed, double* score_out) {
  if (!score_out) return invalid_argument("null argument");
  return guarded(
      [&] { *score_out = nsk::car_baseline_score(nsk::CarParams{}, steps, seed); });
}

nsk_status nsk_train_car(const char* ga_path, const char* pipeline_path,
                         const char* out_network_path, char** stats_out) {
  if (!ga_path || !pipeline_path || !out_network_path || !stats_out)
    return invalid_argument("null argument");
  return guarded([&] {
    const nsk::GAConfig ga = nsk::load_ga(ga_path);
    const nsk::PipelineConfig cfg = nsk::load_pipeline(pipeline_path);
    const nsk::EvolveResult result = nsk::train_car(ga, cfg, nsk::CarParams{});
    nsk::save_network(result.best, out_network_path);
    *stats_out = dup_string(nsk::stats_tsv(result.stats));
  });
}

nsk_status nsk_bench_run(uint32_t neurons, uint32_t synapses, int64_t horizon,
                         uint64_t seed, nsk_bench_report* out) {
  if (!out) return invalid_argument("null report");
  return guarded([&] {
    const nsk::BenchReport r = nsk::run_bench(neurons, synapses, horizon, seed);
    out->neurons = r.neurons;
    out->synapses = r.synapses;
    out->horizon = r.horizon;
    out->host_seconds = r.host_seconds;
    out->timesteps_per_second = r.timesteps_per_second;
    out->spikes_processed = r.spikes_processed;
  });
}

}  // extern "C"
