/* nsk.h - C API for nsk, a spiking-neural-network emulation toolkit.
 *
 * All functions return NSK_OK (0) on success or a status code; the matching
 * human-readable message is available from nsk_last_error() until the next
 * nsk_* call on the same thread. Objects are opaque handles owned by the
 * library; release them with their *_free function. Strings and spike
 * arrays returned through out-parameters are released with nsk_string_free
 * / nsk_spikes_free.
 */
#ifndef NSK_H
#define NSK_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define NSK_API_VERSION 1

typedef enum nsk_status {
  NSK_OK = 0,
  NSK_ERR_IO = 1,         /* file missing/unreadable/unwritable */
  NSK_ERR_PARSE = 2,      /* malformed document: syntax, unknown keys, version */
  NSK_ERR_VALIDATION = 3, /* well-formed document violating an invariant */
  NSK_ERR_CONFIG = 4,     /* inconsistent bindings/ranges/line counts */
  NSK_ERR_DOMAIN = 5,     /* runtime contract violation */
  NSK_ERR_INVALID_ARGUMENT = 6
} nsk_status;

typedef struct nsk_network nsk_network;
typedef struct nsk_engine nsk_engine;
typedef struct nsk_pipeline nsk_pipeline;

typedef struct nsk_spike {
  int64_t time;
  uint32_t neuron;
  double charge;
} nsk_spike;

typedef struct nsk_bench_report {
  uint32_t neurons;
  uint32_t synapses;
  int64_t horizon;
  double host_seconds;
  double timesteps_per_second;
  uint64_t spikes_processed;
} nsk_bench_report;

const char* nsk_version(void);
uint32_t nsk_api_version(void);

/* Thread-local message for the most recent failure on this thread. */
const char* nsk_last_error(void);

void nsk_string_free(char* s);
void nsk_spikes_free(nsk_spike* s);

/* --- networks (network.json schema v1) ---------------------------------- */

/* Loading parses, checks the schema strictly and validates the network; a
 * validation failure reports every violation in nsk_last_error(). */
nsk_status nsk_network_load_file(const char* path, nsk_network** out);
nsk_status nsk_network_load_string(const char* json_text, nsk_network** out);
nsk_status nsk_network_save_file(const nsk_network* net, const char* path);
nsk_status nsk_network_save_string(const nsk_network* net, char** json_out);
void nsk_network_free(nsk_network* net);

uint32_t nsk_network_neuron_count(const nsk_network* net);
uint32_t nsk_network_synapse_count(const nsk_network* net);

/* --- engine -------------------------------------------------------------- */

nsk_status nsk_engine_create(const nsk_network* net, nsk_engine** out);
nsk_status nsk_engine_apply_spike(nsk_engine* eng, uint32_t neuron, double charge,
                                  int64_t at);
/* One timestep. */
nsk_status nsk_engine_step(nsk_engine* eng);
/* Enqueues inputs (times in [0, horizon)) and steps a fresh engine to the
 * horizon. */
nsk_status nsk_engine_run(nsk_engine* eng, const nsk_spike* inputs, size_t n_inputs,
                          int64_t horizon);
int64_t nsk_engine_now(const nsk_engine* eng);
/* Every fire so far, ascending (time, neuron). */
nsk_status nsk_engine_fire_log(const nsk_engine* eng, nsk_spike** out, size_t* n_out);
/* Fires of the designated output neurons only. */
nsk_status nsk_engine_output_fires(const nsk_engine* eng, nsk_spike** out, size_t* n_out);
nsk_status nsk_engine_reset(nsk_engine* eng, int reset_weights);
void nsk_engine_free(nsk_engine* eng);

/* --- spike traces (.spikes text format) ---------------------------------- */

nsk_status nsk_trace_load_file(const char* path, nsk_spike** out, size_t* n_out);
nsk_status nsk_trace_save_file(const char* path, const nsk_spike* events, size_t n);

/* --- pipeline (pipeline.json schema v1) ----------------------------------- */

nsk_status nsk_pipeline_load_file(const char* path, nsk_pipeline** out);
void nsk_pipeline_free(nsk_pipeline* p);

/* Open-loop run over a `<wall_time> <value>` file. decoded_out gets one
 * "<window> <wall_time> <decoded>" line per window; timing_out the modeled
 * timing report. trace_out (optional, may be NULL) gets every engine fire. */
nsk_status nsk_pipeline_run_values_file(nsk_pipeline* p, const char* values_path,
                                        char** decoded_out, char** timing_out,
                                        nsk_spike** trace_out, size_t* trace_len);

/* --- car application ------------------------------------------------------ */

/* Closed-loop car-following episode; score is the mean absolute distance
 * error over the last half. trace_tsv_out (optional) gets the per-step
 * tab-separated trace. */
nsk_status nsk_car_run(nsk_pipeline* p, int64_t steps, uint64_t seed, double* score_out,
                       char** trace_tsv_out);
/* Score of a car that never moves, same world and seed derivation. */
nsk_status nsk_car_baseline(int64_t steps, uint64_t seed, double* score_out);

/* --- training (ga.json schema v1) ----------------------------------------- */

/* Evolves networks against the car task, writes the best network to
 * out_network_path and returns per-generation stats as TSV. */
nsk_status nsk_train_car(const char* ga_path, const char* pipeline_path,
                         const char* out_network_path, char** stats_out);

/* --- benchmark ------------------------------------------------------------ */

nsk_status nsk_bench_run(uint32_t neurons, uint32_t synapses, int64_t horizon,
                         uint64_t seed, nsk_bench_report* out);

#ifdef __cplusplus
}
#endif

#endif /* NSK_H */
