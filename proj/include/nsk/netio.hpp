#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "nsk/coding.hpp"
#include "nsk/evolve.hpp"
#include "nsk/network.hpp"
#include "nsk/pipeline.hpp"

namespace nsk {

inline constexpr int kFormatVersion = 1;

// network.json schema v1. Loading is strict: unknown keys anywhere fail, the
// embedded network must validate. Saving is canonical: fixed key order,
// neurons sorted by id, synapses by (from, to); equal documents serialize
// byte-identically.
struct NetworkDocument {
  int format_version = kFormatVersion;
  std::map<std::string, std::string> metadata;
  Network network;

  bool operator==(const NetworkDocument&) const = default;
};

NetworkDocument load_network_document_string(const std::string& text);
NetworkDocument load_network_document(const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

std::string save_network_string(const Network& net,
                                const std::map<std::string, std::string>& metadata = {});
void save_network(const Network& net, const std::filesystem::path& path,
                  const std::map<std::string, std::string>& metadata = {});

// coder.json schema v1.
using CoderSpec = std::variant<EncoderSpec, DecoderSpec>;

CoderSpec load_coder_spec_string(const std::string& text);
CoderSpec load_coder_spec(const std::filesystem::path& path);
std::string save_coder_spec_string(const CoderSpec& spec);
void save_coder_spec(const CoderSpec& spec, const std::filesystem::path& path);

// .spikes trace format: one `<time> <neuron> <charge>` per line, `#`
// comments and blank lines ignored, events re-sorted on load, charge
// printed with up to 9 significant digits.
using SpikeTrace = std::vector<SpikeEvent>;

SpikeTrace load_spike_trace_string(const std::string& text);
SpikeTrace load_spike_trace(const std::filesystem::path& path);
std::string save_spike_trace_string(const SpikeTrace& trace);
void save_spike_trace(const SpikeTrace& trace, const std::filesystem::path& path);

// Open-loop pipeline input: one `<wall_time> <value>` per line, `#` comments
// allowed, wall times must be non-decreasing.
std::vector<TimedValue> load_values_string(const std::string& text);
std::vector<TimedValue> load_values(const std::filesystem::path& path);

// pipeline.json schema v1: encoder/network/decoder file references (resolved
// relative to the pipeline file), wire configs and the engine clock.
PipelineConfig load_pipeline(const std::filesystem::path& path);

// ga.json schema v1.
GAConfig load_ga_string(const std::string& text);
GAConfig load_ga(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace nsk
