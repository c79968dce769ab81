#include "nsk/coding.hpp"

#include <algorithm>
#include <set>

#include "nsk/error.hpp"

namespace nsk {

namespace {

void check(const std::vector<std::string>& report) {
  if (!report.empty()) throw ConfigError(format_report(report));
}

double normalized(const EncoderSpec& spec, double v) {
  if (!std::isfinite(v)) throw DomainError("encoder input value is not finite");
  const double f = (v - spec.v_min) / (spec.v_max - spec.v_min);
  return std::clamp(f, 0.0, 1.0);
}

void common_coder_checks(const char* what, double window, Timestep min_window,
                         const std::vector<NeuronId>& neurons, std::size_t min_n,
                         std::size_t max_n, std::vector<std::string>& report) {
  if (window < static_cast<double>(min_window))
    report.push_back(std::string(what) + ": window must be >= " + std::to_string(min_window));
  if (neurons.size() < min_n || neurons.size() > max_n) {
    std::string arity = max_n == SIZE_MAX ? (">= " + std::to_string(min_n))
                        : min_n == max_n  ? ("exactly " + std::to_string(min_n))
                                          : (std::to_string(min_n) + ".." + std::to_string(max_n));
    report.push_back(std::string(what) + ": needs " + arity + " bound neurons, got " +
                     std::to_string(neurons.size()));
  }
  std::set<NeuronId> seen;
  for (NeuronId id : neurons)
    if (!seen.insert(id).second)
      report.push_back(std::string(what) + ": neuron " + std::to_string(id) +
                       " bound more than once");
}

const std::vector<Timestep>& bound_times(const DecoderSpec& spec,
                                         const OutputRecord& record, std::size_t slot) {
  const auto* times = record.times_for(spec.neurons[slot]);
  if (!times)
    throw DomainError("decoder: output record has no neuron " +
                      std::to_string(spec.neurons[slot]));
  return *times;
}

}  // namespace

const char* to_string(EncoderKind k) {
  switch (k) {
    case EncoderKind::rate: return "rate";
    case EncoderKind::population: return "population";
    case EncoderKind::temporal: return "temporal";
    case EncoderKind::charge: return "charge";
    case EncoderKind::flipflop: return "flipflop";
  }
  return "?";
}

const char* to_string(DecoderKind k) {
  switch (k) {
    case DecoderKind::count: return "count";
    case DecoderKind::diff: return "diff";
    case DecoderKind::wta: return "wta";
    case DecoderKind::ttfs: return "ttfs";
  }
  return "?";
}

std::vector<std::string> validate_coder(const EncoderSpec& spec) {
  std::vector<std::string> report;
  const std::string what = std::string("encoder(") + to_string(spec.kind) + ")";
  if (!(spec.v_min < spec.v_max))
    report.push_back(what + ": v_min must be < v_max");
  switch (spec.kind) {
    case EncoderKind::rate:
    case EncoderKind::charge:
      common_coder_checks(what.c_str(), static_cast<double>(spec.window), 1, spec.neurons,
                          1, 1, report);
      break;
    case EncoderKind::temporal:
      common_coder_checks(what.c_str(), static_cast<double>(spec.window), 2, spec.neurons,
                          1, 1, report);
      break;
    case EncoderKind::population:
      common_coder_checks(what.c_str(), static_cast<double>(spec.window), 1, spec.neurons,
                          2, SIZE_MAX, report);
      break;
    case EncoderKind::flipflop:
      common_coder_checks(what.c_str(), static_cast<double>(spec.window), 1, spec.neurons,
                          2, 2, report);
      break;
  }
  return report;
}

std::vector<std::string> validate_coder(const DecoderSpec& spec) {
  std::vector<std::string> report;
  const std::string what = std::string("decoder(") + to_string(spec.kind) + ")";
  if (!std::isfinite(spec.scale)) report.push_back(what + ": scale is not finite");
  switch (spec.kind) {
    case DecoderKind::count:
      common_coder_checks(what.c_str(), static_cast<double>(spec.window), 1, spec.neurons,
                          1, 1, report);
      break;
    case DecoderKind::ttfs:
      common_coder_checks(what.c_str(), static_cast<double>(spec.window), 2, spec.neurons,
                          1, 1, report);
      break;
    case DecoderKind::diff:
      common_coder_checks(what.c_str(), static_cast<double>(spec.window), 1, spec.neurons,
                          2, 2, report);
      break;
    case DecoderKind::wta:
      common_coder_checks(what.c_str(), static_cast<double>(spec.window), 1, spec.neurons,
                          2, SIZE_MAX, report);
      break;
  }
  return report;
}

std::vector<SpikeEvent> encode_rate(const EncoderSpec& spec, double v) {
  check(validate_coder(spec));
  const double f = normalized(spec, v);
  const std::int64_t k = round_half_up(f * static_cast<double>(spec.window));
  std::vector<SpikeEvent> out;
  for (std::int64_t t = 0; t < k; ++t) out.push_back({t, spec.neurons[0], 1.0});
  return out;
}

std::vector<SpikeEvent> encode_population(const EncoderSpec& spec, double v) {
  check(validate_coder(spec));
  const double f = normalized(spec, v);
  const auto n = static_cast<std::int64_t>(spec.neurons.size());
  const auto bin = std::min(static_cast<std::int64_t>(std::floor(f * static_cast<double>(n))),
                            n - 1);
  return {{0, spec.neurons[static_cast<std::size_t>(bin)], 1.0}};
}

std::vector<SpikeEvent> encode_temporal(const EncoderSpec& spec, double v) {
  check(validate_coder(spec));
  const double f = normalized(spec, v);
  const std::int64_t t = round_half_up((1.0 - f) * static_cast<double>(spec.window - 1));
  return {{t, spec.neurons[0], 1.0}};
}

std::vector<SpikeEvent> encode_charge(const EncoderSpec& spec, double v) {
  check(validate_coder(spec));
  return {{0, spec.neurons[0], normalized(spec, v)}};
}

std::vector<SpikeEvent> encode_flipflop(const EncoderSpec& spec, double v) {
  check(validate_coder(spec));
  const double f = normalized(spec, v);
  const std::int64_t k = round_half_up(f * static_cast<double>(spec.window));
  std::vector<SpikeEvent> out;
  for (std::int64_t t = 0; t < k; ++t)
    out.push_back({t, spec.neurons[static_cast<std::size_t>(t % 2)], 1.0});
  return out;
}

std::vector<SpikeEvent> encode(const EncoderSpec& spec, double v) {
  switch (spec.kind) {
    case EncoderKind::rate: return encode_rate(spec, v);
    case EncoderKind::population: return encode_population(spec, v);
    case EncoderKind::temporal: return encode_temporal(spec, v);
    case EncoderKind::charge: return encode_charge(spec, v);
    case EncoderKind::flipflop: return encode_flipflop(spec, v);
  }
  throw ConfigError("unknown encoder kind");
}

double decode_count(const DecoderSpec& spec, const OutputRecord& record) {
  check(validate_coder(spec));
  const auto& times = bound_times(spec, record, 0);
  return (static_cast<double>(times.size()) / static_cast<double>(spec.window)) * spec.scale;
}

double decode_diff(const DecoderSpec& spec, const OutputRecord& record) {
  check(validate_coder(spec));
  const auto pos = static_cast<double>(bound_times(spec, record, 0).size());
  const auto neg = static_cast<double>(bound_times(spec, record, 1).size());
  return ((pos - neg) / static_cast<double>(spec.window)) * spec.scale;
}

std::size_t decode_wta(const DecoderSpec& spec, const OutputRecord& record) {
  check(validate_coder(spec));
  std::size_t winner = 0;
  std::size_t best = bound_times(spec, record, 0).size();
  for (std::size_t i = 1; i < spec.neurons.size(); ++i) {
    const std::size_t c = bound_times(spec, record, i).size();
    if (c > best) {
      best = c;
      winner = i;
    }
  }
  return winner;
}

double decode_ttfs(const DecoderSpec& spec, const OutputRecord& record) {
  check(validate_coder(spec));
  const auto& times = bound_times(spec, record, 0);
  if (times.empty()) return 0.0;
  const auto first = static_cast<double>(*std::min_element(times.begin(), times.end()));
  return 1.0 - first / static_cast<double>(spec.window - 1);
}

double decode(const DecoderSpec& spec, const OutputRecord& record) {
  switch (spec.kind) {
    case DecoderKind::count: return decode_count(spec, record);
    case DecoderKind::diff: return decode_diff(spec, record);
    case DecoderKind::wta: return static_cast<double>(decode_wta(spec, record));
    case DecoderKind::ttfs: return decode_ttfs(spec, record);
  }
  throw ConfigError("unknown decoder kind");
}

}  // namespace nsk
