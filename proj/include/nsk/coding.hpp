#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "nsk/network.hpp"

namespace nsk {

// One rounding rule everywhere: round half up.
inline std::int64_t round_half_up(double x) {
  return static_cast<std::int64_t>(std::floor(x + 0.5));
}

enum class EncoderKind { rate, population, temporal, charge, flipflop };
enum class DecoderKind { count, diff, wta, ttfs };

// Declarative description of one encoder instance. `neurons` are the bound
// input neurons: population needs >= 2, flipflop exactly 2, the rest
// exactly 1. Values outside [v_min, v_max] clamp (sensors saturate).
struct EncoderSpec {
  EncoderKind kind = EncoderKind::rate;
  double v_min = 0.0;
  double v_max = 1.0;
  Timestep window = 1;  // T
  std::vector<NeuronId> neurons;

  bool operator==(const EncoderSpec&) const = default;
};

// Declarative description of one decoder instance. diff needs exactly 2
// bound output neurons (positive, negative), wta >= 2, the rest exactly 1.
struct DecoderSpec {
  DecoderKind kind = DecoderKind::count;
  Timestep window = 1;  // T
  std::vector<NeuronId> neurons;
  double scale = 1.0;

  bool operator==(const DecoderSpec&) const = default;
};

std::vector<std::string> validate_coder(const EncoderSpec& spec);
std::vector<std::string> validate_coder(const DecoderSpec& spec);

const char* to_string(EncoderKind k);
const char* to_string(DecoderKind k);

// All encoders clamp v into [v_min, v_max] and emit spikes only at
// timesteps [0, T-1] on the spec's bound neurons. Non-finite v is an error.

// k = round(f*T) spikes of charge 1.0 at t = 0..k-1.
std::vector<SpikeEvent> encode_rate(const EncoderSpec& spec, double v);

// One spike at t=0 on neuron index min(floor(f*n), n-1); bins are half-open
// except the last, which is closed.
std::vector<SpikeEvent> encode_population(const EncoderSpec& spec, double v);

// One spike at t = round((1-f)*(T-1)); larger values spike earlier. T >= 2.
std::vector<SpikeEvent> encode_temporal(const EncoderSpec& spec, double v);

// One spike at t=0 whose charge carries the normalized value.
std::vector<SpikeEvent> encode_charge(const EncoderSpec& spec, double v);

// k = round(f*T) spikes at t = 0..k-1 alternating between the two bound
// neurons, first spike on the first.
std::vector<SpikeEvent> encode_flipflop(const EncoderSpec& spec, double v);

// Dispatch on spec.kind.
std::vector<SpikeEvent> encode(const EncoderSpec& spec, double v);

// (spike count / T) * scale.
double decode_count(const DecoderSpec& spec, const OutputRecord& record);

// ((count(P) - count(N)) / T) * scale; positive means the P-bound action.
double decode_diff(const DecoderSpec& spec, const OutputRecord& record);

// Index of the bound neuron with the most spikes; ties go to the lowest index.
std::size_t decode_wta(const DecoderSpec& spec, const OutputRecord& record);

// 1 - t/(T-1) for the first fire at t, 0 if the neuron never fires. T >= 2.
double decode_ttfs(const DecoderSpec& spec, const OutputRecord& record);

// Dispatch on spec.kind; decode_wta's index is returned as a double.
double decode(const DecoderSpec& spec, const OutputRecord& record);

}  // namespace nsk
