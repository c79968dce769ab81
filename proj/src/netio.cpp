#include "nsk/netio.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nsk/error.hpp"

namespace nsk {

using json = nlohmann::ordered_json;

namespace {

std::string json_type_name(const json& j) {
  if (j.is_object()) return "an object";
  if (j.is_array()) return "an array";
  if (j.is_string()) return "a string";
  if (j.is_boolean()) return "a boolean";
  if (j.is_number()) return "a number";
  if (j.is_null()) return "null";
  return "an unknown value";
}

// Tracks which keys of one JSON object were consumed; done() rejects the
// rest so typos in config files never pass silently.
class Strict {
 public:
  Strict(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ParseError(path_ + ": expected an object");
  }

  const json& require(const char* key) {
    auto it = j_.find(key);
    if (it == j_.end()) throw ParseError(path_ + ": missing key '" + key + "'");
    used_.insert(key);
    return *it;
  }

  const json* optional(const char* key) {
    auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    used_.insert(key);
    return &*it;
  }

  void done() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key()))
        throw ParseError(path_ + ": unknown key '" + it.key() + "'");
  }

  std::string sub(const char* key) const { return path_ + "." + key; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number, got " + json_type_name(j));
  return j.get<double>();
}

std::int64_t as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer())
    throw ParseError(path + ": expected an integer, got " + json_type_name(j));
  return j.get<std::int64_t>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path + ": expected a string, got " + json_type_name(j));
  return j.get<std::string>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ParseError(path + ": expected a boolean, got " + json_type_name(j));
  return j.get<bool>();
}

const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array, got " + json_type_name(j));
  return j;
}

std::vector<NeuronId> as_id_list(const json& j, const std::string& path) {
  std::vector<NeuronId> out;
  for (std::size_t i = 0; i < as_array(j, path).size(); ++i) {
    const auto v = as_integer(j[i], path + "[" + std::to_string(i) + "]");
    if (v < 0) throw ParseError(path + "[" + std::to_string(i) + "]: neuron id must be >= 0");
    out.push_back(static_cast<NeuronId>(v));
  }
  return out;
}

// Converts a byte offset from nlohmann's parse_error into line/column.
std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json parse_top(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                     ": " + e.what());
  }
}

void check_version(Strict& doc) {
  const auto v = as_integer(doc.require("format_version"), doc.sub("format_version"));
  if (v != kFormatVersion)
    throw ParseError("unsupported format_version " + std::to_string(v) + " (expected " +
                     std::to_string(kFormatVersion) + ")");
}

Leak leak_from_string(const std::string& s, const std::string& path) {
  if (s == "none") return Leak::none;
  if (s == "all") return Leak::all;
  throw ParseError(path + ": leak must be \"none\" or \"all\", got \"" + s + "\"");
}

Network parse_network(const json& j, const std::string& path) {
  Strict net(j, path);
  Network out;

  const json& neurons = as_array(net.require("neurons"), net.sub("neurons"));
  for (std::size_t i = 0; i < neurons.size(); ++i) {
    const std::string npath = net.sub("neurons") + "[" + std::to_string(i) + "]";
    Strict sn(neurons[i], npath);
    Neuron n;
    const auto id = as_integer(sn.require("id"), npath + ".id");
    if (id < 0) throw ParseError(npath + ".id: must be >= 0");
    n.id = static_cast<NeuronId>(id);
    n.threshold = as_number(sn.require("threshold"), npath + ".threshold");
    if (const json* leak = sn.optional("leak"))
      n.leak = leak_from_string(as_string(*leak, npath + ".leak"), npath + ".leak");
    if (const json* refr = sn.optional("refractory"))
      n.refractory = as_integer(*refr, npath + ".refractory");
    sn.done();
    out.neurons.push_back(n);
  }

  const json& synapses = as_array(net.require("synapses"), net.sub("synapses"));
  for (std::size_t i = 0; i < synapses.size(); ++i) {
    const std::string spath = net.sub("synapses") + "[" + std::to_string(i) + "]";
    Strict ss(synapses[i], spath);
    Synapse s;
    s.from = static_cast<NeuronId>(as_integer(ss.require("from"), spath + ".from"));
    s.to = static_cast<NeuronId>(as_integer(ss.require("to"), spath + ".to"));
    s.weight = as_number(ss.require("weight"), spath + ".weight");
    s.delay = as_integer(ss.require("delay"), spath + ".delay");
    if (const json* plastic = ss.optional("plastic"))
      s.plastic = as_bool(*plastic, spath + ".plastic");
    ss.done();
    out.synapses.push_back(s);
  }

  out.inputs = as_id_list(net.require("inputs"), net.sub("inputs"));
  out.outputs = as_id_list(net.require("outputs"), net.sub("outputs"));

  if (const json* stdp = net.optional("stdp")) {
    const std::string rpath = net.sub("stdp");
    Strict sr(*stdp, rpath);
    StdpRule rule;
    rule.a_plus = as_number(sr.require("a_plus"), rpath + ".a_plus");
    rule.a_minus = as_number(sr.require("a_minus"), rpath + ".a_minus");
    rule.window = as_integer(sr.require("window"), rpath + ".window");
    rule.w_min = as_number(sr.require("w_min"), rpath + ".w_min");
    rule.w_max = as_number(sr.require("w_max"), rpath + ".w_max");
    sr.done();
    out.stdp = rule;
  }

  net.done();
  return out;
}

json network_to_json(const Network& net_in) {
  Network net = net_in;
  net.normalize();
  json jnet;
  json jneurons = json::array();
  for (const auto& n : net.neurons) {
    json jn;
    jn["id"] = n.id;
    jn["threshold"] = n.threshold;
    jn["leak"] = n.leak == Leak::all ? "all" : "none";
    jn["refractory"] = n.refractory;
    jneurons.push_back(std::move(jn));
  }
  jnet["neurons"] = std::move(jneurons);
  json jsynapses = json::array();
  for (const auto& s : net.synapses) {
    json js;
    js["from"] = s.from;
    js["to"] = s.to;
    js["weight"] = s.weight;
    js["delay"] = s.delay;
    js["plastic"] = s.plastic;
    jsynapses.push_back(std::move(js));
  }
  jnet["synapses"] = std::move(jsynapses);
  jnet["inputs"] = net.inputs;
  jnet["outputs"] = net.outputs;
  if (net.stdp) {
    json jr;
    jr["a_plus"] = net.stdp->a_plus;
    jr["a_minus"] = net.stdp->a_minus;
    jr["window"] = net.stdp->window;
    jr["w_min"] = net.stdp->w_min;
    jr["w_max"] = net.stdp->w_max;
    jnet["stdp"] = std::move(jr);
  }
  return jnet;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

NetworkDocument load_network_document_string(const std::string& text) {
  const json j = parse_top(text);
  Strict doc(j, "document");
  check_version(doc);
  NetworkDocument out;
  if (const json* meta = doc.optional("metadata")) {
    if (!meta->is_object()) throw ParseError("document.metadata: expected an object");
    for (auto it = meta->begin(); it != meta->end(); ++it)
      out.metadata[it.key()] = as_string(it.value(), "document.metadata." + it.key());
  }
  out.network = parse_network(doc.require("network"), "document.network");
  doc.done();
  if (auto report = validate_network(out.network); !report.empty())
    throw ValidationError(format_report(report));
  out.network.normalize();
  return out;
}

NetworkDocument load_network_document(const std::filesystem::path& path) {
  return load_network_document_string(read_text_file(path));
}

Network load_network(const std::filesystem::path& path) {
  return load_network_document(path).network;
}

std::string save_network_string(const Network& net,
                                const std::map<std::string, std::string>& metadata) {
  if (auto report = validate_network(net); !report.empty())
    throw ValidationError(format_report(report));
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["metadata"] = metadata;  // std::map keeps keys sorted
  doc["network"] = network_to_json(net);
  return doc.dump(2) + "\n";
}

void save_network(const Network& net, const std::filesystem::path& path,
                  const std::map<std::string, std::string>& metadata) {
  write_text_file(path, save_network_string(net, metadata));
}

namespace {

EncoderKind encoder_kind_from_string(const std::string& s, const std::string& path) {
  if (s == "rate") return EncoderKind::rate;
  if (s == "population") return EncoderKind::population;
  if (s == "temporal") return EncoderKind::temporal;
  if (s == "charge") return EncoderKind::charge;
  if (s == "flipflop") return EncoderKind::flipflop;
  throw ParseError(path + ": unknown encoder kind \"" + s + "\"");
}

DecoderKind decoder_kind_from_string(const std::string& s, const std::string& path) {
  if (s == "count") return DecoderKind::count;
  if (s == "diff") return DecoderKind::diff;
  if (s == "wta") return DecoderKind::wta;
  if (s == "ttfs") return DecoderKind::ttfs;
  throw ParseError(path + ": unknown decoder kind \"" + s + "\"");
}

}  // namespace

CoderSpec load_coder_spec_string(const std::string& text) {
  const json j = parse_top(text);
  Strict doc(j, "coder");
  check_version(doc);
  const std::string side = as_string(doc.require("coder"), "coder.coder");
  const std::string kind = as_string(doc.require("kind"), "coder.kind");
  CoderSpec out;
  if (side == "encoder") {
    EncoderSpec spec;
    spec.kind = encoder_kind_from_string(kind, "coder.kind");
    spec.v_min = as_number(doc.require("v_min"), "coder.v_min");
    spec.v_max = as_number(doc.require("v_max"), "coder.v_max");
    spec.window = as_integer(doc.require("window"), "coder.window");
    spec.neurons = as_id_list(doc.require("neurons"), "coder.neurons");
    doc.done();
    if (auto report = validate_coder(spec); !report.empty())
      throw ValidationError(format_report(report));
    out = spec;
  } else if (side == "decoder") {
    DecoderSpec spec;
    spec.kind = decoder_kind_from_string(kind, "coder.kind");
    spec.window = as_integer(doc.require("window"), "coder.window");
    spec.neurons = as_id_list(doc.require("neurons"), "coder.neurons");
    if (const json* scale = doc.optional("scale"))
      spec.scale = as_number(*scale, "coder.scale");
    doc.done();
    if (auto report = validate_coder(spec); !report.empty())
      throw ValidationError(format_report(report));
    out = spec;
  } else {
    throw ParseError("coder.coder: expected \"encoder\" or \"decoder\", got \"" + side + "\"");
  }
  return out;
}

CoderSpec load_coder_spec(const std::filesystem::path& path) {
  return load_coder_spec_string(read_text_file(path));
}

std::string save_coder_spec_string(const CoderSpec& spec) {
  json doc;
  doc["format_version"] = kFormatVersion;
  if (const auto* enc = std::get_if<EncoderSpec>(&spec)) {
    if (auto report = validate_coder(*enc); !report.empty())
      throw ValidationError(format_report(report));
    doc["coder"] = "encoder";
    doc["kind"] = to_string(enc->kind);
    doc["v_min"] = enc->v_min;
    doc["v_max"] = enc->v_max;
    doc["window"] = enc->window;
    doc["neurons"] = enc->neurons;
  } else {
    const auto& dec = std::get<DecoderSpec>(spec);
    if (auto report = validate_coder(dec); !report.empty())
      throw ValidationError(format_report(report));
    doc["coder"] = "decoder";
    doc["kind"] = to_string(dec.kind);
    doc["window"] = dec.window;
    doc["neurons"] = dec.neurons;
    doc["scale"] = dec.scale;
  }
  return doc.dump(2) + "\n";
}

void save_coder_spec(const CoderSpec& spec, const std::filesystem::path& path) {
  write_text_file(path, save_coder_spec_string(spec));
}

namespace {

// Splits into trimmed lines, dropping blanks and '#' comments; keeps the
// 1-based line number for error messages.
std::vector<std::pair<std::size_t, std::string>> content_lines(const std::string& text) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    out.push_back({lineno, line.substr(begin, end - begin + 1)});
  }
  return out;
}

}  // namespace

SpikeTrace load_spike_trace_string(const std::string& text) {
  SpikeTrace trace;
  for (const auto& [lineno, line] : content_lines(text)) {
    std::istringstream fields(line);
    std::int64_t time = 0;
    std::int64_t neuron = 0;
    double charge = 0.0;
    std::string extra;
    if (!(fields >> time >> neuron >> charge) || (fields >> extra))
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected '<time> <neuron> <charge>', got '" + line + "'");
    if (time < 0) throw ParseError("line " + std::to_string(lineno) + ": time must be >= 0");
    if (neuron < 0) throw ParseError("line " + std::to_string(lineno) + ": neuron must be >= 0");
    if (!std::isfinite(charge))
      throw ParseError("line " + std::to_string(lineno) + ": charge must be finite");
    trace.push_back({time, static_cast<NeuronId>(neuron), charge});
  }
  std::sort(trace.begin(), trace.end());
  return trace;
}

SpikeTrace load_spike_trace(const std::filesystem::path& path) {
  return load_spike_trace_string(read_text_file(path));
}

std::string save_spike_trace_string(const SpikeTrace& trace_in) {
  SpikeTrace trace = trace_in;
  std::sort(trace.begin(), trace.end());
  std::string out;
  char buf[64];
  for (const auto& ev : trace) {
    std::snprintf(buf, sizeof buf, "%" PRId64 " %u %.9g\n", ev.time, ev.neuron, ev.charge);
    out += buf;
  }
  return out;
}

void save_spike_trace(const SpikeTrace& trace, const std::filesystem::path& path) {
  write_text_file(path, save_spike_trace_string(trace));
}

std::vector<TimedValue> load_values_string(const std::string& text) {
  std::vector<TimedValue> out;
  for (const auto& [lineno, line] : content_lines(text)) {
    std::istringstream fields(line);
    TimedValue tv;
    std::string extra;
    if (!(fields >> tv.wall_time >> tv.value) || (fields >> extra))
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected '<wall_time> <value>', got '" + line + "'");
    if (!out.empty() && tv.wall_time < out.back().wall_time)
      throw DomainError("line " + std::to_string(lineno) +
                        ": values must be sorted by wall time");
    out.push_back(tv);
  }
  return out;
}

std::vector<TimedValue> load_values(const std::filesystem::path& path) {
  return load_values_string(read_text_file(path));
}

namespace {

WireConfig parse_wire(const json& j, const std::string& path) {
  Strict w(j, path);
  WireConfig cfg;
  const std::string mode = as_string(w.require("mode"), path + ".mode");
  if (mode == "binary") {
    cfg.mode = WireMode::binary;
  } else if (mode == "pwm") {
    cfg.mode = WireMode::pwm;
  } else {
    throw ParseError(path + ".mode: expected \"binary\" or \"pwm\", got \"" + mode + "\"");
  }
  cfg.wire_hz = as_number(w.require("wire_hz"), path + ".wire_hz");
  cfg.lines = static_cast<std::uint32_t>(as_integer(w.require("lines"), path + ".lines"));
  if (const json* slots = w.optional("pwm_slots")) {
    if (cfg.mode != WireMode::pwm)
      throw ParseError(path + ".pwm_slots: only valid in pwm mode");
    cfg.pwm_slots = static_cast<std::uint32_t>(as_integer(*slots, path + ".pwm_slots"));
  }
  w.done();
  if (auto report = validate_wire(cfg); !report.empty())
    throw ValidationError(format_report(report));
  return cfg;
}

}  // namespace

PipelineConfig load_pipeline(const std::filesystem::path& path) {
  const json j = parse_top(read_text_file(path));
  Strict doc(j, "pipeline");
  check_version(doc);

  const auto base = path.parent_path();
  auto resolve = [&](const std::string& ref) { return base / ref; };

  PipelineConfig cfg;
  const std::string enc_ref = as_string(doc.require("encoder"), "pipeline.encoder");
  const std::string net_ref = as_string(doc.require("network"), "pipeline.network");
  const std::string dec_ref = as_string(doc.require("decoder"), "pipeline.decoder");

  CoderSpec enc = load_coder_spec(resolve(enc_ref));
  if (!std::holds_alternative<EncoderSpec>(enc))
    throw ConfigError("pipeline.encoder: " + enc_ref + " is not an encoder spec");
  cfg.encoder = std::get<EncoderSpec>(enc);

  cfg.network = load_network(resolve(net_ref));

  CoderSpec dec = load_coder_spec(resolve(dec_ref));
  if (!std::holds_alternative<DecoderSpec>(dec))
    throw ConfigError("pipeline.decoder: " + dec_ref + " is not a decoder spec");
  cfg.decoder = std::get<DecoderSpec>(dec);

  cfg.input_wire = parse_wire(doc.require("input_wire"), "pipeline.input_wire");
  cfg.output_wire = parse_wire(doc.require("output_wire"), "pipeline.output_wire");
  cfg.neuroprocessor_hz =
      as_number(doc.require("neuroprocessor_hz"), "pipeline.neuroprocessor_hz");
  doc.done();

  if (auto report = validate_pipeline(cfg); !report.empty())
    throw ConfigError(format_report(report));
  return cfg;
}

GAConfig load_ga_string(const std::string& text) {
  const json j = parse_top(text);
  Strict doc(j, "ga");
  check_version(doc);

  GAConfig cfg;
  cfg.population = static_cast<int>(as_integer(doc.require("population"), "ga.population"));
  cfg.generations =
      static_cast<int>(as_integer(doc.require("generations"), "ga.generations"));
  cfg.tournament_k =
      static_cast<int>(as_integer(doc.require("tournament_k"), "ga.tournament_k"));
  cfg.mutation_rate = as_number(doc.require("mutation_rate"), "ga.mutation_rate");
  cfg.crossover_rate = as_number(doc.require("crossover_rate"), "ga.crossover_rate");
  cfg.elitism = static_cast<int>(as_integer(doc.require("elitism"), "ga.elitism"));
  cfg.seed = static_cast<std::uint64_t>(as_integer(doc.require("seed"), "ga.seed"));
  cfg.max_neurons = static_cast<int>(as_integer(doc.require("max_neurons"), "ga.max_neurons"));
  cfg.max_synapses =
      static_cast<int>(as_integer(doc.require("max_synapses"), "ga.max_synapses"));

  {
    Strict b(doc.require("bounds"), "ga.bounds");
    auto pair_of = [&](const char* key, double& lo, double& hi) {
      const std::string p = std::string("ga.bounds.") + key;
      const json& arr = as_array(b.require(key), p);
      if (arr.size() != 2) throw ParseError(p + ": expected [lo, hi]");
      lo = as_number(arr[0], p + "[0]");
      hi = as_number(arr[1], p + "[1]");
    };
    pair_of("weight", cfg.bounds.weight_min, cfg.bounds.weight_max);
    pair_of("threshold", cfg.bounds.threshold_min, cfg.bounds.threshold_max);
    const json& darr = as_array(b.require("delay"), "ga.bounds.delay");
    if (darr.size() != 2) throw ParseError("ga.bounds.delay: expected [lo, hi]");
    cfg.bounds.delay_min = as_integer(darr[0], "ga.bounds.delay[0]");
    cfg.bounds.delay_max = as_integer(darr[1], "ga.bounds.delay[1]");
    b.done();
  }

  if (const json* fit = doc.optional("fitness")) {
    Strict f(*fit, "ga.fitness");
    cfg.fitness.steps = as_integer(f.require("steps"), "ga.fitness.steps");
    cfg.fitness.seeds.clear();
    const json& seeds = as_array(f.require("seeds"), "ga.fitness.seeds");
    for (std::size_t i = 0; i < seeds.size(); ++i)
      cfg.fitness.seeds.push_back(static_cast<std::uint64_t>(
          as_integer(seeds[i], "ga.fitness.seeds[" + std::to_string(i) + "]")));
    f.done();
  }
  doc.done();

  if (auto report = validate_ga(cfg); !report.empty())
    throw ValidationError(format_report(report));
  return cfg;
}

GAConfig load_ga(const std::filesystem::path& path) {
  return load_ga_string(read_text_file(path));
}

}  // namespace nsk
