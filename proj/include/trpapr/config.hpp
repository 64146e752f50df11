#ifndef TRPAPR_CONFIG_HPP
#define TRPAPR_CONFIG_HPP

// Experiment configuration and its JSON file format. Files may carry // and
// /* */ comments; emit() writes plain JSON that parses back to the same value.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "trpapr/error.hpp"
#include "trpapr/qcqp.hpp"
#include "trpapr/signal.hpp"
#include "trpapr/tone_plan.hpp"

namespace trpapr {

struct ExperimentConfig {
  // OFDM symbol layout.
  std::size_t subcarriers = 512;
  std::size_t reserved = 64;
  Modulation modulation = Modulation::Psk;
  std::size_t order = 16;
  std::string tone_plan = "spread";  // "spread", "equispaced" or "file:<path>"
  std::size_t oversampling = 1;      // PAPR evaluation rate, multiples of Nyquist

  struct Solver {
    std::vector<double> p_values{10.0, 50.0, 100.0, 150.0};
    double alpha = 1.0;
    std::size_t iterations = 2000;
    bool operator==(const Solver&) const = default;
  } solver;

  struct Baseline {
    std::optional<double> p_max;  // unset: number of reserved tones
    double tol = 1e-9;
    std::size_t max_iters = 500;
    std::vector<double> schedule{8.0, 32.0, 128.0, 512.0, 2048.0};
    bool operator==(const Baseline&) const = default;
  } baseline;

  struct Table2 {
    std::size_t symbols = 100;
    bool operator==(const Table2&) const = default;
  } table2;

  struct Ccdf {
    std::size_t symbols = 2000;
    double p = 50.0;
    double threshold_min_db = 2.0;
    double threshold_max_db = 12.0;
    double threshold_step_db = 0.1;
    bool operator==(const Ccdf&) const = default;
  } ccdf;

  struct Sensing {
    double carrier_hz = 26e9;
    double subcarrier_spacing_hz = 450e3;
    std::vector<double> snr_db{-30.0, -25.0, -20.0, -15.0, -10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
    std::size_t trials = 100;
    std::vector<std::size_t> delays{7};
    double p = 50.0;
    bool operator==(const Sensing&) const = default;
  } sensing;

  std::uint64_t seed = 1;
  std::string output_dir = "out";

  bool operator==(const ExperimentConfig&) const = default;

  double effective_p_max() const { return baseline.p_max.value_or(static_cast<double>(reserved)); }

  QcqpConfig qcqp() const {
    QcqpConfig q;
    q.p_max = effective_p_max();
    q.tol = baseline.tol;
    q.max_iters = baseline.max_iters;
    q.schedule = baseline.schedule;
    return q;
  }

  Constellation constellation() const { return Constellation::make(modulation, order); }

  TonePlan plan() const {
    if (tone_plan == "spread") return TonePlan::spread(subcarriers, reserved);
    if (tone_plan == "equispaced") return TonePlan::equispaced(subcarriers, reserved);
    if (tone_plan.rfind("file:", 0) == 0) {
      TonePlan p = read_tone_plan_file(tone_plan.substr(5), subcarriers);
      if (p.num_reserved() != reserved) {
        throw RejectedInput("tone plan file lists " + std::to_string(p.num_reserved()) +
                            " reserved tones, config expects " + std::to_string(reserved));
      }
      return p;
    }
    throw RejectedInput("unknown tone_plan '" + tone_plan + "'");
  }

  /// CCDF thresholds min, min + step, ... up to max (inclusive within 1e-9).
  std::vector<double> thresholds() const {
    std::vector<double> out;
    for (std::size_t i = 0;; ++i) {
      const double t = ccdf.threshold_min_db + static_cast<double>(i) * ccdf.threshold_step_db;
      if (t > ccdf.threshold_max_db + 1e-9) break;
      out.push_back(t);
    }
    return out;
  }

  void validate() const {
    auto fail = [](const std::string& m) { throw RejectedInput("config: " + m); };
    if (subcarriers == 0) fail("ofdm.subcarriers must be positive");
    if (reserved > subcarriers) fail("ofdm.reserved exceeds ofdm.subcarriers");
    if (oversampling == 0) fail("ofdm.oversampling must be >= 1");
    (void)constellation();
    (void)plan();
    if (solver.p_values.empty()) fail("solver.p must list at least one exponent");
    for (double p : solver.p_values) {
      if (!std::isfinite(p) || p < 2.0) fail("solver.p entries must be >= 2");
    }
    if (!(solver.alpha > 0.0)) fail("solver.alpha must be > 0");
    qcqp().validate();
    if (table2.symbols == 0) fail("table2.symbols must be >= 1");
    if (ccdf.symbols == 0) fail("ccdf.symbols must be >= 1");
    if (!(ccdf.p >= 2.0)) fail("ccdf.p must be >= 2");
    if (!(ccdf.threshold_step_db > 0.0) || ccdf.threshold_max_db < ccdf.threshold_min_db) {
      fail("ccdf threshold grid must be strictly increasing");
    }
    if (sensing.trials == 0) fail("sensing.trials must be >= 1");
    if (sensing.delays.size() != 1) fail("sensing.delays must hold exactly one target delay");
    for (std::size_t d : sensing.delays) {
      if (d >= subcarriers) fail("sensing.delays must be below ofdm.subcarriers");
    }
    if (!(sensing.p >= 2.0)) fail("sensing.p must be >= 2");
    if (!(sensing.subcarrier_spacing_hz > 0.0) || !(sensing.carrier_hz > 0.0)) {
      fail("sensing frequencies must be positive");
    }
  }
};

inline nlohmann::ordered_json emit_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["ofdm"] = {{"subcarriers", c.subcarriers},
               {"reserved", c.reserved},
               {"modulation", c.modulation == Modulation::Psk ? "psk" : "qam"},
               {"order", c.order},
               {"tone_plan", c.tone_plan},
               {"oversampling", c.oversampling}};
  j["solver"] = {{"p", c.solver.p_values}, {"alpha", c.solver.alpha}, {"iterations", c.solver.iterations}};
  nlohmann::ordered_json base;
  base["p_max"] = c.baseline.p_max ? nlohmann::ordered_json(*c.baseline.p_max) : nlohmann::ordered_json(nullptr);
  base["tol"] = c.baseline.tol;
  base["max_iters"] = c.baseline.max_iters;
  base["schedule"] = c.baseline.schedule;
  j["baseline"] = base;
  j["table2"] = {{"symbols", c.table2.symbols}};
  j["ccdf"] = {{"symbols", c.ccdf.symbols},
               {"p", c.ccdf.p},
               {"threshold_min_db", c.ccdf.threshold_min_db},
               {"threshold_max_db", c.ccdf.threshold_max_db},
               {"threshold_step_db", c.ccdf.threshold_step_db}};
  j["sensing"] = {{"carrier_hz", c.sensing.carrier_hz},
                  {"subcarrier_spacing_hz", c.sensing.subcarrier_spacing_hz},
                  {"snr_db", c.sensing.snr_db},
                  {"trials", c.sensing.trials},
                  {"delays", c.sensing.delays},
                  {"p", c.sensing.p}};
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  return j;
}

inline std::string emit(const ExperimentConfig& c) { return emit_json(c).dump(2) + "\n"; }

namespace detail {

template <class T>
void read_field(const nlohmann::json& obj, const char* key, T& out, const std::string& section) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw RejectedInput("config: bad value for " + section + "." + key);
  }
}

inline const nlohmann::json& section(const nlohmann::json& root, const char* name) {
  static const nlohmann::json empty = nlohmann::json::object();
  if (!root.contains(name)) return empty;
  if (!root.at(name).is_object()) throw RejectedInput(std::string("config: section '") + name + "' must be an object");
  return root.at(name);
}

}  // namespace detail

/// Missing keys keep their defaults; unknown keys are ignored.
inline ExperimentConfig parse_config(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw RejectedInput(std::string("config: ") + e.what());
  }
  if (!root.is_object()) throw RejectedInput("config: top level must be an object");

  ExperimentConfig c;
  const auto& ofdm = detail::section(root, "ofdm");
  detail::read_field(ofdm, "subcarriers", c.subcarriers, "ofdm");
  detail::read_field(ofdm, "reserved", c.reserved, "ofdm");
  std::string mod = c.modulation == Modulation::Psk ? "psk" : "qam";
  detail::read_field(ofdm, "modulation", mod, "ofdm");
  if (mod == "psk") {
    c.modulation = Modulation::Psk;
  } else if (mod == "qam") {
    c.modulation = Modulation::Qam;
  } else {
    throw RejectedInput("config: ofdm.modulation must be \"psk\" or \"qam\"");
  }
  detail::read_field(ofdm, "order", c.order, "ofdm");
  detail::read_field(ofdm, "tone_plan", c.tone_plan, "ofdm");
  detail::read_field(ofdm, "oversampling", c.oversampling, "ofdm");

  const auto& solver = detail::section(root, "solver");
  detail::read_field(solver, "p", c.solver.p_values, "solver");
  detail::read_field(solver, "alpha", c.solver.alpha, "solver");
  detail::read_field(solver, "iterations", c.solver.iterations, "solver");

  const auto& base = detail::section(root, "baseline");
  if (base.contains("p_max") && !base.at("p_max").is_null()) {
    double v = 0.0;
    detail::read_field(base, "p_max", v, "baseline");
    c.baseline.p_max = v;
  }
  detail::read_field(base, "tol", c.baseline.tol, "baseline");
  detail::read_field(base, "max_iters", c.baseline.max_iters, "baseline");
  detail::read_field(base, "schedule", c.baseline.schedule, "baseline");

  detail::read_field(detail::section(root, "table2"), "symbols", c.table2.symbols, "table2");

  const auto& ccdf = detail::section(root, "ccdf");
  detail::read_field(ccdf, "symbols", c.ccdf.symbols, "ccdf");
  detail::read_field(ccdf, "p", c.ccdf.p, "ccdf");
  detail::read_field(ccdf, "threshold_min_db", c.ccdf.threshold_min_db, "ccdf");
  detail::read_field(ccdf, "threshold_max_db", c.ccdf.threshold_max_db, "ccdf");
  detail::read_field(ccdf, "threshold_step_db", c.ccdf.threshold_step_db, "ccdf");

  const auto& sens = detail::section(root, "sensing");
  detail::read_field(sens, "carrier_hz", c.sensing.carrier_hz, "sensing");
  detail::read_field(sens, "subcarrier_spacing_hz", c.sensing.subcarrier_spacing_hz, "sensing");
  detail::read_field(sens, "snr_db", c.sensing.snr_db, "sensing");
  detail::read_field(sens, "trials", c.sensing.trials, "sensing");
  detail::read_field(sens, "delays", c.sensing.delays, "sensing");
  detail::read_field(sens, "p", c.sensing.p, "sensing");

  detail::read_field(root, "seed", c.seed, "");
  detail::read_field(root, "output_dir", c.output_dir, "");
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RejectedInput("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace trpapr

#endif  // TRPAPR_CONFIG_HPP
