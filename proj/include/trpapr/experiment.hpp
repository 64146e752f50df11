#ifndef TRPAPR_EXPERIMENT_HPP
#define TRPAPR_EXPERIMENT_HPP

// Seeded Monte Carlo drivers: PAPR/runtime table, CCDF, convergence traces,
// and the sensing comparison. Every symbol or trial draws its randomness from
// derive_seed(cfg.seed, stream, index), and per-task results are reduced in
// index order, so outputs do not depend on the worker count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "trpapr/config.hpp"
#include "trpapr/parallel.hpp"
#include "trpapr/pgd.hpp"
#include "trpapr/qcqp.hpp"
#include "trpapr/random.hpp"
#include "trpapr/sensing.hpp"
#include "trpapr/signal.hpp"
#include "trpapr/table.hpp"
#include "trpapr/tone_plan.hpp"

namespace trpapr {

namespace stream {
inline constexpr std::uint64_t kData = 1;
inline constexpr std::uint64_t kInit = 2;
inline constexpr std::uint64_t kSensing = 3;
inline constexpr std::uint64_t kSensingNoise = 4;
}  // namespace stream

/// Data symbols of symbol `index`: one random constellation point per data subcarrier.
inline ComplexSignal draw_data(const ExperimentConfig& cfg, const TonePlan& plan, std::uint64_t index) {
  Rng rng(derive_seed(cfg.seed, stream::kData, index));
  const Constellation cons = cfg.constellation();
  return map_symbols(random_labels(rng, plan.num_data(), cons.order()), cons);
}

inline SolverConfig proposed_config(const ExperimentConfig& cfg, double p, std::uint64_t index) {
  SolverConfig s;
  s.p = p;
  s.alpha = cfg.solver.alpha;
  s.iterations = cfg.solver.iterations;
  s.init = RandomPhases{derive_seed(cfg.seed, stream::kInit, index)};
  return s;
}

/// PAPR of the composite symbol at the configured oversampling factor.
inline double composite_papr_db(const ExperimentConfig& cfg, const TonePlan& plan,
                                const ComplexSignal& data, std::span<const cplx> reserved) {
  const ComplexSignal spectrum = embed(data.samples(), reserved, plan);
  return papr_db_oversampled(spectrum, cfg.oversampling);
}

inline std::string method_name(double p) {
  std::ostringstream ss;
  ss << "proposed p=" << p;
  return ss.str();
}

inline double mean_of(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return v.empty() ? std::nan("") : acc / static_cast<double>(v.size());
}

inline double median_of(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// ---------------------------------------------------------------------------
// PAPR / runtime comparison

struct MethodSummary {
  std::string method;
  double mean_papr_db = 0.0;
  double median_time_s = 0.0;
  std::size_t symbols = 0;
  std::size_t failures = 0;
  std::vector<double> paprs;  // per symbol, NaN where the solver failed
};

struct Table2Report {
  std::vector<MethodSummary> rows;

  const MethodSummary& row(const std::string& method) const {
    for (const auto& r : rows) {
      if (r.method == method) return r;
    }
    throw RejectedInput("no table2 row named '" + method + "'");
  }

  /// Deterministic part: method,mean_papr_db,symbols,failures.
  Table papr_table() const {
    Table t{{"method", "mean_papr_db", "symbols", "failures"}, {}};
    for (const auto& r : rows) {
      t.add({r.method, r.mean_papr_db, static_cast<std::int64_t>(r.symbols), static_cast<std::int64_t>(r.failures)});
    }
    return t;
  }

  /// Wall-clock medians; machine dependent.
  Table timing_table() const {
    Table t{{"method", "median_time_s"}, {}};
    for (const auto& r : rows) t.add({r.method, r.median_time_s});
    return t;
  }
};

inline Table2Report run_table2(const ExperimentConfig& cfg, std::size_t workers = 1) {
  cfg.validate();
  const TonePlan plan = cfg.plan();
  const QcqpConfig qcfg = cfg.qcqp();
  const std::size_t count = cfg.table2.symbols;
  const std::size_t np = cfg.solver.p_values.size();
  const std::size_t methods = 2 + np;  // no-reduction, qcqp, proposed per p
  const double nan = std::nan("");
  std::vector<double> papr(methods * count, nan);
  std::vector<double> seconds(methods * count, nan);

  using clock = std::chrono::steady_clock;
  auto elapsed = [](clock::time_point t0) {
    return std::chrono::duration<double>(clock::now() - t0).count();
  };

  parallel_for(count, workers, [&](std::size_t s) {
    const ComplexSignal data = draw_data(cfg, plan, s);
    const std::vector<cplx> zeros(plan.num_reserved());
    const ComplexSignal d_time = idft(embed(data.samples(), zeros, plan));
    papr[0 * count + s] = composite_papr_db(cfg, plan, data, zeros);
    seconds[0 * count + s] = 0.0;
    try {
      const auto t0 = clock::now();
      const QcqpResult q = solve_qcqp_time_domain(d_time.samples(), plan, qcfg);
      seconds[1 * count + s] = elapsed(t0);
      papr[1 * count + s] = composite_papr_db(cfg, plan, data, q.reserved);
    } catch (const std::exception&) {
    }
    for (std::size_t i = 0; i < np; ++i) {
      try {
        const auto t0 = clock::now();
        const SolverResult r = solve_time_domain(d_time.samples(), plan,
                                                 proposed_config(cfg, cfg.solver.p_values[i], s));
        seconds[(2 + i) * count + s] = elapsed(t0);
        papr[(2 + i) * count + s] = composite_papr_db(cfg, plan, data, r.reserved);
      } catch (const std::exception&) {
      }
    }
  });

  Table2Report rep;
  for (std::size_t m = 0; m < methods; ++m) {
    MethodSummary row;
    row.method = m == 0 ? "no-reduction" : m == 1 ? "qcqp" : method_name(cfg.solver.p_values[m - 2]);
    std::vector<double> ok;
    std::vector<double> times;
    for (std::size_t s = 0; s < count; ++s) {
      const double v = papr[m * count + s];
      row.paprs.push_back(v);
      if (std::isnan(v)) {
        ++row.failures;
      } else {
        ok.push_back(v);
        times.push_back(seconds[m * count + s]);
      }
    }
    row.symbols = count;
    row.mean_papr_db = mean_of(ok);
    row.median_time_s = median_of(times);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// CCDF

struct CcdfCurve {
  std::vector<double> thresholds_db;
  std::vector<double> probabilities;  // P(PAPR > threshold)
  std::size_t num_symbols = 0;
};

inline CcdfCurve empirical_ccdf(std::span<const double> paprs_db, std::span<const double> thresholds_db) {
  for (std::size_t i = 1; i < thresholds_db.size(); ++i) {
    if (!(thresholds_db[i] > thresholds_db[i - 1])) {
      throw RejectedInput("empirical_ccdf: thresholds must be strictly increasing");
    }
  }
  if (paprs_db.empty()) throw RejectedInput("empirical_ccdf: no PAPR samples");
  std::vector<double> sorted(paprs_db.begin(), paprs_db.end());
  std::sort(sorted.begin(), sorted.end());
  CcdfCurve c;
  c.thresholds_db.assign(thresholds_db.begin(), thresholds_db.end());
  c.num_symbols = sorted.size();
  for (double t : thresholds_db) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
    c.probabilities.push_back(static_cast<double>(above) / static_cast<double>(sorted.size()));
  }
  return c;
}

struct CcdfReport {
  CcdfCurve no_reduction;
  CcdfCurve proposed;
  CcdfCurve qcqp;

  /// threshold_db,prob_no_red,prob_proposed,prob_qcqp
  Table table() const {
    Table t{{"threshold_db", "prob_no_red", "prob_proposed", "prob_qcqp"}, {}};
    for (std::size_t i = 0; i < no_reduction.thresholds_db.size(); ++i) {
      t.add({no_reduction.thresholds_db[i], no_reduction.probabilities[i], proposed.probabilities[i],
             qcqp.probabilities[i]});
    }
    return t;
  }
};

inline CcdfReport run_ccdf(const ExperimentConfig& cfg, std::size_t workers = 1) {
  cfg.validate();
  const TonePlan plan = cfg.plan();
  const QcqpConfig qcfg = cfg.qcqp();
  const std::size_t count = cfg.ccdf.symbols;
  std::vector<double> none(count);
  std::vector<double> prop(count);
  std::vector<double> conv(count);
  parallel_for(count, workers, [&](std::size_t s) {
    const ComplexSignal data = draw_data(cfg, plan, s);
    const std::vector<cplx> zeros(plan.num_reserved());
    const ComplexSignal d_time = idft(embed(data.samples(), zeros, plan));
    none[s] = composite_papr_db(cfg, plan, data, zeros);
    const SolverResult r = solve_time_domain(d_time.samples(), plan, proposed_config(cfg, cfg.ccdf.p, s));
    prop[s] = composite_papr_db(cfg, plan, data, r.reserved);
    const QcqpResult q = solve_qcqp_time_domain(d_time.samples(), plan, qcfg);
    conv[s] = composite_papr_db(cfg, plan, data, q.reserved);
  });
  const std::vector<double> grid = cfg.thresholds();
  return {empirical_ccdf(none, grid), empirical_ccdf(prop, grid), empirical_ccdf(conv, grid)};
}

// ---------------------------------------------------------------------------
// Convergence

struct ConvergenceRun {
  double p = 0.0;
  std::vector<TracePoint> trace;
  double lipschitz_step = 0.0;
  double initial_papr_db = 0.0;
  double final_papr_db = 0.0;
};

/// One traced solve per configured p on symbol 0, all from the same initial tones.
inline std::vector<ConvergenceRun> run_convergence(const ExperimentConfig& cfg, std::size_t workers = 1) {
  cfg.validate();
  const TonePlan plan = cfg.plan();
  const ComplexSignal data = draw_data(cfg, plan, 0);
  const std::vector<cplx> zeros(plan.num_reserved());
  const ComplexSignal d_time = idft(embed(data.samples(), zeros, plan));
  std::vector<ConvergenceRun> runs(cfg.solver.p_values.size());
  parallel_for(runs.size(), workers, [&](std::size_t i) {
    SolverConfig sc = proposed_config(cfg, cfg.solver.p_values[i], 0);
    sc.record_trace = true;
    const SolverResult r = solve_time_domain(d_time.samples(), plan, sc);
    runs[i] = {sc.p, r.trace, lipschitz_step_bound(std::span<const TracePoint>(r.trace)),
               r.trace.front().papr_db, r.papr_db};
  });
  return runs;
}

inline Table convergence_summary_table(const ExperimentConfig& cfg, std::span<const ConvergenceRun> runs) {
  Table t{{"p", "alpha", "lipschitz_step", "initial_papr_db", "final_papr_db"}, {}};
  for (const auto& r : runs) t.add({r.p, cfg.solver.alpha, r.lipschitz_step, r.initial_papr_db, r.final_papr_db});
  return t;
}

// ---------------------------------------------------------------------------
// Sensing

enum class WaveformKind { Proposed, Qcqp, PskOnly, QamOnly };

inline const char* waveform_name(WaveformKind k) {
  switch (k) {
    case WaveformKind::Proposed: return "proposed";
    case WaveformKind::Qcqp: return "qcqp";
    case WaveformKind::PskOnly: return "psk16";
    case WaveformKind::QamOnly: return "qam16";
  }
  return "?";
}

inline constexpr WaveformKind kAllWaveforms[] = {WaveformKind::Proposed, WaveformKind::Qcqp,
                                                 WaveformKind::PskOnly, WaveformKind::QamOnly};

/**
 * Transmitted waveform of sensing trial `index`. The tone-reservation kinds
 * share one draw of data symbols; the all-data kinds fill every subcarrier
 * with 16-PSK or 16-QAM points from the same trial seed.
 */
inline ComplexSignal sensing_waveform(const ExperimentConfig& cfg, const TonePlan& plan, WaveformKind kind,
                                      std::uint64_t index) {
  const std::uint64_t seed = derive_seed(cfg.seed, stream::kSensing, index);
  Rng rng(seed);
  if (kind == WaveformKind::PskOnly || kind == WaveformKind::QamOnly) {
    const Constellation cons = kind == WaveformKind::PskOnly ? Constellation::psk(16) : Constellation::qam(16);
    return idft(map_symbols(random_labels(rng, plan.size(), cons.order()), cons));
  }
  const Constellation cons = cfg.constellation();
  const ComplexSignal data = map_symbols(random_labels(rng, plan.num_data(), cons.order()), cons);
  const std::vector<cplx> zeros(plan.num_reserved());
  const ComplexSignal d_time = idft(embed(data.samples(), zeros, plan));
  std::vector<cplx> reserved;
  if (kind == WaveformKind::Proposed) {
    SolverConfig sc = proposed_config(cfg, cfg.sensing.p, index);
    sc.init = RandomPhases{derive_seed(seed, stream::kInit)};
    reserved = solve_time_domain(d_time.samples(), plan, sc).reserved;
  } else {
    reserved = solve_qcqp_time_domain(d_time.samples(), plan, cfg.qcqp()).reserved;
  }
  std::vector<cplx> x = partial_idft(reserved, plan);
  for (std::size_t n = 0; n < x.size(); ++n) x[n] += d_time[n];
  return ComplexSignal(Domain::Time, std::move(x));
}

struct WaveformReport {
  WaveformKind kind{};
  std::vector<RmsePoint> rmse;
  std::vector<double> psl_db;  // per trial
  double mean_psl_db = 0.0;
  AacfResult acf;              // trial 0
};

struct SensingReport {
  std::vector<WaveformReport> waveforms;

  const WaveformReport& get(WaveformKind k) const {
    for (const auto& w : waveforms) {
      if (w.kind == k) return w;
    }
    throw RejectedInput("waveform not present in sensing report");
  }

  Table psl_table() const {
    Table t{{"waveform", "mean_psl_db", "symbols"}, {}};
    for (const auto& w : waveforms) {
      t.add({waveform_name(w.kind), w.mean_psl_db, static_cast<std::int64_t>(w.psl_db.size())});
    }
    return t;
  }
};

inline RadarScene scene_of(const ExperimentConfig& cfg) {
  RadarScene sc;
  sc.delays = cfg.sensing.delays;
  sc.carrier_hz = cfg.sensing.carrier_hz;
  sc.subcarrier_spacing_hz = cfg.sensing.subcarrier_spacing_hz;
  return sc;
}

/// Ranging RMSE, per-trial PSL and trial-0 A-ACF for every waveform kind.
inline SensingReport run_sensing(const ExperimentConfig& cfg, std::size_t workers = 1) {
  cfg.validate();
  const TonePlan plan = cfg.plan();
  const RadarScene scene = scene_of(cfg);
  const std::size_t trials = cfg.sensing.trials;
  SensingReport rep;
  for (WaveformKind kind : kAllWaveforms) {
    std::vector<ComplexSignal> tx(trials, ComplexSignal(Domain::Time, {}));
    std::vector<double> psl(trials);
    parallel_for(trials, workers, [&](std::size_t t) {
      tx[t] = sensing_waveform(cfg, plan, kind, t);
      psl[t] = aacf(tx[t]).psl_db;
    });
    WaveformReport w;
    w.kind = kind;
    w.rmse = ranging_rmse(tx, scene, cfg.sensing.snr_db, derive_seed(cfg.seed, stream::kSensingNoise), workers);
    w.mean_psl_db = mean_of(psl);
    w.psl_db = std::move(psl);
    w.acf = aacf(tx[0]);
    rep.waveforms.push_back(std::move(w));
  }
  return rep;
}

/// A-ACF of trial 0 for every waveform kind, without the ranging runs.
inline std::vector<WaveformReport> run_aacf(const ExperimentConfig& cfg, std::size_t workers = 1) {
  cfg.validate();
  const TonePlan plan = cfg.plan();
  std::vector<WaveformReport> out(std::size(kAllWaveforms));
  parallel_for(out.size(), workers, [&](std::size_t i) {
    out[i].kind = kAllWaveforms[i];
    out[i].acf = aacf(sensing_waveform(cfg, plan, kAllWaveforms[i], 0));
    out[i].psl_db = {out[i].acf.psl_db};
    out[i].mean_psl_db = out[i].acf.psl_db;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Output

/// Writes `<dir>/<name>.csv`, plus `<dir>/<name>.json` when `json` is set.
inline void write_outputs(const std::filesystem::path& dir, const std::string& name, const Table& t,
                          bool json) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / (name + ".csv"));
    if (!out) throw RejectedInput("cannot write " + (dir / (name + ".csv")).string());
    write_csv(out, t);
  }
  if (json) {
    std::ofstream out(dir / (name + ".json"));
    if (!out) throw RejectedInput("cannot write " + (dir / (name + ".json")).string());
    write_json(out, t);
  }
}

}  // namespace trpapr

#endif  // TRPAPR_EXPERIMENT_HPP
