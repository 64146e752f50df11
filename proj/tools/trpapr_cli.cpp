// trpapr: reproduction harness for tone-reservation PAPR reduction experiments.
//
//   trpapr <table2|ccdf|convergence|sensing|aacf> [--config FILE] [--seed N]
//          [--out DIR] [--threads N] [--json]
//
// Results are CSV files in the output directory. On failure a single JSON
// line {"error": kind, "message": text} goes to stderr and the exit code is
// nonzero.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "trpapr/trpapr.hpp"

namespace {

using namespace trpapr;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::size_t threads = 0;
  bool json = false;
};

ExperimentConfig resolve(const Options& o) {
  ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
  if (o.seed) cfg.seed = *o.seed;
  if (o.out) cfg.output_dir = *o.out;
  cfg.validate();
  return cfg;
}

std::size_t workers(const Options& o) {
  if (o.threads > 0) return o.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

void cmd_table2(const Options& o) {
  const ExperimentConfig cfg = resolve(o);
  const Table2Report rep = run_table2(cfg, workers(o));
  write_outputs(cfg.output_dir, "table2", rep.papr_table(), o.json);
  write_outputs(cfg.output_dir, "table2_timing", rep.timing_table(), o.json);
  std::cout << "method               mean PAPR [dB]   median time [s]   failures\n";
  for (const auto& r : rep.rows) {
    std::printf("%-20s %14.4f %17.6f %10zu\n", r.method.c_str(), r.mean_papr_db, r.median_time_s, r.failures);
  }
}

void cmd_ccdf(const Options& o) {
  const ExperimentConfig cfg = resolve(o);
  const CcdfReport rep = run_ccdf(cfg, workers(o));
  write_outputs(cfg.output_dir, "ccdf", rep.table(), o.json);
  std::cout << "wrote " << (std::filesystem::path(cfg.output_dir) / "ccdf.csv").string() << " ("
            << rep.no_reduction.num_symbols << " symbols)\n";
}

void cmd_convergence(const Options& o) {
  const ExperimentConfig cfg = resolve(o);
  const auto runs = run_convergence(cfg, workers(o));
  for (const auto& r : runs) {
    std::ostringstream name;
    name << "convergence_p" << r.p;
    write_outputs(cfg.output_dir, name.str(), trace_table(r.trace), o.json);
    std::printf("p = %-6g  PAPR %.4f -> %.4f dB   1/L bound %.4g (alpha = %g)\n", r.p, r.initial_papr_db,
                r.final_papr_db, r.lipschitz_step, cfg.solver.alpha);
  }
  write_outputs(cfg.output_dir, "convergence_summary", convergence_summary_table(cfg, runs), o.json);
}

void cmd_sensing(const Options& o) {
  const ExperimentConfig cfg = resolve(o);
  const SensingReport rep = run_sensing(cfg, workers(o));
  for (const auto& w : rep.waveforms) {
    write_outputs(cfg.output_dir, std::string("rmse_") + waveform_name(w.kind), rmse_table(w.rmse), o.json);
    write_outputs(cfg.output_dir, std::string("aacf_") + waveform_name(w.kind), aacf_table(w.acf), o.json);
    std::printf("%-9s mean PSL %.3f dB\n", waveform_name(w.kind), w.mean_psl_db);
  }
  write_outputs(cfg.output_dir, "sensing_psl", rep.psl_table(), o.json);
}

void cmd_aacf(const Options& o) {
  const ExperimentConfig cfg = resolve(o);
  const auto reps = run_aacf(cfg, workers(o));
  Table psl{{"waveform", "psl_db"}, {}};
  for (const auto& w : reps) {
    write_outputs(cfg.output_dir, std::string("aacf_") + waveform_name(w.kind), aacf_table(w.acf), o.json);
    psl.add({waveform_name(w.kind), w.acf.psl_db});
    std::printf("%-9s PSL %.3f dB\n", waveform_name(w.kind), w.acf.psl_db);
  }
  write_outputs(cfg.output_dir, "aacf_psl", psl, o.json);
}

int fail(const char* kind, const std::string& message, int code) {
  nlohmann::json line = {{"error", kind}, {"message", message}};
  std::cerr << line.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tone-reservation PAPR reduction experiments"};
  app.require_subcommand(1);
  Options opts;
  app.add_option("--config", opts.config_path, "Experiment config (JSON, comments allowed)");
  app.add_option("--seed", opts.seed, "Master seed, overrides the config");
  app.add_option("--out", opts.out, "Output directory, overrides the config");
  app.add_option("--threads", opts.threads, "Worker threads (default: hardware concurrency)");
  app.add_flag("--json", opts.json, "Also write each CSV as a JSON array of records");

  struct Sub {
    const char* name;
    const char* help;
    void (*run)(const Options&);
  };
  const Sub subs[] = {
      {"table2", "Mean PAPR and median solve time per method", cmd_table2},
      {"ccdf", "PAPR CCDF for no reduction, proposed and QCQP", cmd_ccdf},
      {"convergence", "Per-iteration traces for each p", cmd_convergence},
      {"sensing", "Ranging RMSE, PSL and A-ACF per waveform", cmd_sensing},
      {"aacf", "A-ACF of one symbol per waveform", cmd_aacf},
  };
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->fallthrough();
    sub->callback([&opts, run = s.run] { run(opts); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("usage", e.what(), 64);
  } catch (const RejectedInput& e) {
    return fail("rejected_input", e.what(), 2);
  } catch (const ContractViolation& e) {
    return fail("contract_violation", e.what(), 3);
  } catch (const UndefinedValue& e) {
    return fail("undefined_value", e.what(), 4);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
  return 0;
}
