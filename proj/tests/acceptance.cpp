// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
//
// All thresholds live in the `tol` namespace below. The experiments use the
// default ExperimentConfig (512 tones, 64 reserved, 16-PSK, K = 2000, alpha = 1).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "trpapr/trpapr.hpp"

using namespace trpapr;
namespace fs = std::filesystem;

namespace tol {
// 1
constexpr std::size_t kUnreducedSymbols = 1000;
constexpr double kUnreducedLo = 8.2, kUnreducedHi = 9.6;
constexpr double kUnreducedMaxSeconds = 10.0;
// 2-5
constexpr std::size_t kTable2Symbols = 100;
constexpr double kProposedLo = 4.6, kProposedHi = 5.6;
constexpr double kProposedMaxSeconds = 300.0;
constexpr double kTrendTie = 0.05;  // allowed between p = 100 and p = 150
constexpr double kQcqpLo = 4.2, kQcqpHi = 5.2;
// 6
constexpr std::size_t kCcdfSymbols = 2000;
constexpr double kCcdfResolvableCount = 10.0;
constexpr double kCcdfSlack = 0.01;
// 7
constexpr double kUnitModulus = 1e-12;
constexpr double kDataDistortion = 1e-10;
// 8
constexpr std::size_t kGradientInstances = 20;  // per p
constexpr double kGradientRelErr = 1e-5;
constexpr double kGradientStep = 1e-6;
constexpr double kGradientMaxSeconds = 10.0;
// 9
constexpr std::size_t kAcfSignals = 10;
constexpr double kAcfAbs = 1e-10;
// 10
constexpr std::size_t kSensingDraws = 100;
constexpr double kPslMatch = 1.0;
constexpr double kRmseRel = 0.10;
// 11
constexpr std::size_t kCertifyInstances = 10;
constexpr double kCertifyGap = 1e-3;
// 12
constexpr std::size_t kDeterminismSymbols = 8;
}  // namespace tol

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  if (!ok) ++failures;
  std::printf("[%s] %2d %-28s %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void guarded(int id, const char* name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

double max_unit_deviation(const std::vector<cplx>& r) {
  double m = 0.0;
  for (const cplx& v : r) m = std::max(m, std::abs(std::abs(v) - 1.0));
  return m;
}

/// Largest deviation of the data subcarriers of dft(d_time + F_R^H r) from the data symbols.
double data_distortion(const ComplexSignal& data, const std::vector<cplx>& reserved, const TonePlan& plan) {
  const ComplexSignal d_time = idft(embed(data.samples(), std::vector<cplx>(plan.num_reserved()), plan));
  std::vector<cplx> x = partial_idft(reserved, plan);
  for (std::size_t n = 0; n < x.size(); ++n) x[n] += d_time[n];
  const ComplexSignal spectrum = dft(ComplexSignal(Domain::Time, std::move(x)));
  return oracle::max_abs_diff(extract_data(spectrum, plan).vector(), data.vector());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_unreduced(const ExperimentConfig& cfg) {
  const auto t0 = clock_type::now();
  const TonePlan plan = cfg.plan();
  std::vector<double> paprs(tol::kUnreducedSymbols);
  // All 512 tones carry data here; the reserved set plays no role.
  const Constellation cons = cfg.constellation();
  for (std::size_t s = 0; s < paprs.size(); ++s) {
    Rng rng(derive_seed(cfg.seed, stream::kData, s));
    paprs[s] = papr_db(idft(map_symbols(random_labels(rng, plan.size(), cons.order()), cons)));
  }
  const double mean = mean_of(paprs);
  const double secs = seconds_since(t0);
  const bool ok = mean >= tol::kUnreducedLo && mean <= tol::kUnreducedHi && secs < tol::kUnreducedMaxSeconds;
  report(1, "unreduced PAPR", ok,
         fmt("mean %.4f dB over %zu symbols (band [%.1f, %.1f]), %.2f s", mean, paprs.size(), tol::kUnreducedLo,
             tol::kUnreducedHi, secs));
}

void criteria_table2(const ExperimentConfig& base) {
  ExperimentConfig cfg = base;
  cfg.table2.symbols = tol::kTable2Symbols;
  const auto t0 = clock_type::now();
  const Table2Report rep = run_table2(cfg, workers());
  const double secs = seconds_since(t0);
  const auto& p10 = rep.row(method_name(10.0));
  const auto& p50 = rep.row(method_name(50.0));
  const auto& p100 = rep.row(method_name(100.0));
  const auto& p150 = rep.row(method_name(150.0));
  const auto& qcqp = rep.row("qcqp");
  const auto& none = rep.row("no-reduction");
  std::size_t failed = 0;
  for (const auto& r : rep.rows) failed += r.failures;

  report(2, "proposed p=50 band",
         p50.mean_papr_db >= tol::kProposedLo && p50.mean_papr_db <= tol::kProposedHi &&
             secs < tol::kProposedMaxSeconds && p50.failures == 0,
         fmt("mean %.4f dB over %zu symbols (band [%.1f, %.1f]); full table run %.1f s; unreduced %.4f dB",
             p50.mean_papr_db, p50.symbols, tol::kProposedLo, tol::kProposedHi, secs, none.mean_papr_db));

  const bool trend = p10.mean_papr_db > p50.mean_papr_db && p50.mean_papr_db > p100.mean_papr_db &&
                     p150.mean_papr_db <= p100.mean_papr_db + tol::kTrendTie;
  report(3, "p-trend", trend,
         fmt("p=10 %.4f, p=50 %.4f, p=100 %.4f, p=150 %.4f dB (tie allowance %.2f dB at 100/150)",
             p10.mean_papr_db, p50.mean_papr_db, p100.mean_papr_db, p150.mean_papr_db, tol::kTrendTie));

  double best_prop = INFINITY;
  for (const auto* r : {&p10, &p50, &p100, &p150}) best_prop = std::min(best_prop, r->mean_papr_db);
  report(4, "baseline dominance",
         qcqp.mean_papr_db >= tol::kQcqpLo && qcqp.mean_papr_db <= tol::kQcqpHi &&
             qcqp.mean_papr_db <= best_prop && failed == 0,
         fmt("qcqp mean %.4f dB (band [%.1f, %.1f]); best proposed mean %.4f dB; solver failures %zu",
             qcqp.mean_papr_db, tol::kQcqpLo, tol::kQcqpHi, best_prop, failed));

  report(5, "runtime ordering", p50.median_time_s < qcqp.median_time_s,
         fmt("median per-symbol solve: proposed p=50 %.4f s, qcqp %.4f s", p50.median_time_s, qcqp.median_time_s));
}

void criterion_ccdf(const ExperimentConfig& base) {
  ExperimentConfig cfg = base;
  cfg.ccdf.symbols = tol::kCcdfSymbols;
  const auto t0 = clock_type::now();
  const CcdfReport rep = run_ccdf(cfg, workers());
  const double secs = seconds_since(t0);
  const double floor = tol::kCcdfResolvableCount / static_cast<double>(rep.no_reduction.num_symbols);
  std::size_t checked = 0;
  std::size_t bad = 0;
  double worst = INFINITY;
  for (std::size_t i = 0; i < rep.no_reduction.thresholds_db.size(); ++i) {
    const double pn = rep.no_reduction.probabilities[i];
    const double pp = rep.proposed.probabilities[i];
    const double pq = rep.qcqp.probabilities[i];
    if (std::max({pn, pp, pq}) < floor) continue;
    ++checked;
    const double margin = std::min(pn - pp, pp - (pq - tol::kCcdfSlack));
    worst = std::min(worst, margin);
    if (margin < 0.0) ++bad;
  }
  report(6, "CCDF ordering", bad == 0 && checked > 0,
         fmt("%zu symbols, %zu resolvable thresholds, %zu violations, smallest margin %.4f; %.1f s",
             rep.no_reduction.num_symbols, checked, bad, worst, secs));
}

void criterion_feasibility(const ExperimentConfig& cfg) {
  // Re-solves the table2 symbols and checks every PGD and QCQP output.
  const TonePlan plan = cfg.plan();
  const QcqpConfig qcfg = cfg.qcqp();
  std::size_t trials = 0;
  std::size_t bad = 0;
  double worst_unit = 0.0;
  double worst_data = 0.0;
  for (std::size_t s = 0; s < tol::kTable2Symbols; ++s) {
    const ComplexSignal data = draw_data(cfg, plan, s);
    const ComplexSignal d_time = idft(embed(data.samples(), std::vector<cplx>(plan.num_reserved()), plan));
    for (double p : cfg.solver.p_values) {
      const SolverResult r = solve_time_domain(d_time.samples(), plan, proposed_config(cfg, p, s));
      const double u = max_unit_deviation(r.reserved);
      const double d = data_distortion(data, r.reserved, plan);
      worst_unit = std::max(worst_unit, u);
      worst_data = std::max(worst_data, d);
      bad += (u >= tol::kUnitModulus || d >= tol::kDataDistortion);
      ++trials;
    }
    const QcqpResult q = solve_qcqp_time_domain(d_time.samples(), plan, qcfg);
    const double d = data_distortion(data, q.reserved, plan);
    worst_data = std::max(worst_data, d);
    bad += d >= tol::kDataDistortion;
    ++trials;
  }
  report(7, "feasibility/non-distortion", bad == 0,
         fmt("%zu solver outputs, %zu violations; max ||r_i|-1| %.2e (PGD), max data error %.2e", trials, bad,
             worst_unit, worst_data));
}

void criterion_gradient() {
  const auto t0 = clock_type::now();
  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  std::size_t count = 0;
  for (double p : {2.0, 10.0, 50.0}) {
    for (std::size_t i = 0; i < tol::kGradientInstances; ++i) {
      std::vector<std::size_t> all(64);
      for (std::size_t k = 0; k < 64; ++k) all[k] = k;
      std::shuffle(all.begin(), all.end(), rng);
      const TonePlan plan = TonePlan::from_reserved(64, {all.begin(), all.begin() + 8});
      const auto data = oracle::random_vector(rng, plan.num_data(), 0.7);
      const ComplexSignal d_time = idft(embed(data, std::vector<cplx>(8), plan));
      const auto r = project_unit_circle(oracle::random_vector(rng, 8));
      const auto fr = oracle::reserved_idft_matrix(64, plan.reserved());
      const auto g = euclidean_gradient(r, d_time.samples(), plan, p);
      const auto fd = oracle::finite_difference_gradient(fr, d_time.vector(), r, p, tol::kGradientStep);
      std::vector<cplx> diff(g.size());
      for (std::size_t j = 0; j < g.size(); ++j) diff[j] = g[j] - fd[j];
      worst = std::max(worst, oracle::norm2(diff) / oracle::norm2(fd));
      ++count;
    }
  }
  const double secs = seconds_since(t0);
  report(8, "gradient oracle", worst < tol::kGradientRelErr && secs < tol::kGradientMaxSeconds,
         fmt("%zu instances (N=64, N_r=8, p in {2,10,50}), max relative error %.2e, %.2f s", count, worst, secs));
}

void criterion_acf() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (std::size_t i = 0; i < tol::kAcfSignals; ++i) {
    const auto x = oracle::random_vector(rng, 64);
    const AacfResult r = aacf(ComplexSignal(Domain::Time, x));
    worst = std::max(worst, oracle::max_abs_diff(r.values, oracle::shift_matrix_acf(x)));
  }
  report(9, "A-ACF oracle", worst <= tol::kAcfAbs,
         fmt("%zu signals, N=64, all lags; max |FFT - x^H J_k x| %.2e", tol::kAcfSignals, worst));
}

void criterion_sensing(const ExperimentConfig& base) {
  ExperimentConfig cfg = base;
  cfg.sensing.trials = tol::kSensingDraws;
  cfg.sensing.snr_db = {0.0, 5.0, 10.0, 15.0, 20.0};
  const SensingReport rep = run_sensing(cfg, workers());
  const auto& prop = rep.get(WaveformKind::Proposed);
  const auto& qcqp = rep.get(WaveformKind::Qcqp);
  const auto& psk = rep.get(WaveformKind::PskOnly);
  const auto& qam = rep.get(WaveformKind::QamOnly);

  // Noiseless recovery: every proposed waveform draw, one random integer delay each.
  const TonePlan plan = cfg.plan();
  std::mt19937_64 rng(cfg.seed);
  std::size_t exact = 0;
  for (std::size_t t = 0; t < tol::kSensingDraws; ++t) {
    const ComplexSignal x = sensing_waveform(cfg, plan, WaveformKind::Proposed, t);
    RadarScene sc = scene_of(cfg);
    sc.noise = false;
    sc.delays = {static_cast<std::size_t>(rng() % (plan.size() / 2))};
    exact += estimate_delay(apply_radar_channel(x, sc, 0), x) == sc.delays[0];
  }

  bool rmse_ok = true;
  std::string rmse_detail;
  for (std::size_t s = 0; s < prop.rmse.size(); ++s) {
    const double a = prop.rmse[s].rmse_m;
    const double b = psk.rmse[s].rmse_m;
    rmse_ok = rmse_ok && std::abs(a - b) <= tol::kRmseRel * std::max(a, b);
    rmse_detail += fmt("%s%g dB %.3g/%.3g", s ? ", " : "", prop.rmse[s].snr_db, a, b);
  }
  const bool psl_ok = prop.mean_psl_db < qcqp.mean_psl_db &&
                      std::abs(prop.mean_psl_db - psk.mean_psl_db) <= tol::kPslMatch;
  report(10, "sensing ordering", psl_ok && exact == tol::kSensingDraws && rmse_ok,
         fmt("%zu draws; mean PSL proposed %.2f, qcqp %.2f, psk %.2f, qam %.2f dB; noiseless exact %zu/%zu; "
             "RMSE m proposed/psk: %s",
             tol::kSensingDraws, prop.mean_psl_db, qcqp.mean_psl_db, psk.mean_psl_db, qam.mean_psl_db, exact,
             tol::kSensingDraws, rmse_detail.c_str()));
}

void criterion_certify() {
  double worst = -INFINITY;
  std::size_t bad = 0;
  for (std::size_t i = 0; i < tol::kCertifyInstances; ++i) {
    const std::size_t n = i % 2 ? 32 : 16;
    const std::size_t nr = n / 4;
    Rng rng(derive_seed(4242, 0, i));
    std::vector<std::size_t> all(n);
    for (std::size_t k = 0; k < n; ++k) all[k] = k;
    std::shuffle(all.begin(), all.end(), rng);
    const TonePlan plan = TonePlan::from_reserved(n, {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(nr)});
    const Constellation cons = Constellation::psk(16);
    const ComplexSignal data = map_symbols(random_labels(rng, plan.num_data(), 16), cons);
    QcqpConfig cfg;
    cfg.p_max = static_cast<double>(nr);
    const QcqpResult res = solve_qcqp(data, plan, cfg);
    CertifyOptions opts;
    opts.seed = derive_seed(4242, 1, i);
    const CertificateReport rep = certify(res.reserved, data, plan, cfg, opts);
    worst = std::max(worst, rep.relative_gap);
    bad += !(rep.relative_gap <= tol::kCertifyGap && rep.candidate_feasible);
  }
  report(11, "QCQP certification", bad == 0,
         fmt("%zu instances (N in {16, 32}, N_r = N/4), worst relative gap %.2e (limit %.0e)", tol::kCertifyInstances,
             worst, tol::kCertifyGap));
}

void criterion_determinism(const ExperimentConfig& base) {
  ExperimentConfig cfg = base;
  cfg.table2.symbols = tol::kDeterminismSymbols;
  cfg.ccdf.symbols = tol::kDeterminismSymbols;
  cfg.sensing.trials = tol::kDeterminismSymbols / 2;
  const fs::path root = fs::temp_directory_path() / "trpapr_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  {
    std::ofstream out(root / "cfg.jsonc");
    out << emit(cfg);
  }
  const char* subs[] = {"table2", "ccdf", "convergence", "sensing", "aacf"};
  const std::pair<const char*, int> runs[] = {{"w1a", 1}, {"w1b", 1}, {"w8", 8}};
  int exit_bad = 0;
  for (const auto& [dir, threads] : runs) {
    for (const char* sub : subs) {
      const std::string cmd = std::string(TRPAPR_CLI_PATH) + " " + sub + " --config " +
                              (root / "cfg.jsonc").string() + " --seed 77 --out " + (root / dir).string() +
                              " --threads " + std::to_string(threads) + " >/dev/null";
      const int status = std::system(cmd.c_str());
      exit_bad += !(WIFEXITED(status) && WEXITSTATUS(status) == 0);
    }
  }
  std::size_t files = 0;
  std::size_t differ = 0;
  for (const auto& entry : fs::directory_iterator(root / "w1a")) {
    const std::string name = entry.path().filename().string();
    if (entry.path().extension() != ".csv" || name == "table2_timing.csv") continue;
    ++files;
    const std::string ref = slurp(entry.path());
    differ += ref != slurp(root / "w1b" / name) || ref != slurp(root / "w8" / name);
  }
  report(12, "determinism", exit_bad == 0 && files > 0 && differ == 0,
         fmt("%zu CSVs compared across 2 runs x 1 worker and 1 run x 8 workers, %zu differ, %d failed runs "
             "(wall-clock table2_timing.csv excluded)",
             files, differ, exit_bad));
}

}  // namespace

int main() {
  const ExperimentConfig cfg;
  std::printf("acceptance: N=%zu, N_r=%zu, plan=%s, K=%zu, alpha=%g, seed=%llu, workers=%zu\n", cfg.subcarriers,
              cfg.reserved, cfg.tone_plan.c_str(), cfg.solver.iterations, cfg.solver.alpha,
              static_cast<unsigned long long>(cfg.seed), workers());
  guarded(1, "unreduced PAPR", [&] { criterion_unreduced(cfg); });
  guarded(2, "PAPR table", [&] { criteria_table2(cfg); });
  guarded(6, "CCDF ordering", [&] { criterion_ccdf(cfg); });
  guarded(7, "feasibility/non-distortion", [&] { criterion_feasibility(cfg); });
  guarded(8, "gradient oracle", [] { criterion_gradient(); });
  guarded(9, "A-ACF oracle", [] { criterion_acf(); });
  guarded(10, "sensing ordering", [&] { criterion_sensing(cfg); });
  guarded(11, "QCQP certification", [] { criterion_certify(); });
  guarded(12, "determinism", [&] { criterion_determinism(cfg); });
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
