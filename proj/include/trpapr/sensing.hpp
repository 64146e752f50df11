#ifndef TRPAPR_SENSING_HPP
#define TRPAPR_SENSING_HPP

// Monostatic radar evaluation of a transmitted OFDM waveform: static-target
// echo channel, matched-filter delay/range estimation, aperiodic ACF and PSL.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "trpapr/error.hpp"
#include "trpapr/parallel.hpp"
#include "trpapr/random.hpp"
#include "trpapr/signal.hpp"
#include "trpapr/table.hpp"

namespace trpapr {

inline constexpr double kSpeedOfLight = 299'792'458.0;

/**
 * Static-target radar scene.
 *
 * SNR convention: the echo is scaled by sigma = 10^(snr_db / 20) and the noise
 * has unit variance, so snr_db = 20 log10(sigma) is a per-sample SNR for a
 * unit-power waveform. Delays are integer sample lags.
 */
struct RadarScene {
  std::vector<std::size_t> delays;
  std::vector<double> velocities;  // must be empty or all zero
  double snr_db = 20.0;
  bool noise = true;
  double carrier_hz = 26e9;
  double subcarrier_spacing_hz = 450e3;

  std::size_t num_targets() const { return delays.size(); }

  double sigma() const { return std::pow(10.0, snr_db / 20.0); }

  /// Sampling rate of an N-subcarrier symbol, N * subcarrier spacing.
  double sample_rate(std::size_t n) const { return static_cast<double>(n) * subcarrier_spacing_hz; }

  double wavelength() const { return kSpeedOfLight / carrier_hz; }
};

/// y[n] = sigma sum_u x[n - tau_u] + z[n], with x[m] = 0 for m < 0 and y cut to length N.
inline ComplexSignal apply_radar_channel(const ComplexSignal& x, const RadarScene& scene,
                                         std::uint64_t seed) {
  detail::require_domain(x, Domain::Time, "apply_radar_channel");
  const std::size_t n = x.size();
  for (std::size_t tau : scene.delays) {
    if (tau >= n) {
      throw RejectedInput("apply_radar_channel: delay " + std::to_string(tau) +
                          " must be below the symbol length " + std::to_string(n));
    }
  }
  for (double v : scene.velocities) {
    if (v != 0.0) throw RejectedInput("apply_radar_channel: only static targets are supported");
  }
  const double sigma = scene.sigma();
  std::vector<cplx> y(n);
  for (std::size_t tau : scene.delays) {
    for (std::size_t i = tau; i < n; ++i) y[i] += sigma * x[i - tau];
  }
  if (scene.noise) {
    Rng rng(seed);
    const std::vector<cplx> z = complex_gaussian(rng, n);
    for (std::size_t i = 0; i < n; ++i) y[i] += z[i];
  }
  return ComplexSignal(Domain::Time, std::move(y));
}

namespace detail {

/// Linear correlation c[k] = sum_n a[n + k] conj(b[n]) for k = 0..N-1 via zero-padded FFT.
inline std::vector<cplx> linear_correlation(std::span<const cplx> a, std::span<const cplx> b) {
  const std::size_t n = a.size();
  const std::size_t m = std::bit_ceil(2 * n);
  std::vector<cplx> fa(m);
  std::vector<cplx> fb(m);
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  const FftPlan& plan = fft_plan(m);
  plan.forward(fa);
  plan.forward(fb);
  for (std::size_t i = 0; i < m; ++i) fa[i] *= std::conj(fb[i]);
  plan.inverse(fa);
  std::vector<cplx> out(fa.begin(), fa.begin() + static_cast<std::ptrdiff_t>(n));
  for (cplx& v : out) v /= static_cast<double>(m);
  return out;
}

}  // namespace detail

/// Matched-filter delay: argmax_k |sum_n y[n] conj(x_ref[n - k])|, smallest k on ties.
inline std::size_t estimate_delay(const ComplexSignal& y, const ComplexSignal& x_ref) {
  detail::require_domain(y, Domain::Time, "estimate_delay");
  detail::require_domain(x_ref, Domain::Time, "estimate_delay");
  if (y.size() != x_ref.size()) throw RejectedInput("estimate_delay: length mismatch");
  detail::require_nonempty(y.size(), "estimate_delay");
  if (max_abs(x_ref.samples()) == 0.0) throw RejectedInput("estimate_delay: reference signal is zero");
  const std::vector<cplx> c = detail::linear_correlation(y.samples(), x_ref.samples());
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double mag = std::abs(c[k]);
    if (mag > best_mag) {
      best_mag = mag;
      best = k;
    }
  }
  return best;
}

/// Round-trip delay in samples to one-way range in meters.
inline double estimate_range(double tau_samples, double sample_rate_hz) {
  if (!(sample_rate_hz > 0.0)) throw RejectedInput("estimate_range: sample rate must be positive");
  return kSpeedOfLight * (tau_samples / sample_rate_hz) / 2.0;
}

enum class AcfMode { Aperiodic, Periodic };

struct AacfResult {
  std::vector<cplx> values;  // r_k for k = 0..N-1; r_{-k} = conj(r_k)
  double psl_db = 0.0;       // 20 log10(max_{k>=1} |r_k| / |r_0|), -inf when N = 1
};

/**
 * Autocorrelation r_k = sum_n conj(x[n]) x[n + k].
 * Aperiodic (default) drops terms with n + k >= N; periodic wraps n + k mod N.
 */
inline AacfResult aacf(const ComplexSignal& x, AcfMode mode = AcfMode::Aperiodic) {
  detail::require_domain(x, Domain::Time, "aacf");
  detail::require_nonempty(x.size(), "aacf");
  if (max_abs(x.samples()) == 0.0) throw UndefinedValue("aacf: PSL of an all-zero signal is undefined");
  const std::size_t n = x.size();
  AacfResult res;
  if (mode == AcfMode::Aperiodic) {
    res.values = detail::linear_correlation(x.samples(), x.samples());
  } else {
    std::vector<cplx> f(x.samples().begin(), x.samples().end());
    const FftPlan& plan = fft_plan(n);
    plan.forward(f);
    for (cplx& v : f) v = std::norm(v);
    plan.inverse(f);
    for (cplx& v : f) v /= static_cast<double>(n);
    res.values = std::move(f);
  }
  res.values[0] = {res.values[0].real(), 0.0};
  const double main = std::abs(res.values[0]);
  double side = 0.0;
  for (std::size_t k = 1; k < n; ++k) side = std::max(side, std::abs(res.values[k]));
  res.psl_db = n == 1 ? -std::numeric_limits<double>::infinity() : 20.0 * std::log10(side / main);
  return res;
}

/// Sidelobe magnitudes below this are written as this value in exported tables.
inline constexpr double kAcfFloorDb = -300.0;

/// A-ACF with columns lag,abs_db, |r_k| normalized to |r_0|.
inline Table aacf_table(const AacfResult& acf) {
  Table t{{"lag", "abs_db"}, {}};
  const double main = std::abs(acf.values.at(0));
  for (std::size_t k = 0; k < acf.values.size(); ++k) {
    const double db = 20.0 * std::log10(std::abs(acf.values[k]) / main);
    t.add({static_cast<std::int64_t>(k), std::max(db, kAcfFloorDb)});
  }
  return t;
}

struct RmsePoint {
  double snr_db = 0.0;
  double rmse_m = 0.0;
  std::size_t trials = 0;
};

/**
 * Single-target ranging RMSE versus SNR over a fixed set of transmitted waveforms.
 *
 * Each waveform is reused at every SNR; the noise of (snr index s, trial t)
 * is seeded by derive_seed(master, 1 + s, t). Gross errors count at full size.
 * Output is identical for any worker count.
 */
inline std::vector<RmsePoint> ranging_rmse(std::span<const ComplexSignal> waveforms,
                                           const RadarScene& scene, std::span<const double> snr_grid,
                                           std::uint64_t master_seed, std::size_t workers = 1) {
  const std::size_t trials = waveforms.size();
  if (trials == 0) throw RejectedInput("ranging_rmse: trials must be >= 1");
  if (scene.num_targets() != 1) throw RejectedInput("ranging_rmse: scene must hold exactly one target");
  const std::size_t ns = snr_grid.size();
  std::vector<double> sq_err(ns * trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    const ComplexSignal& x = waveforms[t];
    const double fs = scene.sample_rate(x.size());
    const double truth = estimate_range(static_cast<double>(scene.delays[0]), fs);
    for (std::size_t s = 0; s < ns; ++s) {
      RadarScene sc = scene;
      sc.snr_db = snr_grid[s];
      const ComplexSignal y = apply_radar_channel(x, sc, derive_seed(master_seed, 1 + s, t));
      const double est = estimate_range(static_cast<double>(estimate_delay(y, x)), fs);
      sq_err[s * trials + t] = (est - truth) * (est - truth);
    }
  });
  std::vector<RmsePoint> curve(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    double acc = 0.0;
    for (std::size_t t = 0; t < trials; ++t) acc += sq_err[s * trials + t];
    curve[s] = {snr_grid[s], std::sqrt(acc / static_cast<double>(trials)), trials};
  }
  return curve;
}

/// Produces the transmitted time-domain waveform for a trial seed.
using WaveformFactory = std::function<ComplexSignal(std::uint64_t seed)>;

/// As above, with trial t transmitting factory(derive_seed(master, 0, t)).
inline std::vector<RmsePoint> ranging_rmse(const WaveformFactory& factory, const RadarScene& scene,
                                           std::span<const double> snr_grid, std::size_t trials,
                                           std::uint64_t master_seed, std::size_t workers = 1) {
  if (trials == 0) throw RejectedInput("ranging_rmse: trials must be >= 1");
  std::vector<ComplexSignal> waveforms(trials, ComplexSignal(Domain::Time, {}));
  parallel_for(trials, workers,
               [&](std::size_t t) { waveforms[t] = factory(derive_seed(master_seed, 0, t)); });
  return ranging_rmse(waveforms, scene, snr_grid, master_seed, workers);
}

inline Table rmse_table(std::span<const RmsePoint> curve) {
  Table t{{"snr_db", "rmse_m", "trials"}, {}};
  for (const auto& p : curve) t.add({p.snr_db, p.rmse_m, static_cast<std::int64_t>(p.trials)});
  return t;
}

}  // namespace trpapr

#endif  // TRPAPR_SENSING_HPP
