#ifndef TRPAPR_QCQP_HPP
#define TRPAPR_QCQP_HPP

// Convex tone-reservation baseline:
//
//   minimize ||d + F_R^H r||_inf^2  subject to  ||r||_2^2 <= P_max
//
// solved by accelerated projected gradient on a sequence of p-norm smoothings
// with warm starts, plus an independent dense subgradient cross-check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "trpapr/error.hpp"
#include "trpapr/pgd.hpp"
#include "trpapr/random.hpp"
#include "trpapr/signal.hpp"
#include "trpapr/tone_plan.hpp"

namespace trpapr {

struct QcqpConfig {
  double p_max = 64.0;  // budget on ||r||^2
  double tol = 1e-9;    // relative objective change that ends a smoothing stage
  std::size_t max_iters = 500;  // per smoothing stage
  std::vector<double> schedule{8.0, 32.0, 128.0, 512.0, 2048.0};

  void validate() const {
    if (!(p_max > 0.0) || !std::isfinite(p_max)) throw RejectedInput("qcqp: p_max must be > 0");
    if (!(tol > 0.0 && tol < 1.0)) throw RejectedInput("qcqp: tol must lie in (0, 1)");
    if (max_iters == 0) throw RejectedInput("qcqp: max_iters must be positive");
    if (schedule.empty()) throw RejectedInput("qcqp: smoothing schedule is empty");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      if (!std::isfinite(schedule[i]) || schedule[i] < 2.0 || (i > 0 && schedule[i] <= schedule[i - 1])) {
        throw RejectedInput("qcqp: smoothing schedule must be increasing values >= 2");
      }
    }
  }
};

struct QcqpResult {
  std::vector<cplx> reserved;
  double peak = 0.0;     // ||d + F_R^H r||_inf of the returned iterate
  double papr_db = 0.0;  // NaN when the composite signal is identically zero
  std::size_t iterations = 0;
  // False when the last smoothing stage hit max_iters before reaching tol;
  // the best iterate found is still returned.
  bool converged = false;
};

/// r * min(1, sqrt(p_max) / ||r||).
inline void project_ball(std::vector<cplx>& r, double p_max) {
  const double norm2 = [&] {
    double e = 0.0;
    for (const cplx& v : r) e += std::norm(v);
    return e;
  }();
  if (norm2 <= p_max) return;
  const double scale = std::sqrt(p_max / norm2);
  for (cplx& v : r) v *= scale;
}

inline QcqpResult solve_qcqp_time_domain(std::span<const cplx> data_time, const TonePlan& plan,
                                         const QcqpConfig& cfg) {
  cfg.validate();
  detail::require_length(data_time.size(), plan.size(), "solve_qcqp (data waveform)");
  const std::size_t nr = plan.num_reserved();

  QcqpResult out;
  std::vector<cplx> r(nr);
  std::vector<cplx> best = r;
  double best_peak = max_abs(data_time);
  std::vector<cplx> weights;

  if (best_peak > 0.0 && nr > 0) {
    double lipschitz = 1.0;
    for (std::size_t stage = 0; stage < cfg.schedule.size(); ++stage) {
      const double p = cfg.schedule[stage];
      const bool final_stage = stage + 1 == cfg.schedule.size();
      std::vector<cplx> y = r;
      double momentum = 1.0;
      double previous = std::numeric_limits<double>::infinity();
      bool stage_converged = false;

      for (std::size_t k = 0; k < cfg.max_iters; ++k) {
        ++out.iterations;
        const std::vector<cplx> xy = detail::composite(y, data_time, plan);
        const double fy = detail::pnorm_and_weights(xy, p, weights);
        if (fy == 0.0) {
          r = y;
          best = y;
          best_peak = 0.0;
          stage_converged = true;
          break;
        }
        const std::vector<cplx> grad = partial_dft(weights, plan);

        // Backtracking on the local smoothness estimate.
        std::vector<cplx> next(nr);
        std::vector<cplx> x_next;
        double f_next = 0.0;
        for (;;) {
          for (std::size_t i = 0; i < nr; ++i) next[i] = y[i] - grad[i] / lipschitz;
          project_ball(next, cfg.p_max);
          x_next = detail::composite(next, data_time, plan);
          f_next = pnorm(x_next, p);
          double lin = 0.0;
          double dist2 = 0.0;
          for (std::size_t i = 0; i < nr; ++i) {
            const cplx step = next[i] - y[i];
            lin += grad[i].real() * step.real() + grad[i].imag() * step.imag();
            dist2 += std::norm(step);
          }
          if (f_next <= fy + lin + 0.5 * lipschitz * dist2 + 1e-14 * fy || dist2 == 0.0) break;
          lipschitz *= 2.0;
        }

        const double peak = max_abs(x_next);
        if (peak < best_peak) {
          best_peak = peak;
          best = next;
        }

        if (f_next > previous) {
          // Function-value restart of the momentum sequence.
          momentum = 1.0;
          y = next;
        } else {
          const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
          const double beta = (momentum - 1.0) / momentum_next;
          for (std::size_t i = 0; i < nr; ++i) y[i] = next[i] + beta * (next[i] - r[i]);
          momentum = momentum_next;
        }
        const bool small_change = std::abs(previous - f_next) <= cfg.tol * f_next;
        r = std::move(next);
        previous = f_next;
        lipschitz *= 0.9;
        if (small_change) {
          stage_converged = true;
          break;
        }
      }
      if (final_stage) out.converged = stage_converged;
      if (best_peak == 0.0) break;
    }
  } else {
    out.converged = true;
  }

  out.reserved = std::move(best);
  out.peak = best_peak;
  const std::vector<cplx> x = detail::composite(out.reserved, data_time, plan);
  out.papr_db = best_peak > 0.0 ? papr_db(x) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

inline QcqpResult solve_qcqp(const ComplexSignal& data, const TonePlan& plan, const QcqpConfig& cfg) {
  detail::require_domain(data, Domain::Freq, "solve_qcqp");
  const std::vector<cplx> zeros(plan.num_reserved());
  const ComplexSignal d_time = idft(embed(data.samples(), zeros, plan));
  return solve_qcqp_time_domain(d_time.samples(), plan, cfg);
}

struct CertifyOptions {
  std::size_t starts = 4;
  std::size_t iterations = 5000;
  double step_decay = 0.998;
  std::uint64_t seed = 0x5eed;
};

struct CertificateReport {
  double candidate_objective = 0.0;  // ||d + F_R^H r||_inf^2 at the candidate
  double oracle_objective = 0.0;     // best value found by the subgradient oracle
  double relative_gap = 0.0;         // (candidate - oracle) / oracle, 0 when both vanish
  bool candidate_feasible = false;   // ||r||^2 <= p_max + 1e-9
};

/**
 * Independent optimality cross-check for small instances (N <= 32 or so).
 *
 * Builds F_R^H and the data waveform as explicit dense matrices, then runs
 * projected subgradient descent on the exact peak modulus from a zero start
 * and several random starts inside the power ball. Normalized subgradient
 * steps shrink geometrically, starting at sqrt(p_max)/4. Shares no code path
 * with solve_qcqp beyond the tone plan itself.
 */
inline CertificateReport certify(std::span<const cplx> candidate, const ComplexSignal& data,
                                 const TonePlan& plan, const QcqpConfig& cfg,
                                 const CertifyOptions& opts = {}) {
  detail::require_domain(data, Domain::Freq, "certify");
  detail::require_length(data.size(), plan.num_data(), "certify (data)");
  detail::require_length(candidate.size(), plan.num_reserved(), "certify (candidate)");
  const std::size_t n = plan.size();
  const std::size_t nr = plan.num_reserved();
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  auto kernel = [&](std::size_t row, std::size_t bin) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>((row * bin) % n) /
                         static_cast<double>(n);
    return std::polar(inv_sqrt_n, phase);
  };

  std::vector<cplx> basis(n * nr);  // row-major F_R^H
  std::vector<cplx> d_time(n);
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t j = 0; j < nr; ++j) basis[row * nr + j] = kernel(row, plan.reserved()[j]);
    for (std::size_t j = 0; j < plan.num_data(); ++j) d_time[row] += kernel(row, plan.data()[j]) * data[j];
  }
  auto sample = [&](std::span<const cplx> r, std::size_t row) {
    cplx acc = d_time[row];
    for (std::size_t j = 0; j < nr; ++j) acc += basis[row * nr + j] * r[j];
    return acc;
  };
  auto peak_of = [&](std::span<const cplx> r) {
    double m = 0.0;
    for (std::size_t row = 0; row < n; ++row) m = std::max(m, std::abs(sample(r, row)));
    return m;
  };

  CertificateReport rep;
  double cand_norm2 = 0.0;
  for (const cplx& v : candidate) cand_norm2 += std::norm(v);
  rep.candidate_feasible = cand_norm2 <= cfg.p_max + 1e-9;
  const double cand_peak = peak_of(candidate);
  rep.candidate_objective = cand_peak * cand_peak;

  Rng rng(opts.seed);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < std::max<std::size_t>(opts.starts, 1); ++s) {
    std::vector<cplx> r(nr);
    if (s > 0) {
      r = complex_gaussian(rng, nr);
      const double radius = std::sqrt(cfg.p_max) * uniform01(rng);
      const double norm = l2_norm(r);
      for (cplx& v : r) v *= norm > 0.0 ? radius / norm : 0.0;
    }
    double step = 0.25 * std::sqrt(cfg.p_max);
    for (std::size_t k = 0; k < opts.iterations; ++k) {
      std::size_t arg = 0;
      double m = -1.0;
      cplx at{};
      for (std::size_t row = 0; row < n; ++row) {
        const cplx v = sample(r, row);
        if (std::abs(v) > m) {
          m = std::abs(v);
          arg = row;
          at = v;
        }
      }
      best = std::min(best, m);
      if (m == 0.0 || nr == 0) break;
      std::vector<cplx> g(nr);
      for (std::size_t j = 0; j < nr; ++j) g[j] = std::conj(basis[arg * nr + j]) * (at / m);
      const double gn = l2_norm(g);
      if (gn == 0.0) break;
      for (std::size_t j = 0; j < nr; ++j) r[j] -= (step / gn) * g[j];
      project_ball(r, cfg.p_max);
      step *= opts.step_decay;
    }
    best = std::min(best, peak_of(r));
  }
  rep.oracle_objective = best * best;
  if (rep.oracle_objective == 0.0) {
    rep.relative_gap = rep.candidate_objective == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    rep.relative_gap = (rep.candidate_objective - rep.oracle_objective) / rep.oracle_objective;
  }
  return rep;
}

}  // namespace trpapr

#endif  // TRPAPR_QCQP_HPP
