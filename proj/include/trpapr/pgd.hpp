#ifndef TRPAPR_PGD_HPP
#define TRPAPR_PGD_HPP

// Projected gradient descent for unimodular reserved tones.
//
// Minimizes || d + F_R^H r ||_p over r with |r_i| = 1 for every reserved tone:
// a fixed-step Euclidean gradient step on the p-norm surrogate of the peak,
// followed by radial projection back onto the product of unit circles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "trpapr/error.hpp"
#include "trpapr/random.hpp"
#include "trpapr/signal.hpp"
#include "trpapr/table.hpp"
#include "trpapr/tone_plan.hpp"

namespace trpapr {

struct RandomPhases {
  std::uint64_t seed = 0;
};

/// Start from a caller-supplied vector; it is projected before the first step,
/// so an all-zero vector starts from all ones.
struct GivenVector {
  std::vector<cplx> values;
};

using Initialization = std::variant<RandomPhases, GivenVector>;

struct SolverConfig {
  double p = 50.0;
  double alpha = 1.0;
  std::size_t iterations = 2000;
  Initialization init = RandomPhases{};
  bool record_trace = false;
  // Stop once the relative objective change drops to this value; 0 runs all iterations.
  double rel_tol = 0.0;

  void validate() const {
    if (!std::isfinite(p) || p < 2.0) throw RejectedInput("solver: p must be finite and >= 2");
    if (!std::isfinite(alpha) || alpha <= 0.0) throw RejectedInput("solver: alpha must be > 0");
    if (!(rel_tol >= 0.0)) throw RejectedInput("solver: rel_tol must be >= 0");
  }
};

struct TracePoint {
  std::size_t iteration = 0;
  double objective = 0.0;
  double papr_db = 0.0;
  double gradient_norm = 0.0;
};

struct SolverResult {
  std::vector<cplx> reserved;  // unit modulus, one per reserved tone
  double papr_db = 0.0;
  double objective = 0.0;
  std::vector<TracePoint> trace;
  std::size_t iterations_run = 0;
};

/// Radial projection onto the unit circle; entries with |r_i| <= 1e-15 map to 1.
inline std::vector<cplx> project_unit_circle(std::span<const cplx> r) {
  std::vector<cplx> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double mag = std::abs(r[i]);
    out[i] = mag > 1e-15 ? r[i] / mag : cplx{1.0, 0.0};
  }
  return out;
}

namespace detail {

/**
 * One evaluation of the p-norm of x together with the weights
 * u_n = |x_n|^{p-2} x_n / ||x||_p^{p-1}, both computed relative to max|x_n|.
 * Returns 0 and leaves `weights` zeroed for an all-zero x.
 */
inline double pnorm_and_weights(std::span<const cplx> x, double p, std::vector<cplx>& weights) {
  weights.assign(x.size(), cplx{});
  double peak2 = 0.0;
  for (const cplx& s : x) peak2 = std::max(peak2, std::norm(s));
  if (peak2 == 0.0) return 0.0;
  const double peak = std::sqrt(peak2);
  const double half_exp = 0.5 * (p - 2.0);
  double sum = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double s2 = std::norm(x[n]) / peak2;
    const double w = unit_pow(s2, half_exp);
    sum += w * s2;
    weights[n] = w * (x[n] / peak);
  }
  const double scale = std::pow(sum, -(p - 1.0) / p);
  for (cplx& u : weights) u *= scale;
  return peak * std::pow(sum, 1.0 / p);
}

inline std::vector<cplx> composite(std::span<const cplx> reserved, std::span<const cplx> data_time,
                                   const TonePlan& plan) {
  require_length(data_time.size(), plan.size(), "composite signal (data)");
  std::vector<cplx> x = partial_idft(reserved, plan);
  for (std::size_t n = 0; n < x.size(); ++n) x[n] += data_time[n];
  return x;
}

inline void require_unimodular(std::span<const cplx> r, const char* op) {
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (std::abs(std::abs(r[i]) - 1.0) > 1e-9) {
      throw ContractViolation(std::string(op) + ": reserved tone " + std::to_string(i) +
                              " is off the unit circle (|r| = " + std::to_string(std::abs(r[i])) + ")");
    }
  }
}

}  // namespace detail

/// || d_time + F_R^H r ||_p for unimodular r.
inline double objective(std::span<const cplx> reserved, std::span<const cplx> data_time,
                        const TonePlan& plan, double p) {
  detail::require_unimodular(reserved, "objective");
  return pnorm(detail::composite(reserved, data_time, plan), p);
}

/**
 * Gradient of || d_time + F_R^H r ||_p with respect to (Re r, Im r), packed as
 * a complex vector g = F_R u. The steepest descent direction is -g. Does not
 * require r to be unimodular.
 */
inline std::vector<cplx> euclidean_gradient(std::span<const cplx> reserved,
                                            std::span<const cplx> data_time, const TonePlan& plan,
                                            double p) {
  if (!std::isfinite(p) || p < 2.0) throw RejectedInput("euclidean_gradient: p must be >= 2");
  const std::vector<cplx> x = detail::composite(reserved, data_time, plan);
  std::vector<cplx> u;
  if (detail::pnorm_and_weights(x, p, u) == 0.0) {
    throw UndefinedValue("euclidean_gradient: composite signal is zero, gradient undefined");
  }
  return partial_dft(u, plan);
}

/// Runs the fixed-step loop starting from a precomputed data waveform d_time.
inline SolverResult solve_time_domain(std::span<const cplx> data_time, const TonePlan& plan,
                                      const SolverConfig& cfg) {
  cfg.validate();
  detail::require_length(data_time.size(), plan.size(), "solve (data waveform)");
  const std::size_t nr = plan.num_reserved();

  std::vector<cplx> r;
  if (const auto* given = std::get_if<GivenVector>(&cfg.init)) {
    detail::require_length(given->values.size(), nr, "solve (initial vector)");
    r = project_unit_circle(given->values);
  } else {
    Rng rng(std::get<RandomPhases>(cfg.init).seed);
    r = random_phases(rng, nr);
  }

  SolverResult result;
  std::vector<cplx> weights;
  double previous = 0.0;
  for (std::size_t k = 0;; ++k) {
    const std::vector<cplx> x = detail::composite(r, data_time, plan);
    const double obj = detail::pnorm_and_weights(x, cfg.p, weights);
    if (obj == 0.0) throw UndefinedValue("solve: composite signal is zero, gradient undefined");
    const std::vector<cplx> grad = partial_dft(weights, plan);

    const bool converged = cfg.rel_tol > 0.0 && k > 0 && std::abs(previous - obj) <= cfg.rel_tol * obj;
    const bool last = k == cfg.iterations || converged;
    if (cfg.record_trace || k % 10 == 0 || last) {
      result.trace.push_back({k, obj, papr_db(x), l2_norm(grad)});
    }
    if (last) {
      result.objective = obj;
      result.papr_db = papr_db(x);
      result.iterations_run = k;
      break;
    }
    previous = obj;
    for (std::size_t i = 0; i < nr; ++i) r[i] -= cfg.alpha * grad[i];
    r = project_unit_circle(r);
  }
  result.reserved = std::move(r);
  return result;
}

/// Reserved tones for the data symbols `data` (one per data subcarrier of `plan`).
inline SolverResult solve(const ComplexSignal& data, const TonePlan& plan, const SolverConfig& cfg) {
  detail::require_domain(data, Domain::Freq, "solve");
  const std::vector<cplx> zeros(plan.num_reserved());
  const ComplexSignal d_time = idft(embed(data.samples(), zeros, plan));
  return solve_time_domain(d_time.samples(), plan, cfg);
}

/// 1 / max ||grad f||, the advisory step bound from recorded gradient norms.
inline double lipschitz_step_bound(std::span<const double> gradient_norms) {
  if (gradient_norms.empty()) throw RejectedInput("lipschitz_step_bound: no gradient norms recorded");
  const double g = *std::max_element(gradient_norms.begin(), gradient_norms.end());
  return 1.0 / g;
}

inline double lipschitz_step_bound(std::span<const TracePoint> trace) {
  std::vector<double> norms;
  norms.reserve(trace.size());
  for (const auto& t : trace) norms.push_back(t.gradient_norm);
  return lipschitz_step_bound(norms);
}

/// Convergence trace with columns iter,objective,papr_db.
inline Table trace_table(std::span<const TracePoint> trace) {
  Table t{{"iter", "objective", "papr_db"}, {}};
  for (const auto& p : trace) t.add({static_cast<std::int64_t>(p.iteration), p.objective, p.papr_db});
  return t;
}

}  // namespace trpapr

#endif  // TRPAPR_PGD_HPP
