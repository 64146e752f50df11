#ifndef TRPAPR_SIGNAL_HPP
#define TRPAPR_SIGNAL_HPP

// Complex-vector primitives: unitary DFT/IDFT, constellations, PAPR and p-norms.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "trpapr/error.hpp"
#include "trpapr/fft.hpp"

namespace trpapr {

enum class Domain { Time, Freq };

inline const char* to_string(Domain d) { return d == Domain::Time ? "time" : "frequency"; }

/**
 * A fixed-length vector of complex samples tagged with the domain it lives in.
 *
 * The tag is checked by the transforms so a time-domain waveform can never be
 * fed to idft() by accident. Length is fixed at construction; an empty signal
 * is only produced by degenerate tone plans (no data or no reserved tones).
 */
class ComplexSignal {
 public:
  ComplexSignal(Domain domain, std::vector<cplx> samples)
      : domain_(domain), samples_(std::move(samples)) {}

  static ComplexSignal zeros(Domain domain, std::size_t n) {
    return ComplexSignal(domain, std::vector<cplx>(n));
  }

  Domain domain() const { return domain_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  std::span<const cplx> samples() const { return samples_; }
  std::span<cplx> samples() { return samples_; }
  const std::vector<cplx>& vector() const { return samples_; }

  const cplx& operator[](std::size_t i) const { return samples_[i]; }
  cplx& operator[](std::size_t i) { return samples_[i]; }

  /// Squared Euclidean norm.
  double energy() const {
    double e = 0.0;
    for (const cplx& s : samples_) e += std::norm(s);
    return e;
  }

  friend bool operator==(const ComplexSignal&, const ComplexSignal&) = default;

 private:
  Domain domain_;
  std::vector<cplx> samples_;
};

enum class Modulation { Psk, Qam };

/// Unit-average-power constellation. PSK of any power-of-two order, square QAM
/// (order a power of four) with natural row-major labelling.
class Constellation {
 public:
  static Constellation psk(std::size_t order) {
    if (order < 2 || !std::has_single_bit(order)) {
      throw RejectedInput("PSK order must be a power of two >= 2, got " + std::to_string(order));
    }
    std::vector<cplx> pts(order);
    for (std::size_t k = 0; k < order; ++k) {
      pts[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                   static_cast<double>(order));
    }
    // Snap points on the axes to exact values.
    const cplx axes[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (std::size_t q = 0; q < 4; ++q) {
      if ((q * order) % 4 == 0) pts[q * order / 4] = axes[q];
    }
    return Constellation(Modulation::Psk, std::move(pts));
  }

  static Constellation qam(std::size_t order) {
    const bool square = std::has_single_bit(order) && std::countr_zero(order) % 2 == 0;
    if (order < 4 || !square) {
      throw RejectedInput("QAM order must be a power of four >= 4, got " + std::to_string(order));
    }
    const auto side = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(order))));
    // Mean power of the odd-integer grid {+-1, +-3, ...}^2 is 2(side^2 - 1)/3.
    const double scale = std::sqrt(2.0 * (static_cast<double>(order) - 1.0) / 3.0);
    std::vector<cplx> pts(order);
    for (std::size_t i = 0; i < side; ++i) {
      for (std::size_t q = 0; q < side; ++q) {
        const double re = 2.0 * static_cast<double>(i) - static_cast<double>(side - 1);
        const double im = 2.0 * static_cast<double>(q) - static_cast<double>(side - 1);
        pts[i * side + q] = cplx(re, im) / scale;
      }
    }
    return Constellation(Modulation::Qam, std::move(pts));
  }

  static Constellation make(Modulation kind, std::size_t order) {
    return kind == Modulation::Psk ? psk(order) : qam(order);
  }

  Modulation kind() const { return kind_; }
  std::size_t order() const { return points_.size(); }
  std::span<const cplx> points() const { return points_; }
  const cplx& operator[](std::size_t i) const { return points_[i]; }

 private:
  Constellation(Modulation kind, std::vector<cplx> points)
      : kind_(kind), points_(std::move(points)) {}

  Modulation kind_;
  std::vector<cplx> points_;
};

/// Maps symbol labels to constellation points, producing a frequency-domain signal.
inline ComplexSignal map_symbols(std::span<const std::uint32_t> indices,
                                 const Constellation& constellation) {
  std::vector<cplx> out(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= constellation.order()) {
      throw RejectedInput("symbol index " + std::to_string(indices[i]) + " at position " +
                          std::to_string(i) + " is outside a constellation of order " +
                          std::to_string(constellation.order()));
    }
    out[i] = constellation[indices[i]];
  }
  return ComplexSignal(Domain::Freq, std::move(out));
}

namespace detail {

inline void require_domain(const ComplexSignal& x, Domain expected, const char* op) {
  if (x.domain() != expected) {
    throw ContractViolation(std::string(op) + " expects a " + to_string(expected) +
                            "-domain signal, got " + to_string(x.domain()));
  }
}

inline void require_nonempty(std::size_t n, const char* op) {
  if (n == 0) throw RejectedInput(std::string(op) + ": empty signal");
}

}  // namespace detail

/// Unitary inverse DFT: x[n] = (1/sqrt N) sum_k X[k] e^{+j2 pi nk/N}.
inline ComplexSignal idft(const ComplexSignal& freq) {
  detail::require_domain(freq, Domain::Freq, "idft");
  detail::require_nonempty(freq.size(), "idft");
  std::vector<cplx> data(freq.samples().begin(), freq.samples().end());
  fft_plan(data.size()).inverse(data);
  const double scale = 1.0 / std::sqrt(static_cast<double>(data.size()));
  for (cplx& v : data) v *= scale;
  return ComplexSignal(Domain::Time, std::move(data));
}

/// Unitary forward DFT, the exact inverse of idft().
inline ComplexSignal dft(const ComplexSignal& time) {
  detail::require_domain(time, Domain::Time, "dft");
  detail::require_nonempty(time.size(), "dft");
  std::vector<cplx> data(time.samples().begin(), time.samples().end());
  fft_plan(data.size()).forward(data);
  const double scale = 1.0 / std::sqrt(static_cast<double>(data.size()));
  for (cplx& v : data) v *= scale;
  return ComplexSignal(Domain::Freq, std::move(data));
}

/// PAPR in dB of raw time samples: 10 log10(max|x|^2 / mean|x|^2).
inline double papr_db(std::span<const cplx> x) {
  detail::require_nonempty(x.size(), "papr_db");
  double peak = 0.0;
  double total = 0.0;
  for (const cplx& s : x) {
    const double pw = std::norm(s);
    peak = std::max(peak, pw);
    total += pw;
  }
  if (peak == 0.0) throw UndefinedValue("papr_db: PAPR of an all-zero signal is undefined");
  return 10.0 * std::log10(peak * static_cast<double>(x.size()) / total);
}

inline double papr_db(const ComplexSignal& x) {
  detail::require_domain(x, Domain::Time, "papr_db");
  return papr_db(x.samples());
}

/**
 * PAPR of the time waveform of a spectrum sampled `oversampling` times faster
 * than Nyquist. Subcarrier k is treated as frequency k/N cycles per sample, so
 * the spectrum is zero-padded at the top end before a length L*N IDFT.
 * oversampling == 1 is identical to papr_db(idft(freq)).
 */
inline double papr_db_oversampled(const ComplexSignal& freq, std::size_t oversampling) {
  detail::require_domain(freq, Domain::Freq, "papr_db_oversampled");
  if (oversampling == 0) throw RejectedInput("papr_db_oversampled: oversampling factor must be >= 1");
  std::vector<cplx> padded(freq.size() * oversampling);
  std::copy(freq.samples().begin(), freq.samples().end(), padded.begin());
  return papr_db(idft(ComplexSignal(Domain::Freq, std::move(padded))));
}

namespace detail {

/// base^exponent for base in [0, 1]; integral exponents up to 4096 use
/// binary powering instead of std::pow.
inline double unit_pow(double base, double exponent) {
  if (exponent == std::floor(exponent) && exponent >= 0.0 && exponent <= 4096.0) {
    auto e = static_cast<unsigned>(exponent);
    double result = 1.0;
    while (e != 0) {
      if (e & 1u) result *= base;
      e >>= 1;
      if (e != 0) base *= base;
    }
    return result;
  }
  return std::pow(base, exponent);
}

}  // namespace detail

/**
 * p-norm with the largest modulus factored out before exponentiation, so that
 * p = 150 does not overflow for moduli above ~100.
 */
inline double pnorm(std::span<const cplx> x, double p) {
  detail::require_nonempty(x.size(), "pnorm");
  if (!std::isfinite(p) || p < 2.0) {
    throw RejectedInput("pnorm: exponent must be finite and >= 2, got " + std::to_string(p));
  }
  double peak2 = 0.0;
  for (const cplx& s : x) peak2 = std::max(peak2, std::norm(s));
  if (peak2 == 0.0) return 0.0;
  double acc = 0.0;
  for (const cplx& s : x) acc += detail::unit_pow(std::norm(s) / peak2, 0.5 * p);
  return std::sqrt(peak2) * std::pow(acc, 1.0 / p);
}

inline double pnorm(const ComplexSignal& x, double p) { return pnorm(x.samples(), p); }

/// Largest modulus.
inline double max_abs(std::span<const cplx> x) {
  double m = 0.0;
  for (const cplx& s : x) m = std::max(m, std::abs(s));
  return m;
}

inline double l2_norm(std::span<const cplx> x) {
  double e = 0.0;
  for (const cplx& s : x) e += std::norm(s);
  return std::sqrt(e);
}

}  // namespace trpapr

#endif  // TRPAPR_SIGNAL_HPP
