#ifndef TRPAPR_FFT_HPP
#define TRPAPR_FFT_HPP

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace trpapr {

using cplx = std::complex<double>;

/**
 * Precomputed tables for an unscaled length-n complex DFT.
 *
 * Power-of-two lengths run an iterative radix-2 Cooley-Tukey transform;
 * any other length falls back to direct O(n^2) summation over the same
 * root-of-unity table. Plans are immutable once built.
 */
class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n), roots_(n) {
    for (std::size_t k = 0; k < n_; ++k) {
      roots_[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) /
                                      static_cast<double>(n_));
    }
    if (std::has_single_bit(n_)) {
      const int bits = std::countr_zero(n_);
      bitrev_.resize(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        std::size_t r = 0;
        for (int b = 0; b < bits; ++b) {
          if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
        }
        bitrev_[i] = r;
      }
    }
  }

  std::size_t size() const { return n_; }

  /// X[k] = sum_n x[n] e^{-j 2 pi nk / N}, in place, no scaling.
  void forward(std::span<cplx> data) const { run(data, false); }

  /// x[n] = sum_k X[k] e^{+j 2 pi nk / N}, in place, no scaling.
  void inverse(std::span<cplx> data) const { run(data, true); }

 private:
  void run(std::span<cplx> data, bool inverse) const {
    if (bitrev_.empty()) {
      direct(data, inverse);
      return;
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (i < bitrev_[i]) std::swap(data[i], data[bitrev_[i]]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t stride = n_ / len;
      for (std::size_t start = 0; start < n_; start += len) {
        for (std::size_t j = 0; j < half; ++j) {
          const cplx w = inverse ? std::conj(roots_[j * stride]) : roots_[j * stride];
          const cplx a = data[start + j];
          const cplx b = data[start + j + half] * w;
          data[start + j] = a + b;
          data[start + j + half] = a - b;
        }
      }
    }
  }

  void direct(std::span<cplx> data, bool inverse) const {
    std::vector<cplx> out(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      cplx acc{0.0, 0.0};
      for (std::size_t n = 0; n < n_; ++n) {
        const cplx w = roots_[(n * k) % n_];
        acc += data[n] * (inverse ? std::conj(w) : w);
      }
      out[k] = acc;
    }
    std::copy(out.begin(), out.end(), data.begin());
  }

  std::size_t n_;
  std::vector<cplx> roots_;
  std::vector<std::size_t> bitrev_;
};

/// Per-thread plan cache; plans are never shared across threads.
inline const FftPlan& fft_plan(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::unique_ptr<FftPlan>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FftPlan>(n);
  return *slot;
}

}  // namespace trpapr

#endif  // TRPAPR_FFT_HPP
