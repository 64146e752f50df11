#ifndef TRPAPR_TONE_PLAN_HPP
#define TRPAPR_TONE_PLAN_HPP

// Data/reserved subcarrier partition and the reserved-tone transforms.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "trpapr/error.hpp"
#include "trpapr/signal.hpp"

namespace trpapr {

/**
 * Partition of subcarriers {0, ..., N-1} into a data set and a reserved set.
 *
 * Both index lists are kept sorted; they are disjoint and together cover
 * every subcarrier. A plan with every tone reserved (no data) is valid.
 */
class TonePlan {
 public:
  /// Reserved indices may come in any order; duplicates and indices >= n are rejected.
  static TonePlan from_reserved(std::size_t n, std::vector<std::size_t> reserved) {
    if (n == 0) throw RejectedInput("tone plan: subcarrier count must be positive");
    std::sort(reserved.begin(), reserved.end());
    if (auto dup = std::adjacent_find(reserved.begin(), reserved.end()); dup != reserved.end()) {
      throw RejectedInput("tone plan: duplicate reserved index " + std::to_string(*dup));
    }
    if (!reserved.empty() && reserved.back() >= n) {
      throw RejectedInput("tone plan: reserved index " + std::to_string(reserved.back()) +
                          " out of range for N = " + std::to_string(n));
    }
    return TonePlan(n, std::move(reserved));
  }

  /// Every (n / count)-th subcarrier starting at 0; count must divide n.
  static TonePlan equispaced(std::size_t n, std::size_t count) {
    if (count == 0 || count > n || n % count != 0) {
      throw RejectedInput("tone plan: equispaced layout needs a reserved count dividing N (N = " +
                          std::to_string(n) + ", count = " + std::to_string(count) + ")");
    }
    std::vector<std::size_t> idx(count);
    for (std::size_t i = 0; i < count; ++i) idx[i] = i * (n / count);
    return TonePlan(n, std::move(idx));
  }

  /**
   * `count` indices spread over [0, n-1] with both endpoints included:
   * round(i (n-1) / (count-1)), halves rounded up. For n = 512, count = 64
   * this is the 1-based list 1, 9, 17, ..., 496, 504, 512 shifted to 0-based.
   */
  static TonePlan spread(std::size_t n, std::size_t count) {
    if (count == 0 || count > n) {
      throw RejectedInput("tone plan: spread layout needs 1 <= count <= N");
    }
    std::vector<std::size_t> idx(count);
    if (count == 1) {
      idx[0] = 0;
    } else {
      const std::size_t den = count - 1;
      for (std::size_t i = 0; i < count; ++i) idx[i] = (2 * i * (n - 1) + den) / (2 * den);
    }
    return TonePlan(n, std::move(idx));
  }

  std::size_t size() const { return n_; }
  std::size_t num_reserved() const { return reserved_.size(); }
  std::size_t num_data() const { return data_.size(); }
  const std::vector<std::size_t>& reserved() const { return reserved_; }
  const std::vector<std::size_t>& data() const { return data_; }
  bool is_reserved(std::size_t k) const { return std::binary_search(reserved_.begin(), reserved_.end(), k); }

  friend bool operator==(const TonePlan& a, const TonePlan& b) {
    return a.n_ == b.n_ && a.reserved_ == b.reserved_;
  }

 private:
  TonePlan(std::size_t n, std::vector<std::size_t> reserved) : n_(n), reserved_(std::move(reserved)) {
    data_.reserve(n_ - reserved_.size());
    std::size_t j = 0;
    for (std::size_t k = 0; k < n_; ++k) {
      if (j < reserved_.size() && reserved_[j] == k) {
        ++j;
      } else {
        data_.push_back(k);
      }
    }
  }

  std::size_t n_;
  std::vector<std::size_t> reserved_;
  std::vector<std::size_t> data_;
};

namespace detail {

inline void require_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw RejectedInput(std::string(what) + ": expected length " + std::to_string(want) + ", got " +
                        std::to_string(got));
  }
}

}  // namespace detail

/// Places data symbols on D and reserved tones on R.
inline ComplexSignal embed(std::span<const cplx> data, std::span<const cplx> reserved,
                           const TonePlan& plan) {
  detail::require_length(data.size(), plan.num_data(), "embed (data)");
  detail::require_length(reserved.size(), plan.num_reserved(), "embed (reserved)");
  std::vector<cplx> out(plan.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[plan.data()[i]] = data[i];
  for (std::size_t i = 0; i < reserved.size(); ++i) out[plan.reserved()[i]] = reserved[i];
  return ComplexSignal(Domain::Freq, std::move(out));
}

inline ComplexSignal embed(const ComplexSignal& data, const ComplexSignal& reserved,
                           const TonePlan& plan) {
  detail::require_domain(data, Domain::Freq, "embed");
  detail::require_domain(reserved, Domain::Freq, "embed");
  return embed(data.samples(), reserved.samples(), plan);
}

namespace detail {

inline ComplexSignal gather(const ComplexSignal& x, const std::vector<std::size_t>& idx,
                            const TonePlan& plan, const char* op) {
  require_domain(x, Domain::Freq, op);
  require_length(x.size(), plan.size(), op);
  std::vector<cplx> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = x[idx[i]];
  return ComplexSignal(Domain::Freq, std::move(out));
}

}  // namespace detail

inline ComplexSignal extract_data(const ComplexSignal& x, const TonePlan& plan) {
  return detail::gather(x, plan.data(), plan, "extract_data");
}

inline ComplexSignal extract_rt(const ComplexSignal& x, const TonePlan& plan) {
  return detail::gather(x, plan.reserved(), plan, "extract_rt");
}

/// Time-domain contribution of the reserved tones, i.e. idft(embed(0, r)).
inline std::vector<cplx> partial_idft(std::span<const cplx> reserved, const TonePlan& plan) {
  detail::require_length(reserved.size(), plan.num_reserved(), "partial_idft");
  std::vector<cplx> buf(plan.size());
  for (std::size_t i = 0; i < reserved.size(); ++i) buf[plan.reserved()[i]] = reserved[i];
  fft_plan(buf.size()).inverse(buf);
  const double scale = 1.0 / std::sqrt(static_cast<double>(buf.size()));
  for (cplx& v : buf) v *= scale;
  return buf;
}

inline ComplexSignal partial_idft(const ComplexSignal& reserved, const TonePlan& plan) {
  detail::require_domain(reserved, Domain::Freq, "partial_idft");
  return ComplexSignal(Domain::Time, partial_idft(reserved.samples(), plan));
}

/// Adjoint of partial_idft: unitary DFT restricted to the reserved bins.
inline std::vector<cplx> partial_dft(std::span<const cplx> time, const TonePlan& plan) {
  detail::require_length(time.size(), plan.size(), "partial_dft");
  std::vector<cplx> buf(time.begin(), time.end());
  fft_plan(buf.size()).forward(buf);
  const double scale = 1.0 / std::sqrt(static_cast<double>(buf.size()));
  std::vector<cplx> out(plan.num_reserved());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf[plan.reserved()[i]] * scale;
  return out;
}

// Tone-plan files: one 0-based reserved index per line, '#' starts a comment.

inline TonePlan read_tone_plan(std::istream& in, std::size_t n) {
  std::vector<std::size_t> idx;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    std::string extra;
    std::size_t used = 0;
    long long v = -1;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || v < 0 || (ls >> extra)) {
      throw RejectedInput("tone plan file line " + std::to_string(lineno) +
                          ": expected one non-negative integer");
    }
    idx.push_back(static_cast<std::size_t>(v));
  }
  return TonePlan::from_reserved(n, std::move(idx));
}

inline TonePlan read_tone_plan_file(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw RejectedInput("cannot open tone plan file '" + path + "'");
  return read_tone_plan(in, n);
}

inline void write_tone_plan(std::ostream& out, const TonePlan& plan) {
  out << "# reserved subcarriers, N = " << plan.size() << ", N_r = " << plan.num_reserved() << '\n';
  for (std::size_t k : plan.reserved()) out << k << '\n';
}

}  // namespace trpapr

#endif  // TRPAPR_TONE_PLAN_HPP
