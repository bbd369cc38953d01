#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fieldex::fft {

using cdouble = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

// Iterative radix-2 complex DFT, power-of-two sizes only. Twiddles and the
// bit-reversal table are precomputed once, so a plan is immutable and safe to
// share across threads.
class Plan {
 public:
  explicit Plan(std::size_t n) : n_(n) {
    if (!is_pow2(n)) throw std::invalid_argument("fft::Plan: size must be a power of two");
    rev_.resize(n);
    std::uint32_t lg = 0;
    while ((std::size_t{1} << lg) < n) ++lg;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::uint32_t b = 0; b < lg; ++b) r |= ((i >> b) & 1u) << (lg - 1 - b);
      rev_[i] = static_cast<std::uint32_t>(r);
    }
    tw_.reserve(n > 1 ? n - 1 : 0);
    off_.assign(lg + 1, 0);
    std::size_t stage = 0;
    for (std::size_t len = 2; len <= n; len <<= 1, ++stage) {
      off_[stage] = tw_.size();
      const double ang = -2.0 * 3.14159265358979323846 / static_cast<double>(len);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const double a = ang * static_cast<double>(j);
        tw_.emplace_back(std::cos(a), std::sin(a));
      }
    }
  }

  std::size_t size() const { return n_; }

  // In-place forward transform: x_k <- sum_j x_j exp(-2 pi i j k / n).
  void forward(cdouble* x) const {
    const std::size_t n = n_;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t r = rev_[i];
      if (i < r) std::swap(x[i], x[r]);
    }
    std::size_t stage = 0;
    for (std::size_t len = 2; len <= n; len <<= 1, ++stage) {
      const cdouble* w = tw_.data() + off_[stage];
      const std::size_t half = len / 2;
      for (std::size_t i = 0; i < n; i += len) {
        cdouble* lo = x + i;
        cdouble* hi = x + i + half;
        for (std::size_t j = 0; j < half; ++j) {
          const cdouble u = lo[j];
          const cdouble t = hi[j] * w[j];
          lo[j] = u + t;
          hi[j] = u - t;
        }
      }
    }
  }

  void forward(std::vector<cdouble>& x) const {
    if (x.size() != n_) throw std::invalid_argument("fft::Plan::forward: size mismatch");
    forward(x.data());
  }

 private:
  std::size_t n_;
  std::vector<std::uint32_t> rev_;
  std::vector<cdouble> tw_;
  std::vector<std::size_t> off_;
};

}  // namespace fieldex::fft
