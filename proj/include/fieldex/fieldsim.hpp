#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fieldex/covariance.hpp"
#include "fieldex/fft.hpp"
#include "fieldex/rng.hpp"

namespace fieldex::sim {

struct LatticeSpec {
  int dim = 1;
  std::vector<double> extent;
  std::vector<double> step;

  static constexpr std::uint64_t kDefaultMaxPoints = std::uint64_t{1} << 24;

  std::vector<std::size_t> points_per_axis() const {
    std::vector<std::size_t> n(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      n[ii] = static_cast<std::size_t>(std::floor(extent[ii] / step[ii])) + 1;
    }
    return n;
  }

  std::size_t total_points() const {
    std::size_t t = 1;
    for (std::size_t n : points_per_axis()) t *= n;
    return t;
  }

  void validate(std::uint64_t max_points = kDefaultMaxPoints) const {
    if (dim < 1 || dim > 2) throw std::invalid_argument("LatticeSpec: dim must be 1 or 2");
    if (extent.size() != static_cast<std::size_t>(dim) ||
        step.size() != static_cast<std::size_t>(dim))
      throw std::invalid_argument("LatticeSpec: extent/step size mismatch");
    for (int i = 0; i < dim; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      if (!(extent[ii] >= 0.0) || !(step[ii] > 0.0))
        throw std::invalid_argument("LatticeSpec: extent must be >= 0 and step > 0");
    }
    if (total_points() > max_points)
      throw std::invalid_argument("LatticeSpec: lattice exceeds the configured memory cap");
  }
};

struct FieldSample {
  LatticeSpec lattice;
  std::vector<double> values;  // row-major by axis order
  std::uint64_t seed = 0;
};

struct FbmPath {
  double hurst = 0.5;
  double step = 0.0;
  std::vector<double> values;  // B(0) = 0 first
};

namespace detail {

// Eigenvalues of the circulant extension of a sampled covariance sequence.
// Returns empty if the most negative eigenvalue is below -tol; eigenvalues in
// [-tol, 0) are clamped to zero.
inline std::vector<double> circulant_eigs_1d(const std::function<double(double)>& cov, double h,
                                             std::size_t m, double tol, double* worst) {
  std::vector<fft::cdouble> c(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t k = std::min(j, m - j);
    c[j] = fft::cdouble(cov(static_cast<double>(k) * h), 0.0);
  }
  fft::Plan plan(m);
  plan.forward(c.data());
  std::vector<double> lam(m);
  double mn = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    lam[j] = c[j].real();
    mn = std::min(mn, lam[j]);
  }
  if (worst) *worst = mn;
  if (mn < -tol) return {};
  for (double& v : lam) v = std::max(v, 0.0);
  return lam;
}

}  // namespace detail

struct SamplerOptions {
  int padding_doublings = 3;
  double eig_clamp_tol = 1e-10;
  std::size_t dense_fallback_max = 4096;
  std::uint64_t max_points = LatticeSpec::kDefaultMaxPoints;
};

// Exact stationary Gaussian sampling on a regular lattice: circulant
// embedding diagonalized by the FFT, with a dense eigenfactorization
// fallback for small lattices whose embedding fails.
class CirculantSampler {
 public:
  CirculantSampler(std::function<double(std::span<const double>)> cov, LatticeSpec lattice,
                   SamplerOptions opts = {})
      : cov_(std::move(cov)), lattice_(std::move(lattice)), opts_(opts) {
    lattice_.validate(opts_.max_points);
    n_ = lattice_.points_per_axis();
    total_ = lattice_.total_points();
    if (total_ == 1) return;  // degenerate lattice: a single standard normal
    if (lattice_.dim == 1) build_1d();
    else build_2d();
  }

  const LatticeSpec& lattice() const { return lattice_; }
  bool used_dense() const { return dense_; }
  double min_embedding_eigenvalue() const { return worst_eig_; }
  std::size_t embedding_size() const { return mtot_; }

  // One exact draw; identical (lattice, cov, seed, rep) reproduce bit-identical
  // output on one platform.
  void draw(std::uint64_t seed, std::uint64_t rep, std::span<double> out) const {
    std::vector<double> scratch;
    draw_two(seed, rep, out, scratch, false);
  }

  // Two independent draws from one embedding transform (real and imaginary
  // parts); the pair index addresses the RNG stream.
  void draw_pair(std::uint64_t seed, std::uint64_t pair, std::span<double> out_re,
                 std::span<double> out_im) const {
    std::vector<double> im(total_);
    draw_two(seed, pair, out_re, im, true);
    std::copy(im.begin(), im.end(), out_im.begin());
  }

  std::vector<double> draw_vector(std::uint64_t seed, std::uint64_t rep) const {
    std::vector<double> out(total_);
    draw(seed, rep, out);
    return out;
  }

 private:
  void build_1d() {
    const std::size_t n = n_[0];
    const double h = lattice_.step[0];
    auto cov1 = [this](double t) {
      const double lag[1] = {t};
      return cov_(std::span<const double>(lag, 1));
    };
    std::size_t m = fft::next_pow2(std::max<std::size_t>(2, 2 * (n - 1)));
    for (int attempt = 0; attempt <= opts_.padding_doublings; ++attempt) {
      auto lam = detail::circulant_eigs_1d(cov1, h, m, opts_.eig_clamp_tol, &worst_eig_);
      if (!lam.empty()) {
        lam_ = std::move(lam);
        mtot_ = m;
        plan_ = std::make_shared<fft::Plan>(m);
        return;
      }
      m *= 2;
    }
    fallback_dense();
  }

  void build_2d() {
    const std::size_t n1 = n_[0], n2 = n_[1];
    const double h1 = lattice_.step[0], h2 = lattice_.step[1];
    std::size_t m1 = fft::next_pow2(std::max<std::size_t>(2, 2 * (n1 - 1)));
    std::size_t m2 = fft::next_pow2(std::max<std::size_t>(2, 2 * (n2 - 1)));
    for (int attempt = 0; attempt <= opts_.padding_doublings; ++attempt) {
      std::vector<fft::cdouble> c(m1 * m2);
      for (std::size_t j1 = 0; j1 < m1; ++j1) {
        const double t1 = static_cast<double>(std::min(j1, m1 - j1)) * h1;
        for (std::size_t j2 = 0; j2 < m2; ++j2) {
          const double t2 = static_cast<double>(std::min(j2, m2 - j2)) * h2;
          const double lag[2] = {t1, t2};
          c[j1 * m2 + j2] = fft::cdouble(cov_(std::span<const double>(lag, 2)), 0.0);
        }
      }
      fft::Plan p1(m1), p2(m2);
      fft2(c, m1, m2, p1, p2);
      double mn = 0.0;
      for (const auto& v : c) mn = std::min(mn, v.real());
      worst_eig_ = mn;
      if (mn >= -opts_.eig_clamp_tol) {
        lam_.resize(m1 * m2);
        for (std::size_t j = 0; j < c.size(); ++j) lam_[j] = std::max(c[j].real(), 0.0);
        m1_ = m1;
        m2_ = m2;
        mtot_ = m1 * m2;
        plan_ = std::make_shared<fft::Plan>(m1);
        plan2_ = std::make_shared<fft::Plan>(m2);
        return;
      }
      m1 *= 2;
      m2 *= 2;
    }
    fallback_dense();
  }

  void fallback_dense() {
    if (total_ > opts_.dense_fallback_max) {
      throw std::runtime_error(
          "CirculantSampler: embedding not nonnegative-definite after padding (most negative "
          "eigenvalue " +
          std::to_string(worst_eig_) + ") and lattice too large for dense factorization");
    }
    dense_ = true;
    const std::size_t n = total_;
    Eigen::MatrixXd sigma(n, n);
    std::vector<double> ti(2), tj(2);
    for (std::size_t i = 0; i < n; ++i) {
      point(i, ti);
      for (std::size_t j = 0; j <= i; ++j) {
        point(j, tj);
        double lag[2] = {ti[0] - tj[0], lattice_.dim == 2 ? ti[1] - tj[1] : 0.0};
        const double v = cov_(std::span<const double>(lag, static_cast<std::size_t>(lattice_.dim)));
        sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        sigma(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("CirculantSampler: dense eigenfactorization failed");
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev[i] = std::sqrt(std::max(ev[i], 0.0));
    dense_factor_ = es.eigenvectors() * ev.asDiagonal();
  }

  void point(std::size_t flat, std::vector<double>& t) const {
    if (lattice_.dim == 1) {
      t[0] = static_cast<double>(flat) * lattice_.step[0];
    } else {
      t[0] = static_cast<double>(flat / n_[1]) * lattice_.step[0];
      t[1] = static_cast<double>(flat % n_[1]) * lattice_.step[1];
    }
  }

  static void fft2(std::vector<fft::cdouble>& a, std::size_t m1, std::size_t m2,
                   const fft::Plan& p1, const fft::Plan& p2) {
    for (std::size_t r = 0; r < m1; ++r) p2.forward(a.data() + r * m2);
    std::vector<fft::cdouble> col(m1);
    for (std::size_t cidx = 0; cidx < m2; ++cidx) {
      for (std::size_t r = 0; r < m1; ++r) col[r] = a[r * m2 + cidx];
      p1.forward(col.data());
      for (std::size_t r = 0; r < m1; ++r) a[r * m2 + cidx] = col[r];
    }
  }

  void draw_two(std::uint64_t seed, std::uint64_t rep, std::span<double> out_re,
                std::vector<double>& out_im, bool want_im) const {
    if (out_re.size() != total_)
      throw std::invalid_argument("CirculantSampler::draw: output size mismatch");
    rng::Stream stream(seed, rep, rng::Tag::kField);
    if (total_ == 1) {
      double a, b;
      stream.next_normal_pair(a, b);
      out_re[0] = a;
      if (want_im) out_im[0] = b;
      return;
    }
    if (dense_) {
      const auto n = static_cast<Eigen::Index>(total_);
      Eigen::VectorXd za(n), zb(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        double a, b;
        stream.next_normal_pair(a, b);
        za[i] = a;
        zb[i] = b;
      }
      Eigen::VectorXd xa = dense_factor_ * za;
      for (Eigen::Index i = 0; i < n; ++i) out_re[static_cast<std::size_t>(i)] = xa[i];
      if (want_im) {
        Eigen::VectorXd xb = dense_factor_ * zb;
        for (Eigen::Index i = 0; i < n; ++i) out_im[static_cast<std::size_t>(i)] = xb[i];
      }
      return;
    }
    std::vector<fft::cdouble> w(mtot_);
    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(mtot_));
    for (std::size_t j = 0; j < mtot_; ++j) {
      double a, b;
      stream.next_normal_pair(a, b);
      const double s = std::sqrt(lam_[j]) * inv_sqrt_m;
      w[j] = fft::cdouble(s * a, s * b);
    }
    if (lattice_.dim == 1) {
      plan_->forward(w.data());
      for (std::size_t i = 0; i < total_; ++i) out_re[i] = w[i].real();
      if (want_im)
        for (std::size_t i = 0; i < total_; ++i) out_im[i] = w[i].imag();
    } else {
      fft2(w, m1_, m2_, *plan_, *plan2_);
      for (std::size_t i1 = 0; i1 < n_[0]; ++i1)
        for (std::size_t i2 = 0; i2 < n_[1]; ++i2) {
          out_re[i1 * n_[1] + i2] = w[i1 * m2_ + i2].real();
          if (want_im) out_im[i1 * n_[1] + i2] = w[i1 * m2_ + i2].imag();
        }
    }
  }

  std::function<double(std::span<const double>)> cov_;
  LatticeSpec lattice_;
  SamplerOptions opts_;
  std::vector<std::size_t> n_;
  std::size_t total_ = 0;
  std::vector<double> lam_;
  std::size_t mtot_ = 0, m1_ = 0, m2_ = 0;
  std::shared_ptr<const fft::Plan> plan_, plan2_;
  bool dense_ = false;
  double worst_eig_ = 0.0;
  Eigen::MatrixXd dense_factor_;
};

inline FieldSample sample_field(const cov::CovarianceModel& model, const LatticeSpec& lattice,
                                std::uint64_t seed, SamplerOptions opts = {}) {
  model.validate();
  if (model.dim != lattice.dim)
    throw std::invalid_argument("sample_field: model/lattice dimension mismatch");
  CirculantSampler sampler(
      [&model](std::span<const double> lag) { return cov::evaluate(model, lag); }, lattice, opts);
  FieldSample out{lattice, sampler.draw_vector(seed, 0), seed};
  return out;
}

// xi = sqrt(1-rho) Y + sqrt(rho) U with the shared U drawn from its own
// substream of the seed.
inline FieldSample sample_mixture_field(const cov::MixtureFieldSpec& spec,
                                        const LatticeSpec& lattice, std::uint64_t seed,
                                        SamplerOptions opts = {}) {
  spec.validate();
  FieldSample s = sample_field(spec.base, lattice, seed, opts);
  const double rho = spec.rho();
  if (rho == 0.0) return s;
  rng::Stream ustream(seed, 0, rng::Tag::kMixtureShared);
  const double u = ustream.next_normal();
  const double c1 = std::sqrt(1.0 - rho), c2 = std::sqrt(rho);
  for (double& v : s.values) v = c1 * v + c2 * u;
  return s;
}

// Exact fractional Gaussian noise by circulant embedding, cumulated into a
// path with B(0) = 0. hurst = alpha/2; hurst = 1 is the degenerate linear
// path B(t) = t Z and is handled by the same embedding.
inline FbmPath sample_fbm(double hurst, double lambda, double step, std::uint64_t seed) {
  if (!(hurst > 0.0 && hurst <= 1.0))
    throw std::invalid_argument("sample_fbm: hurst outside (0,1]");
  if (!(step > 0.0 && step <= lambda / 4.0))
    throw std::invalid_argument("sample_fbm: step outside (0, lambda/4]");
  const auto m = static_cast<std::size_t>(std::llround(lambda / step));
  const double h2 = 2.0 * hurst;
  auto gamma = [&](double k) {
    return 0.5 * std::pow(step, h2) *
           (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) + std::pow(std::abs(k - 1.0), h2));
  };
  const std::size_t M = fft::next_pow2(std::max<std::size_t>(2, 2 * m));
  double worst = 0.0;
  auto lam = detail::circulant_eigs_1d(gamma, 1.0, M, 1e-10, &worst);
  if (lam.empty())
    throw std::runtime_error("sample_fbm: fGn embedding not nonnegative-definite (min eigenvalue " +
                             std::to_string(worst) + ")");
  fft::Plan plan(M);
  rng::Stream stream(seed, 0, rng::Tag::kFbm);
  std::vector<fft::cdouble> w(M);
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(M));
  for (std::size_t j = 0; j < M; ++j) {
    double a, b;
    stream.next_normal_pair(a, b);
    const double s = std::sqrt(lam[j]) * inv_sqrt_m;
    w[j] = fft::cdouble(s * a, s * b);
  }
  plan.forward(w.data());
  FbmPath path{hurst, step, std::vector<double>(m + 1, 0.0)};
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    acc += w[j].real();
    path.values[j + 1] = acc;
  }
  return path;
}

// Debug dump: 32-byte header (magic "FEXS", version, dim, n_i) then
// little-endian 64-bit floats.
inline void write_field_binary(const FieldSample& s, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("write_field_binary: cannot open " + path);
  unsigned char header[32] = {0};
  std::memcpy(header, "FEXS", 4);
  const auto n = s.lattice.points_per_axis();
  const std::uint32_t version = 1, dim = static_cast<std::uint32_t>(s.lattice.dim);
  const std::uint32_t n1 = static_cast<std::uint32_t>(n[0]);
  const std::uint32_t n2 = s.lattice.dim > 1 ? static_cast<std::uint32_t>(n[1]) : 0;
  std::memcpy(header + 4, &version, 4);
  std::memcpy(header + 8, &dim, 4);
  std::memcpy(header + 12, &n1, 4);
  std::memcpy(header + 16, &n2, 4);
  std::fwrite(header, 1, 32, f);
  std::fwrite(s.values.data(), sizeof(double), s.values.size(), f);
  std::fclose(f);
}

}  // namespace fieldex::sim
