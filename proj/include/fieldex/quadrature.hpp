#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "fieldex/math.hpp"

namespace fieldex::num {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Golub-Welsch on the symmetric Jacobi matrix of the orthogonal-polynomial
// recurrence; returns nodes/weights for the given weight function.
inline QuadratureRule golub_welsch(const std::vector<double>& offdiag, double mu0) {
  const int n = static_cast<int>(offdiag.size()) + 1;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int i = 0; i < n - 1; ++i) sub[i] = offdiag[static_cast<std::size_t>(i)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw std::runtime_error("golub_welsch: eigensolver failed");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
  return rule;
}

// Physicists' Gauss-Hermite: integrates f against exp(-x^2) on R.
inline const QuadratureRule& gauss_hermite(int n) {
  static std::mutex mtx;
  static std::unordered_map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<double> off(static_cast<std::size_t>(n - 1));
    for (int k = 1; k < n; ++k) off[static_cast<std::size_t>(k - 1)] = std::sqrt(k / 2.0);
    auto rule = golub_welsch(off, std::sqrt(kPi));
    it = cache.emplace(n, std::move(rule)).first;
  }
  return it->second;
}

// Gauss-Legendre on [0,1].
inline const QuadratureRule& gauss_legendre01(int n) {
  static std::mutex mtx;
  static std::unordered_map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<double> off(static_cast<std::size_t>(n - 1));
    for (int k = 1; k < n; ++k) off[static_cast<std::size_t>(k - 1)] = k / std::sqrt(4.0 * k * k - 1.0);
    auto rule = golub_welsch(off, 2.0);
    for (auto& x : rule.nodes) x = 0.5 * (x + 1.0);
    for (auto& w : rule.weights) w *= 0.5;
    it = cache.emplace(n, std::move(rule)).first;
  }
  return it->second;
}

// E[f(Z)], Z standard normal, via n-point Gauss-Hermite after z = sqrt(2) w.
// Weights are renormalized to sum to one so that a constant integrand is
// reproduced exactly (the r = 0 factorization checks rely on this).
inline double gaussian_expectation(const std::function<double(double)>& f, int n = 200) {
  const auto& rule = gauss_hermite(n);
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(kSqrt2 * rule.nodes[i]);
  return acc / wsum;
}

namespace detail {
inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double eps,
                                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) < 15.0 * eps) return left + right + diff / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}
}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double eps = 1e-10, int max_depth = 40) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, eps, max_depth);
}

// Fallback route for E[f(Z)]: adaptive Simpson of f(z) phi(z) over [-12, 12].
inline double gaussian_expectation_adaptive(const std::function<double(double)>& f,
                                            double eps = 1e-11) {
  return adaptive_simpson([&](double z) { return f(z) * norm_pdf(z); }, -12.0, 12.0, eps);
}

}  // namespace fieldex::num
