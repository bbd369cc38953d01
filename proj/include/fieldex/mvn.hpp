#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fieldex/math.hpp"
#include "fieldex/quadrature.hpp"

namespace fieldex::mvn {

// P(X <= b componentwise), X ~ N(0, Sigma), by the Genz sequential transform
// integrated with a tensor Gauss-Legendre rule on [0,1]^{k-1}. Intended for
// small k (<= 6); the integrand after the transform is smooth.
inline double cdf(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& b) {
  const int k = static_cast<int>(sigma.rows());
  if (sigma.cols() != k || b.size() != k) throw std::invalid_argument("mvn::cdf: shape mismatch");
  if (k > 6) throw std::invalid_argument("mvn::cdf: dimension above 6 not supported");
  if (k == 1) return num::norm_cdf(b[0] / std::sqrt(sigma(0, 0)));

  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    // nudge a semidefinite matrix onto the PD cone
    Eigen::MatrixXd s = sigma;
    s.diagonal().array() += 1e-12 * sigma.diagonal().maxCoeff();
    llt.compute(s);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("mvn::cdf: covariance not positive definite");
  }
  const Eigen::MatrixXd L = llt.matrixL();

  static constexpr int kNodesByDim[] = {0, 96, 48, 32, 20, 14};
  const int dims = k - 1;
  const auto& rule = num::gauss_legendre01(kNodesByDim[dims]);
  const int m = static_cast<int>(rule.nodes.size());

  const double e1 = num::norm_cdf(b[0] / L(0, 0));
  std::vector<int> idx(static_cast<std::size_t>(dims), 0);
  std::vector<double> y(static_cast<std::size_t>(k), 0.0);
  double total = 0.0;
  while (true) {
    double weight = 1.0;
    for (int d = 0; d < dims; ++d) weight *= rule.weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
    double f = e1;
    double e = e1;
    bool dead = false;
    for (int i = 1; i < k; ++i) {
      const double w = rule.nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(i - 1)])];
      const double p = w * e;
      if (p <= 0.0 || p >= 1.0) { dead = p <= 0.0; if (dead) break; }
      y[static_cast<std::size_t>(i - 1)] = num::norm_quantile(std::min(std::max(p, 1e-300), 1.0 - 1e-16));
      double dot = 0.0;
      for (int j = 0; j < i; ++j) dot += L(i, j) * y[static_cast<std::size_t>(j)];
      e = num::norm_cdf((b[i] - dot) / L(i, i));
      f *= e;
    }
    if (!dead) total += weight * f;
    int d = 0;
    for (; d < dims; ++d) {
      if (++idx[static_cast<std::size_t>(d)] < m) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
    if (d == dims) break;
  }
  return total;
}

// Upper orthant P(X_i > u for all i): by symmetry equal to P(X <= -u 1).
inline double upper_orthant(const Eigen::MatrixXd& sigma, double u) {
  const int k = static_cast<int>(sigma.rows());
  return cdf(sigma, Eigen::VectorXd::Constant(k, -u));
}

// P(max_i X_i > u) by inclusion-exclusion over upper-orthant probabilities.
inline double max_exceedance(const Eigen::MatrixXd& sigma, double u) {
  const int n = static_cast<int>(sigma.rows());
  if (n > 6) throw std::invalid_argument("mvn::max_exceedance: more than 6 points");
  double total = 0.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    const int k = __builtin_popcount(mask);
    Eigen::MatrixXd sub(k, k);
    std::vector<int> sel;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) sel.push_back(i);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) sub(i, j) = sigma(sel[static_cast<std::size_t>(i)], sel[static_cast<std::size_t>(j)]);
    const double p = upper_orthant(sub, u);
    total += (k % 2 == 1) ? p : -p;
  }
  return total;
}

}  // namespace fieldex::mvn
