#pragma once

#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fieldex/grids.hpp"

namespace fieldex::cov {

enum class Kind { Exponential };

inline std::string to_string(Kind k) {
  switch (k) {
    case Kind::Exponential: return "exponential";
  }
  return "?";
}

// Stationary unit-variance covariance r(t) on R^d with local exponents
// alpha_i. The exponential family r(t) = exp(-sum |t_i|^{alpha_i}) is
// positive definite for alpha_i in (0,2] and satisfies the local expansion
// 1 - r(t) ~ sum |t_i|^{alpha_i} and r(T) log(prod T_i) -> 0.
struct CovarianceModel {
  int dim = 1;
  std::vector<double> alphas;
  double long_range = 0.0;  // the A3 limit r; 0 for the base family
  Kind kind = Kind::Exponential;
  std::map<std::string, double> params;

  void validate() const {
    if (dim < 1) throw std::invalid_argument("CovarianceModel: dim must be >= 1");
    if (alphas.size() != static_cast<std::size_t>(dim))
      throw std::invalid_argument("CovarianceModel: one alpha per axis required");
    for (double a : alphas)
      if (!(a > 0.0 && a <= 2.0))
        throw std::invalid_argument("CovarianceModel: alpha outside (0,2]");
    if (long_range < 0.0) throw std::invalid_argument("CovarianceModel: longRange must be >= 0");
  }
};

inline double evaluate(const CovarianceModel& model, std::span<const double> t) {
  model.validate();
  if (t.size() != static_cast<std::size_t>(model.dim))
    throw std::invalid_argument("evaluate: lag dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    s += std::pow(std::abs(t[i]), model.alphas[i]);
  return std::exp(-s);
}

struct EnvelopeRow {
  double radius;
  std::vector<double> ratios;  // one per probed direction (axes, then main diagonal)
  bool pass;
};

// Finite surrogate for condition A1: ratios (1 - r(t)) / sum |t_i|^{alpha_i}
// at the probe radii along each axis and the main diagonal must stay inside
// [lo, hi] (default [0.5, 2.0], mirroring the two-sided local envelope).
inline std::vector<EnvelopeRow> check_a1_envelope(const CovarianceModel& model,
                                                  const std::vector<double>& probe_radii,
                                                  double lo = 0.5, double hi = 2.0) {
  model.validate();
  std::vector<EnvelopeRow> rows;
  for (double rad : probe_radii) {
    if (!(rad > 0.0 && rad <= 0.5))
      throw std::invalid_argument("check_a1_envelope: probe radius outside (0, 0.5]");
    EnvelopeRow row{rad, {}, true};
    std::vector<std::vector<double>> dirs;
    for (int i = 0; i < model.dim; ++i) {
      std::vector<double> t(static_cast<std::size_t>(model.dim), 0.0);
      t[static_cast<std::size_t>(i)] = rad;
      dirs.push_back(std::move(t));
    }
    if (model.dim > 1)
      dirs.emplace_back(static_cast<std::size_t>(model.dim), rad / std::sqrt(model.dim));
    for (const auto& t : dirs) {
      double denom = 0.0;
      for (std::size_t i = 0; i < t.size(); ++i)
        denom += std::pow(std::abs(t[i]), model.alphas[i]);
      const double ratio = (1.0 - evaluate(model, t)) / denom;
      row.ratios.push_back(ratio);
      if (!(ratio >= lo && ratio <= hi)) row.pass = false;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct A3Report {
  std::vector<double> values;  // r(T) log(prod T_i) along the ladder
  bool cauchy;                 // successive differences within tolerance at the tail
  double last;
};

// Finite surrogate for condition A3 on a ladder of domain sizes. The
// covariance is supplied as a callable so triangular-array models (whose
// covariance depends on the domain) can be probed too.
template <typename CovFn>
A3Report check_a3_limit(CovFn&& cov_at_domain, const std::vector<std::vector<double>>& ladder,
                        double tol = 0.05) {
  if (ladder.empty()) throw std::invalid_argument("check_a3_limit: empty ladder");
  A3Report rep;
  for (const auto& T : ladder) {
    double logprod = 0.0;
    for (double t : T) {
      if (!(t > 1.0)) throw std::invalid_argument("check_a3_limit: all T_i must exceed 1");
      logprod += std::log(t);
    }
    rep.values.push_back(cov_at_domain(T) * logprod);
  }
  rep.last = rep.values.back();
  rep.cauchy = true;
  for (std::size_t i = 1; i < rep.values.size(); ++i)
    if (std::abs(rep.values[i] - rep.values[i - 1]) > tol) rep.cauchy = false;
  return rep;
}

inline A3Report check_a3_limit(const CovarianceModel& model,
                               const std::vector<std::vector<double>>& ladder,
                               double tol = 0.05) {
  return check_a3_limit([&](const std::vector<double>& T) { return evaluate(model, T); }, ladder,
                        tol);
}

// Triangular-array strongly dependent field: for the configured domain,
// xi(t) = sqrt(1-rho) eta(t) + sqrt(rho) U with rho = rTarget / log(prod T_i).
struct MixtureFieldSpec {
  CovarianceModel base;  // weakly dependent, long_range = 0
  double r_target = 0.0;
  grids::DomainSpec domain;

  void validate() const {
    base.validate();
    if (base.long_range != 0.0)
      throw std::invalid_argument("MixtureFieldSpec: base model must have longRange = 0");
    if (r_target < 0.0) throw std::invalid_argument("MixtureFieldSpec: rTarget must be >= 0");
    if (r_target > 0.0) {
      const double rho = r_target / domain.log_measure();
      if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("MixtureFieldSpec: rho(T) outside (0,1) for this domain");
    } else {
      domain.validate();
    }
  }

  double rho() const {
    validate();
    return r_target == 0.0 ? 0.0 : r_target / domain.log_measure();
  }
};

// Covariance of the mixture field: (1 - rho) r_base(t) + rho.
inline double mixture_covariance(const MixtureFieldSpec& spec, std::span<const double> t) {
  spec.validate();
  const double rho = spec.rho();
  if (spec.r_target > 0.0 && !(rho > 0.0 && rho < 1.0))
    throw std::runtime_error("mixture_covariance: rho outside (0,1)");
  return (1.0 - rho) * evaluate(spec.base, t) + rho;
}

}  // namespace fieldex::cov
