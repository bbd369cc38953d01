#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fieldex/grids.hpp"
#include "fieldex/math.hpp"

namespace fieldex::norming {

// Per-axis Pickands constants entering the location constants. h_alpha is
// required always; h_a_alpha only for Pickands grids.
struct PickandsInputs {
  std::vector<double> h_alpha;
  std::vector<double> h_a_alpha;
};

struct NormingConstants {
  double aT = 0.0;
  double bT = 0.0;
  double bTdelta = std::numeric_limits<double>::quiet_NaN();
  double bAT = std::numeric_limits<double>::quiet_NaN();
  double bStar = 0.0;
  grids::GridRegime regime = grids::GridRegime::Sparse;
};

struct LevelQuadruple {
  double x1, y1, x2, y2;
  double uX2, uY2, vX1, vY1;
};

inline NormingConstants compute_norming(const grids::DomainSpec& domain,
                                        const std::vector<double>& alphas,
                                        const grids::GridSpec& grid,
                                        const PickandsInputs& pickands) {
  domain.validate();
  if (alphas.size() != static_cast<std::size_t>(domain.dim))
    throw std::invalid_argument("compute_norming: alphas size mismatch");
  if (pickands.h_alpha.size() != alphas.size())
    throw std::invalid_argument("compute_norming: one H_alpha value per axis required");
  for (double h : pickands.h_alpha)
    if (!(h > 0.0)) throw std::invalid_argument("compute_norming: H_alpha must be positive");

  NormingConstants n;
  n.regime = grid.regime();
  n.aT = domain.level_scale();
  double inv_alpha_sum = 0.0;
  for (double a : alphas) inv_alpha_sum += 2.0 / a;

  double h_prod = 1.0;
  for (double h : pickands.h_alpha) h_prod *= h;
  n.bT = n.aT + std::log(num::kInvSqrt2Pi * h_prod * std::pow(n.aT, inv_alpha_sum - 1.0)) / n.aT;

  const auto deltas = grids::spacings(grid, domain, alphas);
  double inv_delta_prod = 1.0;
  for (double d : deltas) inv_delta_prod /= d;
  n.bTdelta = n.aT + std::log(num::kInvSqrt2Pi * inv_delta_prod / n.aT) / n.aT;

  if (grid.regime() == grids::GridRegime::Pickands) {
    if (pickands.h_a_alpha.size() != alphas.size())
      throw std::invalid_argument(
          "compute_norming: Pickands regime requires one H_{a,alpha} value per axis");
    double hg_prod = 1.0;
    for (double h : pickands.h_a_alpha) {
      if (!(h > 0.0)) throw std::invalid_argument("compute_norming: H_{a,alpha} must be positive");
      hg_prod *= h;
    }
    n.bAT = n.aT + std::log(num::kInvSqrt2Pi * hg_prod * std::pow(n.aT, inv_alpha_sum - 1.0)) / n.aT;
  }

  switch (grid.regime()) {
    case grids::GridRegime::Sparse: n.bStar = n.bTdelta; break;
    case grids::GridRegime::Pickands: n.bStar = n.bAT; break;
    case grids::GridRegime::Dense: n.bStar = n.bT; break;
  }
  if (!std::isfinite(n.bT) || !std::isfinite(n.bStar))
    throw std::runtime_error("compute_norming: non-finite location constant");
  return n;
}

inline LevelQuadruple to_levels(const NormingConstants& n, double x1, double y1, double x2,
                                double y2) {
  LevelQuadruple q{x1, y1, x2, y2, 0, 0, 0, 0};
  q.uX2 = n.bT + x2 / n.aT;
  q.uY2 = n.bStar + y2 / n.aT;
  q.vX1 = -n.bT + x1 / n.aT;
  q.vY1 = -n.bStar + y1 / n.aT;
  return q;
}

struct NormalizedExtremes {
  double maxCont, maxGrid, minCont, minGrid;
};

// Minima are centered at -bT / -bStar via the X =d -X symmetry.
inline NormalizedExtremes normalize_extremes(double mCont, double mGrid, double minCont,
                                             double minGrid, const NormingConstants& n) {
  return {n.aT * (mCont - n.bT), n.aT * (mGrid - n.bStar), n.aT * (minCont + n.bT),
          n.aT * (minGrid + n.bStar)};
}

}  // namespace fieldex::norming
