#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fieldex::grids {

struct DomainSpec {
  int dim = 1;
  std::vector<double> extent;

  void validate() const {
    if (dim < 1 || extent.size() != static_cast<std::size_t>(dim))
      throw std::invalid_argument("DomainSpec: extent size must equal dim");
    for (double t : extent)
      if (!(t > 1.0)) throw std::invalid_argument("DomainSpec: every extent must exceed 1");
  }

  // log(prod T_i)
  double log_measure() const {
    validate();
    double s = 0.0;
    for (double t : extent) s += std::log(t);
    if (!(s > 0.0)) throw std::invalid_argument("DomainSpec: log measure must be positive");
    return s;
  }

  // u = a_T = sqrt(2 log prod T_i)
  double level_scale() const { return std::sqrt(2.0 * log_measure()); }
};

enum class GridRegime { Sparse, Pickands, Dense };

inline std::string to_string(GridRegime r) {
  switch (r) {
    case GridRegime::Sparse: return "sparse";
    case GridRegime::Pickands: return "pickands";
    case GridRegime::Dense: return "dense";
  }
  return "?";
}

// Exactly the fields of the active regime are set; the factories are the only
// way to build one, so mixed per-axis regimes cannot be expressed.
class GridSpec {
 public:
  static GridSpec sparse(std::vector<double> spacings) {
    for (double d : spacings)
      if (!(d > 0.0)) throw std::invalid_argument("GridSpec::sparse: spacings must be positive");
    GridSpec g;
    g.regime_ = GridRegime::Sparse;
    g.sparse_spacings_ = std::move(spacings);
    return g;
  }

  static GridSpec pickands(std::vector<double> a) {
    for (double v : a)
      if (!(v > 0.0)) throw std::invalid_argument("GridSpec::pickands: a_i must be positive");
    GridSpec g;
    g.regime_ = GridRegime::Pickands;
    g.pickands_a_ = std::move(a);
    return g;
  }

  static GridSpec dense(double factor) {
    if (!(factor > 0.0 && factor <= 0.2))
      throw std::invalid_argument("GridSpec::dense: factor must lie in (0, 0.2]");
    GridSpec g;
    g.regime_ = GridRegime::Dense;
    g.dense_factor_ = factor;
    return g;
  }

  GridRegime regime() const { return regime_; }
  const std::vector<double>& sparse_spacings() const {
    require(GridRegime::Sparse);
    return sparse_spacings_;
  }
  const std::vector<double>& pickands_a() const {
    require(GridRegime::Pickands);
    return pickands_a_;
  }
  double dense_factor() const {
    require(GridRegime::Dense);
    return dense_factor_;
  }

 private:
  GridSpec() = default;
  void require(GridRegime r) const {
    if (regime_ != r)
      throw std::invalid_argument("GridSpec: field does not belong to the active regime");
  }
  GridRegime regime_ = GridRegime::Sparse;
  std::vector<double> sparse_spacings_;
  std::vector<double> pickands_a_;
  double dense_factor_ = 0.0;
};

// Concrete spacings delta_i for the configured regime.
//   sparse:  the fixed spacings verbatim
//   pickands: a_i u^{-2/alpha_i},  u = sqrt(2 log prod T_i)
//   dense:   c u^{-2/alpha_i}
inline std::vector<double> spacings(const GridSpec& grid, const DomainSpec& domain,
                                    const std::vector<double>& alphas) {
  domain.validate();
  if (alphas.size() != static_cast<std::size_t>(domain.dim))
    throw std::invalid_argument("spacings: alphas size must equal dim");
  for (double a : alphas)
    if (!(a > 0.0 && a <= 2.0)) throw std::invalid_argument("spacings: alpha outside (0,2]");
  const double u = domain.level_scale();
  std::vector<double> out(alphas.size());
  switch (grid.regime()) {
    case GridRegime::Sparse: {
      const auto& s = grid.sparse_spacings();
      if (s.size() != alphas.size())
        throw std::invalid_argument("spacings: sparse spacing count mismatch");
      out = s;
      break;
    }
    case GridRegime::Pickands: {
      const auto& a = grid.pickands_a();
      if (a.size() != alphas.size())
        throw std::invalid_argument("spacings: pickands a count mismatch");
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = a[i] * std::pow(u, -2.0 / alphas[i]);
      break;
    }
    case GridRegime::Dense:
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = grid.dense_factor() * std::pow(u, -2.0 / alphas[i]);
      break;
  }
  return out;
}

// Lattice indices nearest to {k delta : k delta <= T} along one axis.
// Requires delta >= lattice step so the grid is resolvable; snap error is at
// most latticeStep/2.
inline std::vector<std::size_t> grid_indices(double delta, double extent_axis,
                                             double lattice_step) {
  if (!(delta > 0.0) || !(lattice_step > 0.0) || !(extent_axis > 0.0))
    throw std::invalid_argument("grid_indices: arguments must be positive");
  if (delta < lattice_step * (1.0 - 1e-12))
    throw std::invalid_argument(
        "grid_indices: grid spacing finer than the simulation lattice; use a finer lattice step");
  const std::size_t count = static_cast<std::size_t>(std::floor(extent_axis / delta)) + 1;
  std::vector<std::size_t> idx(count);
  for (std::size_t k = 0; k < count; ++k)
    idx[k] = static_cast<std::size_t>(std::llround(static_cast<double>(k) * delta / lattice_step));
  return idx;
}

}  // namespace fieldex::grids
