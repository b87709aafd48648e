#include "gfm/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "gfm/detail/sum.hpp"
#include "gfm/errors.hpp"
#include "gfm/kernels.hpp"

namespace gfm {

double distribution(const GridFunction& f, double y) {
  std::size_t count = 0;
  for (double v : f.values()) count += v > y ? 1 : 0;
  return static_cast<double>(count) * f.cell_volume();
}

double distribution(const StepFunction& h, double y) {
  if (h.tail() > y) return kInf;
  detail::CompensatedSum s;
  const auto br = h.breakpoints();
  const auto vals = h.values();
  for (std::size_t i = 0; i < br.size(); ++i) {
    if (vals[i] > y) s += br[i] - h.left(i);
  }
  return s.value();
}

StepFunction rearrangement(std::span<const double> values, double cell_volume) {
  if (!(cell_volume > 0.0)) throw DomainError("cell volume must be positive");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<double> breaks;
  std::vector<double> vals;
  std::size_t i = 0;
  while (i < sorted.size() && sorted[i] > 0.0) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    breaks.push_back(static_cast<double>(j) * cell_volume);
    vals.push_back(sorted[i]);
    i = j;
  }
  return StepFunction(std::move(breaks), std::move(vals), 0.0);
}

StepFunction rearrangement(const GridFunction& f) { return rearrangement(f.values(), f.cell_volume()); }

double symmetric_rearrangement(const StepFunction& fstar, int n, double r) {
  if (!(r > 0.0)) throw DomainError("symmetric rearrangement needs r > 0");
  return fstar(unit_ball_volume(n) * std::pow(r, n));
}

GridFunction synthesize_radial(const StepFunction& phi, const GridGeometry& geometry) {
  geometry.validate();
  if (!phi.is_non_increasing()) throw DomainError("radial profile must be non-increasing");
  const double budget = geometry.inscribed_ball_measure();
  if (phi.support_end() > budget * (1.0 + 1e-12)) {
    throw DomainError("radial profile support exceeds the box measure budget");
  }
  const double vn = unit_ball_volume(geometry.n);
  std::vector<double> values(geometry.cell_count());
  for (std::size_t c = 0; c < values.size(); ++c) {
    const double t = vn * std::pow(geometry.center_norm(c), geometry.n);
    values[c] = std::max(phi(t), 0.0);
  }
  return GridFunction(geometry, std::move(values));
}

}  // namespace gfm
