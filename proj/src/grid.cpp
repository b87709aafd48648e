#include "gfm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gfm/detail/sum.hpp"
#include "gfm/errors.hpp"
#include "gfm/kernels.hpp"

namespace gfm {

void GridGeometry::validate() const {
  if (n < 1 || n > 3) throw DomainError("grid dimension must be 1, 2 or 3, got " + std::to_string(n));
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw DomainError("grid half-width must be positive");
  if (cells_per_axis < 1) throw DomainError("grid needs at least one cell per axis");
}

double GridGeometry::cell_volume() const {
  const double h = cell_width();
  double v = 1.0;
  for (int i = 0; i < n; ++i) v *= h;
  return v;
}

std::size_t GridGeometry::cell_count() const {
  std::size_t c = 1;
  for (int i = 0; i < n; ++i) c *= static_cast<std::size_t>(cells_per_axis);
  return c;
}

double GridGeometry::cell_radius() const {
  return std::pow(cell_volume() / unit_ball_volume(n), 1.0 / n);
}

double GridGeometry::inscribed_ball_measure() const {
  return unit_ball_volume(n) * std::pow(half_width, n);
}

double GridGeometry::box_measure() const { return std::pow(2.0 * half_width, n); }

std::array<int, 3> GridGeometry::coords(std::size_t index) const {
  std::array<int, 3> c{0, 0, 0};
  const auto m = static_cast<std::size_t>(cells_per_axis);
  for (int i = 0; i < n; ++i) {
    c[i] = static_cast<int>(index % m);
    index /= m;
  }
  return c;
}

std::size_t GridGeometry::index(std::array<int, 3> c) const {
  std::size_t idx = 0;
  const auto m = static_cast<std::size_t>(cells_per_axis);
  for (int i = n - 1; i >= 0; --i) idx = idx * m + static_cast<std::size_t>(c[i]);
  return idx;
}

std::array<double, 3> GridGeometry::center(std::size_t index) const {
  const auto c = coords(index);
  const double h = cell_width();
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) x[i] = -half_width + (c[i] + 0.5) * h;
  return x;
}

double GridGeometry::center_norm(std::size_t index) const {
  const auto x = center(index);
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

GridFunction::GridFunction(GridGeometry geometry, std::vector<double> values)
    : geometry_(geometry), values_(std::move(values)) {
  geometry_.validate();
  if (values_.size() != geometry_.cell_count()) {
    throw DomainError("grid function has " + std::to_string(values_.size()) + " values, expected " +
                      std::to_string(geometry_.cell_count()));
  }
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("grid values must be finite and non-negative");
  }
}

GridFunction GridFunction::zeros(const GridGeometry& geometry) {
  geometry.validate();
  return GridFunction(geometry, std::vector<double>(geometry.cell_count(), 0.0));
}

double GridFunction::total_mass() const {
  detail::CompensatedSum s;
  for (double v : values_) s += v;
  return s.value() * cell_volume();
}

double GridFunction::max_value() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

bool GridFunction::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

GridFunction GridFunction::scaled(double lambda) const {
  if (!(lambda >= 0.0)) throw DomainError("scale factor must be non-negative");
  std::vector<double> v(values_);
  for (double& x : v) x *= lambda;
  return GridFunction(geometry_, std::move(v));
}

}  // namespace gfm
