#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace gfm {

/// Uniform grid of m^n cells covering the box [-L, L]^n.
struct GridGeometry {
  int n = 1;
  double half_width = 1.0;
  int cells_per_axis = 1;

  void validate() const;
  double cell_width() const { return 2.0 * half_width / cells_per_axis; }
  double cell_volume() const;
  std::size_t cell_count() const;
  /// Radius of the ball with the volume of one cell, (cell_volume / v_n)^{1/n}.
  double cell_radius() const;
  /// v_n L^n: measure of the inscribed ball.
  double inscribed_ball_measure() const;
  double box_measure() const;

  /// Axis 0 varies fastest.
  std::array<int, 3> coords(std::size_t index) const;
  std::size_t index(std::array<int, 3> c) const;
  std::array<double, 3> center(std::size_t index) const;
  double center_norm(std::size_t index) const;

  bool operator==(const GridGeometry&) const = default;
};

/// Cell-constant non-negative function on a GridGeometry (zero outside the box).
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(GridGeometry geometry, std::vector<double> values);
  static GridFunction zeros(const GridGeometry& geometry);

  const GridGeometry& geometry() const { return geometry_; }
  int dim() const { return geometry_.n; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double cell_volume() const { return geometry_.cell_volume(); }
  double total_mass() const;
  double max_value() const;
  bool is_zero() const;

  GridFunction scaled(double lambda) const;

 private:
  GridGeometry geometry_;
  std::vector<double> values_;
};

/// A function on R^n defined independently of resolution, sampled on demand.
struct Generator {
  std::string id;
  std::function<GridFunction(const GridGeometry&)> sample;
  bool radial = false;  // radially non-increasing about the origin
};

}  // namespace gfm
