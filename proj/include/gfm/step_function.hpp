#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gfm {

/// Right-continuous piecewise-constant function on [0, inf).
///
/// Segment i < k covers [t_{i-1}, t_i) (with t_{-1} = 0) and carries values[i];
/// the tail value holds on [t_{k-1}, inf).
class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(std::vector<double> breakpoints, std::vector<double> values, double tail = 0.0);

  static StepFunction indicator(double length, double height = 1.0);

  double operator()(double t) const;

  std::span<const double> breakpoints() const { return breaks_; }
  std::span<const double> values() const { return values_; }
  double tail() const { return tail_; }
  std::size_t segment_count() const { return breaks_.size(); }
  /// Left end of segment i (0 for the first segment).
  double left(std::size_t i) const { return i == 0 ? 0.0 : breaks_[i - 1]; }

  bool is_non_increasing() const;
  bool is_zero() const;
  /// Integral over (0, inf); +inf when the tail is positive.
  double mass() const;
  /// Smallest T with f = 0 on [T, inf); +inf with a positive tail.
  double support_end() const;

  StepFunction scaled(double lambda) const;

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
  double tail_ = 0.0;
};

/// f**(t) = (1/t) int_0^t f, held per segment as B + A/t.
///
/// For non-increasing input A >= 0 is enforced, so f** >= f holds exactly in
/// floating point as well.
class DoubleStar {
 public:
  explicit DoubleStar(StepFunction f);

  double operator()(double t) const;
  /// Segment index of t (segment_count() for the tail).
  std::size_t segment_of(double t) const;
  /// f** evaluated with the representation of segment j.
  double on_segment(std::size_t j, double t) const { return slope_[j] + offset_[j] / t; }
  /// Value of f on segment j (tail for j == segment_count()).
  double base_value(std::size_t j) const { return slope_[j]; }
  /// int_0^t f.
  double primitive(double t) const;

  const StepFunction& base() const { return f_; }
  std::size_t segment_count() const { return f_.segment_count(); }
  double mass() const { return f_.mass(); }

 private:
  StepFunction f_;
  std::vector<double> prefix_;  // int_0^{left(j)} f
  std::vector<double> slope_;   // B_j
  std::vector<double> offset_;  // A_j
};

double double_star(const StepFunction& fstar, double t);

/// Exact int_0^inf f g for two step functions (finite when either has zero tail).
double integrate_product(const StepFunction& f, const StepFunction& g);

}  // namespace gfm
