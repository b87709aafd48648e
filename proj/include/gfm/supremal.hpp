#pragma once

#include <span>
#include <vector>

#include "gfm/kernels.hpp"
#include "gfm/step_function.hpp"

namespace gfm {

/// t -> sup_{s >= t} w(s) f**(s), w(s) = s Phi(s^{1/n}), for a non-increasing
/// f* of finite mass. Per-segment sups are precomputed; queries are O(log k).
class SupremalOperator {
 public:
  SupremalOperator(StepFunction fstar, KernelSpec k);

  double operator()(double t) const;
  std::vector<double> evaluate(std::span<const double> ts) const;

  /// w(s) = s Phi(s^{1/n}).
  double weight(double s) const;
  /// w(s) f**(s) using the f** representation of segment j.
  double objective(std::size_t j, double s) const { return weight(s) * ds_.on_segment(j, s); }
  /// sup over the whole half-line (the limit t -> 0+).
  double supremum() const { return suffix_.empty() ? 0.0 : suffix_.front(); }
  /// (int_0^inf T^q)^{1/q}; q = inf gives supremum().
  double lq_norm(double q) const;

  const DoubleStar& double_star() const { return ds_; }
  const KernelSpec& kernel() const { return k_; }
  double mass() const { return mass_; }

 private:
  double segment_sup(std::size_t j, double a, double b) const;
  double tiny_left(double b) const;

  DoubleStar ds_;
  KernelSpec k_;
  double mass_ = 0.0;
  std::vector<double> suffix_;  // sup of the objective over [left_j, inf)
};

double supremal_T(const StepFunction& fstar, const KernelSpec& k, double t);

/// t -> w(t) f**(t) + sup_{tau >= t} w(tau) f*(tau).
class K4Functional {
 public:
  K4Functional(StepFunction fstar, KernelSpec k);

  double operator()(double t) const { return first_term(t) + second_term(t); }
  double first_term(double t) const;
  double second_term(double t) const;
  const SupremalOperator& supremal() const { return T_; }

 private:
  double weighted_value_sup(std::size_t j, double a, double b) const;

  SupremalOperator T_;
  std::vector<double> suffix_;
};

double k4_functional(const StepFunction& fstar, const KernelSpec& k, double t);

}  // namespace gfm
