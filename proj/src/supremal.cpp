#include "gfm/supremal.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gfm/detail/sum.hpp"
#include "gfm/errors.hpp"

namespace gfm {

namespace {

constexpr double kGoldenTol = 1e-10;

// Maximum of a unimodal-ish f on [a, b], endpoints included.
template <class F>
double golden_max(F&& f, double a, double b) {
  double best = std::max(f(a), f(b));
  if (!(b > a)) return best;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = a, hi = b;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && (hi - lo) > kGoldenTol * hi; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return std::max({best, f1, f2});
}

void require_operator_domain(const StepFunction& fstar, const KernelSpec& k) {
  if (!fstar.is_non_increasing()) throw DomainError("supremal operator needs a non-increasing f*");
  if (fstar.tail() != 0.0) throw DomainError("supremal operator needs f* of finite mass");
  if (std::isfinite(k.right_endpoint())) {
    throw DomainError("supremal operator needs a kernel on (0, inf): " + k.describe());
  }
  if (k.left_endpoint() > 0.0) {
    throw DomainError("supremal operator needs a kernel defined down to 0: " + k.describe());
  }
}

}  // namespace

SupremalOperator::SupremalOperator(StepFunction fstar, KernelSpec k)
    : ds_((require_operator_domain(fstar, k), std::move(fstar))), k_(std::move(k)) {
  const auto& f = ds_.base();
  mass_ = f.mass();
  const std::size_t seg = f.segment_count();
  if (f.is_zero()) return;
  suffix_.assign(seg + 1, 0.0);
  // tail: w(s) mass / s = mass Phi(s^{1/n}) is non-increasing
  suffix_[seg] = objective(seg, f.left(seg));
  for (std::size_t j = seg; j-- > 0;) {
    suffix_[j] = std::max(segment_sup(j, f.left(j), f.breakpoints()[j]), suffix_[j + 1]);
  }
}

double SupremalOperator::weight(double s) const {
  return s * k_(std::pow(s, 1.0 / k_.dim()));
}

double SupremalOperator::tiny_left(double b) const { return b * 1e-12; }

double SupremalOperator::segment_sup(std::size_t j, double a, double b) const {
  const auto g = [&](double s) { return objective(j, s); };
  // on the first segment w f** = v w(s) vanishes as s -> 0 for the built-in families
  const double a_eval = a > 0.0 ? a : (k_.has_increasing_weight() ? 0.0 : tiny_left(b));
  if (k_.is_power()) {
    // s^{a/n} (v + A/s) is quasi-convex: endpoints suffice
    return a_eval > 0.0 ? std::max(g(a_eval), g(b)) : g(b);
  }
  if (a_eval == 0.0) return golden_max(g, tiny_left(b), b);
  return golden_max(g, a_eval, b);
}

double SupremalOperator::operator()(double t) const {
  if (!(t > 0.0)) throw DomainError("supremal operator needs t > 0");
  if (suffix_.empty()) return 0.0;
  const std::size_t seg = ds_.segment_count();
  const std::size_t j = ds_.segment_of(t);
  if (j == seg) return objective(seg, t);
  const double b = ds_.base().breakpoints()[j];
  return std::max(segment_sup(j, t, b), suffix_[j + 1]);
}

std::vector<double> SupremalOperator::evaluate(std::span<const double> ts) const {
  std::vector<double> out(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) out[i] = (*this)(ts[i]);
  return out;
}

double SupremalOperator::lq_norm(double q) const {
  if (!(q >= 1.0)) throw DomainError("lq_norm needs q >= 1");
  if (suffix_.empty()) return 0.0;
  if (std::isinf(q)) return supremum();
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const auto& f = ds_.base();
  const std::size_t seg = f.segment_count();
  const auto Tq = [&](double t) { return std::pow((*this)(t), q); };
  detail::CompensatedSum acc;
  for (std::size_t j = 0; j < seg; ++j) {
    acc += GK::integrate(Tq, f.left(j), f.breakpoints()[j], 12, 1e-11);
  }
  const double t0 = f.left(seg);
  if (const auto* pk = std::get_if<PowerKernel>(&k_.family())) {
    const double e = (pk->alpha / k_.dim() - 1.0) * q;
    if (e >= -1.0) return kInf;
    acc += std::pow(mass_, q) * std::pow(t0, e + 1.0) / (-(e + 1.0));
  } else {
    acc += GK::integrate(Tq, t0, std::numeric_limits<double>::infinity(), 15, 1e-11);
  }
  return std::pow(acc.value(), 1.0 / q);
}

double supremal_T(const StepFunction& fstar, const KernelSpec& k, double t) {
  return SupremalOperator(fstar, k)(t);
}

K4Functional::K4Functional(StepFunction fstar, KernelSpec k) : T_(std::move(fstar), std::move(k)) {
  const auto& f = T_.double_star().base();
  const std::size_t seg = f.segment_count();
  if (f.is_zero()) return;
  suffix_.assign(seg + 1, 0.0);
  for (std::size_t j = seg; j-- > 0;) {
    suffix_[j] = std::max(weighted_value_sup(j, f.left(j), f.breakpoints()[j]), suffix_[j + 1]);
  }
}

double K4Functional::weighted_value_sup(std::size_t j, double a, double b) const {
  const double v = T_.double_star().base_value(j);
  if (v == 0.0) return 0.0;
  // sup over [a, b) of w v; the open right end still counts as the sup
  if (T_.kernel().has_increasing_weight()) return T_.weight(b) * v;
  const double lo = a > 0.0 ? a : b * 1e-12;
  return golden_max([&](double s) { return T_.weight(s) * v; }, lo, b);
}

double K4Functional::first_term(double t) const {
  if (!(t > 0.0)) throw DomainError("k4 functional needs t > 0");
  if (suffix_.empty()) return 0.0;
  return T_.objective(T_.double_star().segment_of(t), t);
}

double K4Functional::second_term(double t) const {
  if (!(t > 0.0)) throw DomainError("k4 functional needs t > 0");
  if (suffix_.empty()) return 0.0;
  const auto& f = T_.double_star().base();
  const std::size_t j = T_.double_star().segment_of(t);
  if (j == f.segment_count()) return 0.0;
  return std::max(weighted_value_sup(j, t, f.breakpoints()[j]), suffix_[j + 1]);
}

double k4_functional(const StepFunction& fstar, const KernelSpec& k, double t) {
  return K4Functional(fstar, k)(t);
}

}  // namespace gfm
