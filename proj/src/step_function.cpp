#include "gfm/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gfm/detail/sum.hpp"
#include "gfm/errors.hpp"
#include "gfm/kernels.hpp"

namespace gfm {

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values, double tail)
    : breaks_(std::move(breakpoints)), values_(std::move(values)), tail_(tail) {
  if (breaks_.size() != values_.size()) {
    throw DomainError("step function needs one value per breakpoint");
  }
  double prev = 0.0;
  for (double b : breaks_) {
    if (!(b > prev) || !std::isfinite(b)) throw DomainError("breakpoints must be positive and strictly increasing");
    prev = b;
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("step values must be finite");
  }
  if (!std::isfinite(tail_)) throw DomainError("step tail must be finite");
}

StepFunction StepFunction::indicator(double length, double height) {
  if (length <= 0.0 || height == 0.0) return StepFunction();
  return StepFunction({length}, {height}, 0.0);
}

double StepFunction::operator()(double t) const {
  if (!(t >= 0.0)) throw DomainError("step function evaluated at negative t");
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  if (it == breaks_.end()) return tail_;
  return values_[static_cast<std::size_t>(it - breaks_.begin())];
}

bool StepFunction::is_non_increasing() const {
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] > values_[i - 1]) return false;
  }
  return values_.empty() || tail_ <= values_.back();
}

bool StepFunction::is_zero() const {
  return tail_ == 0.0 && std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double StepFunction::mass() const {
  if (tail_ != 0.0) return tail_ > 0.0 ? kInf : -kInf;
  detail::CompensatedSum s;
  for (std::size_t i = 0; i < breaks_.size(); ++i) s += values_[i] * (breaks_[i] - left(i));
  return s.value();
}

double StepFunction::support_end() const {
  if (tail_ != 0.0) return kInf;
  for (std::size_t i = values_.size(); i-- > 0;) {
    if (values_[i] != 0.0) return breaks_[i];
  }
  return 0.0;
}

StepFunction StepFunction::scaled(double lambda) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= lambda;
  return StepFunction(breaks_, std::move(v), tail_ * lambda);
}

DoubleStar::DoubleStar(StepFunction f) : f_(std::move(f)) {
  const std::size_t k = f_.segment_count();
  const auto br = f_.breakpoints();
  const auto vals = f_.values();
  const bool monotone = f_.is_non_increasing();
  prefix_.resize(k + 1);
  slope_.resize(k + 1);
  offset_.resize(k + 1);
  detail::CompensatedSum run;
  for (std::size_t j = 0; j <= k; ++j) {
    const double a = f_.left(j);
    const double v = j < k ? vals[j] : f_.tail();
    prefix_[j] = run.value();
    slope_[j] = v;
    double A = prefix_[j] - v * a;
    // for non-increasing f the exact A is >= 0; keep rounding from flipping it
    if (monotone && A < 0.0) A = 0.0;
    offset_[j] = A;
    if (j < k) run += v * (br[j] - a);
  }
}

std::size_t DoubleStar::segment_of(double t) const {
  const auto br = f_.breakpoints();
  return static_cast<std::size_t>(std::upper_bound(br.begin(), br.end(), t) - br.begin());
}

double DoubleStar::operator()(double t) const {
  if (!(t > 0.0)) throw DomainError("f** needs t > 0");
  return on_segment(segment_of(t), t);
}

double DoubleStar::primitive(double t) const {
  if (!(t >= 0.0)) throw DomainError("primitive needs t >= 0");
  const std::size_t j = segment_of(t);
  return prefix_[j] + slope_[j] * (t - f_.left(j));
}

double double_star(const StepFunction& fstar, double t) {
  if (!fstar.is_non_increasing()) throw DomainError("double_star expects a non-increasing step function");
  return DoubleStar(fstar)(t);
}

double integrate_product(const StepFunction& f, const StepFunction& g) {
  if (f.tail() != 0.0 && g.tail() != 0.0) return kInf;
  const auto bf = f.breakpoints();
  const auto bg = g.breakpoints();
  std::vector<double> cuts;
  cuts.reserve(bf.size() + bg.size());
  std::merge(bf.begin(), bf.end(), bg.begin(), bg.end(), std::back_inserter(cuts));
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const double end = std::min(f.tail() == 0.0 ? (bf.empty() ? 0.0 : bf.back()) : kInf,
                              g.tail() == 0.0 ? (bg.empty() ? 0.0 : bg.back()) : kInf);
  detail::CompensatedSum s;
  double a = 0.0;
  for (double b : cuts) {
    if (a >= end) break;
    s += f(a) * g(a) * (b - a);
    a = b;
  }
  return s.value();
}

}  // namespace gfm
