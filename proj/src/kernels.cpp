#include "gfm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

namespace gfm {

namespace {

void require_dim(int n) {
  if (n < 1 || n > 3) throw DomainError("dimension must be 1, 2 or 3");
}

double lerp_loglog(const TabulatedKernel& t, std::size_t i, double r) {
  const double x0 = std::log(t.r[i]), x1 = std::log(t.r[i + 1]);
  const double y0 = std::log(t.value[i]), y1 = std::log(t.value[i + 1]);
  const double s = (std::log(r) - x0) / (x1 - x0);
  return std::exp(y0 + s * (y1 - y0));
}

double eval_table(const TabulatedKernel& t, double r) {
  const auto it = std::lower_bound(t.r.begin(), t.r.end(), r);
  if (it != t.r.end() && *it == r) return t.value[static_cast<std::size_t>(it - t.r.begin())];
  if (it == t.r.begin()) return lerp_loglog(t, 0, r);
  if (it == t.r.end()) return lerp_loglog(t, t.r.size() - 2, r);
  return lerp_loglog(t, static_cast<std::size_t>(it - t.r.begin()) - 1, r);
}

// Integral of g over [a, b] in the variable u = ln r, split into panels of at
// most 1/8 decade.
double log_panel_integral(const std::function<double(double)>& g, double a, double b) {
  if (!(b > a)) return 0.0;
  const int panels = std::max(1, static_cast<int>(std::ceil(std::log10(b / a) * 8.0)));
  const double la = std::log(a);
  const double step = (std::log(b) - la) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double u0 = la + p * step;
    const double u1 = (p + 1 == panels) ? std::log(b) : u0 + step;
    total += boost::math::quadrature::gauss<double, 20>::integrate(
        [&](double u) {
          const double r = std::exp(u);
          return g(r) * r;
        },
        u0, u1);
  }
  return total;
}

constexpr double kSingularExponentMargin = 1e-3;

// Cumulative integral int_0^{at[i]} g, with a power-law model on [0, r0].
std::vector<double> cumulative_from_zero(const KernelSpec& k,
                                         const std::function<double(double)>& g,
                                         std::span<const double> at) {
  std::vector<double> out(at.size());
  if (at.empty()) return out;
  const double r_eff = std::min(k.right_endpoint(), at.back());
  double r0 = std::min(1e-9 * r_eff, 1e-3 * at.front());
  r0 = std::max(r0, k.left_endpoint());
  double r1 = 2.0 * r0;
  if (r1 > at.back()) r1 = at.back();
  if (!(r1 > r0)) throw DomainError("grid too narrow for the near-zero tail model");

  const double g0 = g(r0), g1 = g(r1);
  const double p = std::log(g1 / g0) / std::log(r1 / r0);
  if (!std::isfinite(p) || p + 1.0 <= kSingularExponentMargin) {
    std::ostringstream msg;
    msg << "integrand behaves like r^" << p << " near 0 for " << k.describe();
    throw SingularIntegrand(msg.str());
  }
  double acc = g0 * r0 / (p + 1.0);
  double prev = r0;
  for (std::size_t i = 0; i < at.size(); ++i) {
    acc += log_panel_integral(g, prev, at[i]);
    out[i] = acc;
    prev = at[i];
  }
  return out;
}

void require_in_domain(const KernelSpec& k, std::span<const double> pts) {
  for (double r : pts) {
    if (!k.in_domain(r)) {
      std::ostringstream msg;
      msg << "grid point " << r << " outside the domain of " << k.describe();
      throw DomainError(msg.str());
    }
  }
}

bool sorted_ascending(std::span<const double> v) {
  return std::is_sorted(v.begin(), v.end());
}

}  // namespace

double unit_ball_volume(int n) {
  require_dim(n);
  switch (n) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    default: return 4.0 * std::numbers::pi / 3.0;
  }
}

KernelSpec::KernelSpec(KernelFamily family, int n) : family_(std::move(family)), n_(n) {}

KernelSpec KernelSpec::power(double alpha, int n) {
  require_dim(n);
  if (!(alpha > 0.0 && alpha < n)) throw DomainError("power kernel needs 0 < alpha < n");
  return KernelSpec(PowerKernel{alpha}, n);
}

KernelSpec KernelSpec::log_kernel(double R, int n) {
  require_dim(n);
  if (!(R > 0.0 && std::isfinite(R))) throw DomainError("log kernel needs finite R > 0");
  return KernelSpec(LogKernel{R}, n);
}

KernelSpec KernelSpec::log_power(double alpha, int n) {
  require_dim(n);
  if (!(alpha > 0.0 && std::isfinite(alpha))) throw DomainError("log-power kernel needs alpha > 0");
  return KernelSpec(LogPowerKernel{alpha}, n);
}

KernelSpec KernelSpec::tabulated(std::vector<double> r, std::vector<double> value, int n,
                                 bool extrapolate) {
  require_dim(n);
  if (r.size() < 2 || r.size() != value.size())
    throw DomainError("tabulated kernel needs at least two (r, value) samples");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0) || !std::isfinite(r[i])) throw DomainError("table radii must be positive");
    if (i > 0 && !(r[i] > r[i - 1])) throw DomainError("table radii must be strictly increasing");
    if (!(value[i] > 0.0) || !std::isfinite(value[i]))
      throw DomainError("table values must be positive and finite");
  }
  return KernelSpec(TabulatedKernel{std::move(r), std::move(value), extrapolate}, n);
}

KernelSpec KernelSpec::parse(std::string_view text, int n) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ConfigError("kernel spec needs 'family:arg': " + std::string(text));
  const std::string name(text.substr(0, colon));
  std::string arg(text.substr(colon + 1));
  if (name == "table") {
    bool extrapolate = false;
    const std::string suffix = ":extrapolate";
    if (arg.size() > suffix.size() && arg.compare(arg.size() - suffix.size(), suffix.size(), suffix) == 0) {
      extrapolate = true;
      arg.resize(arg.size() - suffix.size());
    }
    auto table = load_kernel_table(arg);
    return tabulated(std::move(table.r), std::move(table.value), n, extrapolate);
  }
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(arg, &used);
    if (used != arg.size()) throw std::invalid_argument(arg);
  } catch (const std::exception&) {
    throw ConfigError("bad kernel parameter: " + std::string(text));
  }
  if (name == "power") return power(value, n);
  if (name == "log") return log_kernel(value, n);
  if (name == "logpower") return log_power(value, n);
  throw ConfigError("unknown kernel family: " + name);
}

double KernelSpec::right_endpoint() const {
  return std::visit(
      [](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, LogKernel>) return f.R;
        else if constexpr (std::is_same_v<T, TabulatedKernel>) return f.extrapolate ? kInf : f.r.back();
        else return kInf;
      },
      family_);
}

double KernelSpec::left_endpoint() const {
  if (const auto* t = std::get_if<TabulatedKernel>(&family_); t && !t->extrapolate) return t->r.front();
  return 0.0;
}

bool KernelSpec::in_domain(double r) const {
  if (!(r > 0.0) || !std::isfinite(r)) return false;
  if (const auto* t = std::get_if<TabulatedKernel>(&family_); t && !t->extrapolate)
    return r >= t->r.front() && r <= t->r.back();
  return r <= right_endpoint();
}

double KernelSpec::operator()(double r) const {
  if (!in_domain(r)) {
    std::ostringstream msg;
    msg << "r = " << r << " outside the domain of " << describe();
    throw DomainError(msg.str());
  }
  const double v = std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerKernel>) return std::pow(r, f.alpha - n_);
        else if constexpr (std::is_same_v<T, LogKernel>) return 1.0 + std::log(f.R / r);
        else if constexpr (std::is_same_v<T, LogPowerKernel>)
          return std::pow(std::log1p(r), f.alpha) / std::pow(r, n_);
        else return eval_table(f, r);
      },
      family_);
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("kernel value not positive: " + describe());
  return v;
}

bool KernelSpec::has_increasing_weight() const {
  return !std::holds_alternative<TabulatedKernel>(family_);
}

std::string KernelSpec::describe() const {
  std::ostringstream os;
  os.precision(12);
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerKernel>) os << "power(alpha=" << f.alpha;
        else if constexpr (std::is_same_v<T, LogKernel>) os << "log(R=" << f.R;
        else if constexpr (std::is_same_v<T, LogPowerKernel>) os << "logpower(alpha=" << f.alpha;
        else os << "table(samples=" << f.r.size() << (f.extrapolate ? ",extrapolate" : "");
      },
      family_);
  os << ",n=" << n_ << ")";
  return os.str();
}

double eval_phi(const KernelSpec& k, double r) { return k(r); }

double phi_profile(const KernelSpec& k, double tau) {
  if (!(tau > 0.0)) throw DomainError("phi_profile needs tau > 0");
  return k(std::pow(tau / unit_ball_volume(k.dim()), 1.0 / k.dim()));
}

std::vector<double> GeometricGrid::points() const {
  if (!(r_min > 0.0) || !(r_max >= r_min) || points_per_decade < 1)
    throw DomainError("invalid geometric grid");
  if (r_max == r_min) return {r_min};
  const int intervals = std::max(1, static_cast<int>(std::ceil(decades() * points_per_decade - 1e-9)));
  std::vector<double> pts(static_cast<std::size_t>(intervals) + 1);
  const double lr = std::log(r_min), span = std::log(r_max) - lr;
  for (int i = 0; i <= intervals; ++i) pts[static_cast<std::size_t>(i)] = std::exp(lr + span * i / intervals);
  pts.front() = r_min;
  pts.back() = r_max;
  return pts;
}

double GeometricGrid::decades() const { return std::log10(r_max / r_min); }

GeometricGrid GeometricGrid::doubled(double R) const {
  const double centre = std::sqrt(r_min * r_max);
  GeometricGrid g{r_min * r_min / centre, r_max * r_max / centre, points_per_decade};
  if (g.r_max > R) {
    g.r_max = r_max;
    g.r_min = r_max * (r_min / r_max) * (r_min / r_max);
  }
  return g;
}

double quasi_monotone_constant(std::span<const double> values, Direction direction) {
  if (values.size() < 2) throw DomainError("quasi_monotone_constant needs at least two samples");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("quasi_monotone_constant needs positive samples");
  double c = 1.0;
  double extreme = values[0];
  for (std::size_t j = 1; j < values.size(); ++j) {
    if (direction == Direction::increasing) {
      c = std::max(c, extreme / values[j]);
      extreme = std::max(extreme, values[j]);
    } else {
      c = std::max(c, values[j] / extreme);
      extreme = std::min(extreme, values[j]);
    }
  }
  return c;
}

std::vector<double> bn_integral(const KernelSpec& k, std::span<const double> at) {
  if (!sorted_ascending(at)) throw DomainError("integration points must be ascending");
  const int n = k.dim();
  if (const auto* p = std::get_if<PowerKernel>(&k.family())) {
    std::vector<double> out;
    for (double r : at) out.push_back(std::pow(r, p->alpha) / p->alpha);
    return out;
  }
  if (const auto* l = std::get_if<LogKernel>(&k.family())) {
    std::vector<double> out;
    for (double r : at) out.push_back(std::pow(r, n) / n * (1.0 + std::log(l->R / r) + 1.0 / n));
    return out;
  }
  return cumulative_from_zero(k, [&](double rho) { return k(rho) * std::pow(rho, n - 1); }, at);
}

std::vector<double> d_integral(const KernelSpec& k, std::span<const double> at) {
  if (!sorted_ascending(at)) throw DomainError("integration points must be ascending");
  const int n = k.dim();
  if (const auto* p = std::get_if<PowerKernel>(&k.family())) {
    std::vector<double> out;
    for (double r : at) out.push_back(std::pow(r, n - p->alpha) / (n - p->alpha));
    return out;
  }
  if (std::holds_alternative<LogKernel>(k.family()))
    throw SingularIntegrand("int dt/(t ln(eR/t)) diverges at 0 for " + k.describe());
  return cumulative_from_zero(k, [&](double t) { return 1.0 / (k(t) * t); }, at);
}

namespace {

enum class RatioKind { Bn, D };

std::vector<double> ratio_curve(const KernelSpec& k, std::span<const double> pts, RatioKind kind) {
  std::vector<double> out(pts.size());
  if (kind == RatioKind::Bn) {
    const auto I = bn_integral(k, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) out[i] = I[i] / (k(pts[i]) * std::pow(pts[i], k.dim()));
  } else {
    const auto I = d_integral(k, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) out[i] = k(pts[i]) * I[i];
  }
  return out;
}

bool decreasing_on(const KernelSpec& k, std::span<const double> pts) {
  double prev = k(pts[0]);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double v = k(pts[i]);
    if (v > prev * (1.0 + 1e-12)) return false;
    prev = v;
  }
  return true;
}

void fill_ratio_report(RatioReport& rep, const KernelSpec& k, const GeometricGrid& grid,
                       const ClassOptions& opts, RatioKind kind) {
  rep.r = grid.points();
  require_in_domain(k, rep.r);
  rep.is_decreasing = decreasing_on(k, rep.r);
  rep.ratio = ratio_curve(k, rep.r, kind);
  rep.sup = *std::max_element(rep.ratio.begin(), rep.ratio.end());
  rep.inf = *std::min_element(rep.ratio.begin(), rep.ratio.end());

  const double decade_start = grid.r_max / 10.0;
  std::size_t first = 0;
  while (first + 1 < rep.r.size() && rep.r[first] < decade_start * (1.0 - 1e-12)) ++first;
  bool monotone = true;
  for (std::size_t i = first + 1; i < rep.r.size(); ++i)
    if (rep.ratio[i] < rep.ratio[i - 1] * (1.0 - 1e-12)) monotone = false;
  const double rise = (rep.ratio.back() - rep.ratio[first]) / rep.ratio[first];
  rep.trend_increasing = monotone && rise > opts.trend_rel;

  GeometricGrid wide = grid.doubled(k.right_endpoint());
  wide.r_min = std::max(wide.r_min, k.left_endpoint());
  wide.r_max = std::min(wide.r_max, k.right_endpoint());
  if (wide.r_min < grid.r_min || wide.r_max > grid.r_max) {
    const auto wide_ratio = ratio_curve(k, wide.points(), kind);
    rep.growth_factor = *std::max_element(wide_ratio.begin(), wide_ratio.end()) / rep.sup;
  }
  rep.diverges = rep.trend_increasing && rep.growth_factor > opts.growth_threshold;
}

}  // namespace

AnReport check_class_An(const KernelSpec& k, const GeometricGrid& grid, const ClassOptions& opts) {
  const auto pts = grid.points();
  require_in_domain(k, pts);
  AnReport rep;
  rep.is_decreasing = decreasing_on(k, pts);
  std::vector<double> rn(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) rn[i] = k(pts[i]) * std::pow(pts[i], k.dim());
  rep.quasi_increase_constant_rn =
      rn.size() >= 2 ? quasi_monotone_constant(rn, Direction::increasing) : 1.0;
  rep.member = rep.is_decreasing && rep.quasi_increase_constant_rn <= opts.cap;
  return rep;
}

BnReport check_class_Bn(const KernelSpec& k, const GeometricGrid& grid, const ClassOptions& opts) {
  BnReport rep;
  fill_ratio_report(rep, k, grid, opts, RatioKind::Bn);
  rep.member = rep.is_decreasing && !rep.diverges && std::isfinite(rep.sup) && rep.sup <= opts.cap;
  return rep;
}

DReport check_class_D(const KernelSpec& k, const GeometricGrid& grid, const ClassOptions& opts) {
  DReport rep;
  fill_ratio_report(rep, k, grid, opts, RatioKind::D);
  rep.member = !rep.diverges && std::isfinite(rep.sup) && rep.sup <= opts.cap;
  return rep;
}

ClassReport classify(const KernelSpec& k, const GeometricGrid& grid, const ClassOptions& opts) {
  ClassReport rep;
  rep.grid = grid;
  const auto an = check_class_An(k, grid, opts);
  rep.is_decreasing = an.is_decreasing;
  rep.quasi_increase_constant_rn = an.quasi_increase_constant_rn;
  rep.member_An = an.member;
  try {
    const auto bn = check_class_Bn(k, grid, opts);
    rep.member_Bn = bn.member;
    rep.B_constant = bn.B_constant();
    rep.B_lower_ratio = bn.B_lower_ratio();
    rep.B_growth_factor = bn.growth_factor;
    rep.B_ratio_r = bn.r;
    rep.B_ratio = bn.ratio;
  } catch (const SingularIntegrand& e) {
    rep.note += std::string("B_n: ") + e.what() + "; ";
  }
  try {
    const auto d = check_class_D(k, grid, opts);
    rep.member_D = d.member;
    rep.D_constant = d.D_constant();
    rep.D_growth_factor = d.growth_factor;
    rep.D_ratio_r = d.r;
    rep.D_ratio = d.ratio;
  } catch (const SingularIntegrand& e) {
    rep.note += std::string("D: ") + e.what() + "; ";
  }
  return rep;
}

TabulatedKernel load_kernel_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open kernel table: " + path);
  TabulatedKernel t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double r = 0.0, v = 0.0;
    if (!(ls >> r)) continue;
    std::string rest;
    if (!(ls >> v) || (ls >> rest))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected two columns");
    t.r.push_back(r);
    t.value.push_back(v);
  }
  return t;
}

}  // namespace gfm
