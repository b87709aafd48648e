#pragma once

#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gfm/errors.hpp"

namespace gfm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

// Kernel families. Each is a radial profile Phi on (0, R).

struct PowerKernel {
  double alpha;  // Phi(r) = r^(alpha - n), 0 < alpha < n
};

struct LogKernel {
  double R;  // Phi(r) = ln(e R / r) on (0, R]
};

struct LogPowerKernel {
  double alpha;  // Phi(t) = t^(-n) * ln(1 + t)^alpha
};

struct TabulatedKernel {
  std::vector<double> r;
  std::vector<double> value;
  bool extrapolate = false;  // log-log extension outside [r.front(), r.back()]
};

using KernelFamily = std::variant<PowerKernel, LogKernel, LogPowerKernel, TabulatedKernel>;

/// A radial kernel Phi: (0, R) -> (0, inf) in dimension n.
class KernelSpec {
 public:
  static KernelSpec power(double alpha, int n);
  static KernelSpec log_kernel(double R, int n);
  static KernelSpec log_power(double alpha, int n);
  static KernelSpec tabulated(std::vector<double> r, std::vector<double> value, int n,
                              bool extrapolate = false);

  /// Parses "power:<alpha>", "log:<R>", "logpower:<alpha>", "table:<path>[:extrapolate]".
  static KernelSpec parse(std::string_view text, int n);

  int dim() const { return n_; }
  const KernelFamily& family() const { return family_; }

  /// Right endpoint R of the domain; +inf for Power and LogPower.
  double right_endpoint() const;
  double left_endpoint() const;  // > 0 only for non-extrapolated tables
  bool in_domain(double r) const;

  /// Phi(r). Throws DomainError outside the domain.
  double operator()(double r) const;

  bool is_power() const { return std::holds_alternative<PowerKernel>(family_); }
  /// True when the family is known to make s*Phi(s^{1/n}) non-decreasing.
  bool has_increasing_weight() const;

  std::string describe() const;

 private:
  KernelSpec(KernelFamily family, int n);

  KernelFamily family_;
  int n_;
};

double eval_phi(const KernelSpec& k, double r);

/// phi(tau) = Phi((tau / v_n)^{1/n}).
double phi_profile(const KernelSpec& k, double tau);

/// Geometric evaluation grid r_min = r_0 < ... < r_N = r_max.
struct GeometricGrid {
  double r_min;
  double r_max;
  int points_per_decade = 16;

  std::vector<double> points() const;
  double decades() const;
  /// Same centre (geometric mean), twice the decade span. With a finite right
  /// endpoint R the extension is applied to the left end only.
  GeometricGrid doubled(double R = kInf) const;
};

enum class Direction { increasing, decreasing };

/// Smallest C >= 1 with v_i <= C v_j (increasing) or v_j <= C v_i (decreasing)
/// for every i < j, by a single running-extremum sweep.
double quasi_monotone_constant(std::span<const double> values, Direction direction);

struct ClassOptions {
  double cap = 1e6;
  double growth_threshold = 1.5;  // doubled-grid sup ratio above which a trend counts as divergence
  double trend_rel = 1e-6;        // minimal relative rise over the last decade to count as a trend
};

struct AnReport {
  bool is_decreasing = false;
  double quasi_increase_constant_rn = kInf;
  bool member = false;
};

/// Shared shape of the B_n and D reports: ratio(r) over the grid and the
/// divergence diagnostics.
struct RatioReport {
  bool is_decreasing = false;
  std::vector<double> r;
  std::vector<double> ratio;
  double sup = kInf;
  double inf = kInf;
  bool trend_increasing = false;  // over the last decade of the grid
  double growth_factor = 1.0;     // sup on doubled grid / sup on grid
  bool diverges = false;
  bool member = false;
};

struct BnReport : RatioReport {
  double B_constant() const { return member ? sup : kInf; }
  double B_lower_ratio() const { return inf; }
};

struct DReport : RatioReport {
  double D_constant() const { return member ? sup : kInf; }
};

AnReport check_class_An(const KernelSpec& k, const GeometricGrid& grid,
                        const ClassOptions& opts = {});
BnReport check_class_Bn(const KernelSpec& k, const GeometricGrid& grid,
                        const ClassOptions& opts = {});
DReport check_class_D(const KernelSpec& k, const GeometricGrid& grid,
                      const ClassOptions& opts = {});

struct ClassReport {
  GeometricGrid grid;
  bool is_decreasing = false;
  double quasi_increase_constant_rn = kInf;
  double B_constant = kInf;
  double B_lower_ratio = kInf;
  double D_constant = kInf;
  bool member_An = false;
  bool member_Bn = false;
  bool member_D = false;
  double B_growth_factor = 1.0;
  double D_growth_factor = 1.0;
  std::string note;  // e.g. singular integrand near 0
  std::vector<double> B_ratio_r, B_ratio;
  std::vector<double> D_ratio_r, D_ratio;
};

/// Runs all three checks; a singular integrand turns into a non-member with a note.
ClassReport classify(const KernelSpec& k, const GeometricGrid& grid, const ClassOptions& opts = {});

/// int_0^r Phi(rho) rho^{n-1} d rho at each r in `at` (closed forms where available).
std::vector<double> bn_integral(const KernelSpec& k, std::span<const double> at);
/// int_0^r dt / (Phi(t) t) at each r in `at`.
std::vector<double> d_integral(const KernelSpec& k, std::span<const double> at);

/// Loads a two-column (r, value) table; '#' starts a comment.
TabulatedKernel load_kernel_table(const std::string& path);

}  // namespace gfm
