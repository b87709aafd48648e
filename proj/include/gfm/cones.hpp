#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gfm/grid.hpp"
#include "gfm/kernels.hpp"
#include "gfm/operators.hpp"
#include "gfm/report.hpp"
#include "gfm/spaces.hpp"
#include "gfm/step_function.hpp"
#include "gfm/supremal.hpp"

namespace gfm {

enum class ConeId { K1, K2, K3, K4, M_riesz };

std::string to_string(ConeId id);
ConeId parse_cone_id(std::string_view text);

/// One element h of a cone, generated by a grid function f, with the witness
/// bound ||f||_E on its functional.
class ConeElement {
 public:
  using Representation = std::variant<StepFunction, DoubleStar, SupremalOperator, K4Functional>;

  ConeElement(ConeId id, Representation h, double functional_bound, std::string generator);

  ConeId id() const { return id_; }
  double operator()(double t) const;
  double functional_bound() const { return bound_; }
  const std::string& generator() const { return generator_; }
  bool is_zero() const { return bound_ == 0.0; }
  const Representation& representation() const { return h_; }

 private:
  ConeId id_;
  Representation h_;
  double bound_;
  std::string generator_;
};

struct ConeBuildOptions {
  MaximalOptions maximal;
  std::string generator;
};

ConeElement build_cone_element(const GridFunction& f, const KernelSpec& k, const RISpec& E, ConeId id,
                               const ConeBuildOptions& opts = {});

/// Geometric t-grid relative to the inscribed-ball measure v_n L^n, cut
/// strictly below the box measure.
struct TGridSpec {
  double lo_factor = 1e-4;
  double hi_factor = 1.0;
  int points_per_decade = 16;

  std::vector<double> points(const GridGeometry& g) const;
};

enum class CoveringMode { pointwise_dominate, dominate_with_constant };

struct CoveringReport {
  double C_point = 0.0;  // sup of h_src / h_dst over the t-grid
  double C0 = 0.0;       // functional bound of dst over that of src
  std::size_t points_used = 0;
  bool pass = false;
};

/// pointwise_dominate passes iff C_point <= 1; dominate_with_constant iff
/// C_point <= min(cap, bound). Both need C0 <= cap.
CoveringReport check_covering(const ConeElement& src, const ConeElement& dst, std::span<const double> tgrid,
                              CoveringMode mode, double cap = 1e6, double bound = kInf);

struct EquivalenceOptions {
  double half_width = 2.0;
  std::vector<int> grid_sizes{256, 512, 1024};
  TGridSpec tgrid;
  FastPathPolicy fast_path;
  double cap = 1e6;
  double stability_tol = 0.10;
  /// Constant (non-exact) directions use only t >= this; exact bounds use every t.
  double resolved_t_min = 0.0;
  int riesz_max_m = 0;  // K1 vs M_riesz only up to this resolution; 0 disables
  std::string kernel_label;
  /// Optional source of (M f)* for a sampled generator; the key names the
  /// generator and resolution. Lets a caller share fields across suites.
  std::function<StepFunction(const GridFunction& f, const MaximalOptions& path, const std::string& key)> maximal_star;
};

/// Directed coverings K1<K2, K2<K3, K3<K1 (radial synthesis of f*), K4<K3,
/// K3<K4 and K1<M_riesz across the refinement ladder. Directions whose kernel
/// hypotheses fail are reported as skipped.
VerificationReport equivalence_suite(std::span<const Generator> corpus, const KernelSpec& k, const RISpec& E,
                                     const ClassReport& classes, const EquivalenceOptions& opts = {});

}  // namespace gfm
