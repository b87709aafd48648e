#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gfm/grid.hpp"
#include "gfm/kernels.hpp"
#include "gfm/step_function.hpp"

namespace gfm {

/// Rearrangement-invariant space from the L_p family, 1 <= p <= inf.
struct RISpec {
  double p = 2.0;

  static RISpec Lp(double p);
  /// "L2", "L1.5", "Linf" (case-insensitive L, optional).
  static RISpec parse(std::string_view text);
  RISpec associate() const;
  std::string describe() const;
  bool operator==(const RISpec&) const = default;
};

double conjugate_exponent(double p);

double norm(const RISpec& E, const StepFunction& h);
/// Rearranges and takes the step norm; cross-checks against the cellwise sum.
double norm(const RISpec& E, const GridFunction& f);
double norm_cellwise(const RISpec& E, const GridFunction& f);

double associate_norm(const RISpec& E, const StepFunction& h);
double associate_norm(const RISpec& E, const GridFunction& f);

/// max sum_i g_i w_i Delta_i subject to prefix(g Delta) <= prefix(f Delta), g >= 0.
/// f, w and g are cell densities on consecutive cells of widths Delta.
struct PrefixConstraintProblem {
  std::vector<double> width;
  std::vector<double> f;
  std::vector<double> w;

  void validate() const;
  std::size_t size() const { return width.size(); }
  double mass(std::size_t i) const { return f[i] * width[i]; }
};

/// sum_i f_i Delta_i max_{j >= i} w_j.
double theorem43_rhs(const PrefixConstraintProblem& p);

struct GreedyResult {
  double value = 0.0;
  std::vector<double> g;  // densities
};

/// Cells by descending weight (leftmost first on ties), each filled to the
/// largest mass the remaining prefix slack allows.
GreedyResult theorem43_lhs_greedy(const PrefixConstraintProblem& p);

inline constexpr std::size_t kMaxOracleCells = 12;

/// Vertex enumeration over the 2^m patterns "cell empty / prefix tight".
double theorem43_lp_oracle(const PrefixConstraintProblem& p);

/// Vertices of {eta >= 0 : prefix(eta) <= prefix(masses)}, as mass vectors.
std::vector<std::vector<double>> prefix_polytope_vertices(std::span<const double> masses,
                                                          double tol = 1e-9);

inline constexpr std::size_t kMaxOptimalCells = 16;

struct OptimalNormOptions {
  std::size_t cells = 4;      // uniform cells on (0, horizon]
  double horizon = 0.0;       // 0: support end of f*
  std::size_t budget = 400;   // objective evaluations per seed
  std::vector<std::uint64_t> seeds{1};
};

struct AdmissibleWitness {
  StepFunction g;            // non-increasing, cell-constant
  double certificate = 0.0;  // max over polytope vertices of the associate norm, re-evaluated
  double pairing = 0.0;      // int f* g
  std::uint64_t seed = 0;
};

struct OptimalNormEstimate {
  double lower = 0.0;  // max over witnesses of pairing / certificate
  std::vector<AdmissibleWitness> witnesses;
};

/// Admissibility constraint for cell-constant g on a uniform partition of
/// (0, horizon]: the largest E'-norm of H(t) = int_t^inf Phi(s^{1/n}) h(s) ds over
/// cell-constant h >= 0 with prefix(h) <= prefix(g).
class AdmissibilityCheck {
 public:
  AdmissibilityCheck(const KernelSpec& k, const RISpec& E, double horizon, std::size_t cells);

  double operator()(std::span<const double> g_values) const;
  std::span<const double> edges() const { return edges_; }
  std::size_t cells() const { return cells_; }

 private:
  double vertex_norm(std::span<const double> eta) const;

  std::size_t cells_;
  double q_;  // exponent of the associate space
  std::vector<double> edges_;
  std::vector<double> width_;
  std::vector<double> node_weight_;
  std::vector<std::size_t> node_cell_;
  std::vector<double> coeff_;        // node x cell, H(node) = sum coeff * eta / width
  std::vector<double> cell_drop_;    // Kint(e_i) - Kint(e_{i-1})
};

OptimalNormEstimate optimal_norm_estimate(const StepFunction& fstar, const KernelSpec& k, const RISpec& E,
                                          const OptimalNormOptions& opts = {});

/// int_0^inf g(t) (T f*)(t) dt.
double pairing_with_supremal(const StepFunction& g, const StepFunction& fstar, const KernelSpec& k);

/// max over corpus of pairing_with_supremal(g*, f*) / ||f*||_E; zero entries skipped.
double associate_optimal_lower(const StepFunction& gstar, const KernelSpec& k, const RISpec& E,
                               std::span<const StepFunction> corpus);

/// max over corpus of ||T f*||_X / ||f*||_E; zero entries skipped.
double operator_norm_estimate(const KernelSpec& k, const RISpec& E, const RISpec& X,
                              std::span<const StepFunction> corpus);

}  // namespace gfm
