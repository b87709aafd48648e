#pragma once

#include <cstddef>
#include <string>

#include "gfm/grid.hpp"
#include "gfm/kernels.hpp"

namespace gfm {

enum class MaximalPath {
  exact,     // every distinct inclusion radius
  bucketed,  // geometric radius buckets over row prefix sums; a lower bound
};

std::string to_string(MaximalPath p);

struct MaximalOptions {
  MaximalPath path = MaximalPath::exact;
  double bucket_ratio = 1.02;   // radius growth between buckets
  double bucket_kernel_drop = 0.015;  // a bucket also closes once Phi falls by this fraction
  long exact_below_q = 16;      // all squared integer radii up to this are kept
};

/// Which path to take at a given resolution.
struct FastPathPolicy {
  enum class Mode { off, on, automatic } mode = Mode::automatic;
  int exact_up_to_m = 64;  // automatic: exact for n = 1 and for m <= this
  double bucket_ratio = 1.02;
  double bucket_kernel_drop = 0.015;

  MaximalOptions choose(int n, int m) const;
};

struct MaximalFieldResult {
  GridFunction field;
  std::size_t radii_examined = 0;  // summed over evaluation cells
  double r_cell = 0.0;
  MaximalPath path = MaximalPath::exact;
  double bucket_ratio = 1.0;  // 1 on the exact path
};

/// (M f)(x) = max_k Phi(max(d_k, r_cell)) S_k over the distinct centre distances
/// d_k around x, S_k the mass of cells with centre within d_k.
MaximalFieldResult maximal_function(const GridFunction& f, const KernelSpec& k,
                                    const MaximalOptions& opts = {});

/// sum_c Phi(max(|x - y_c|, r_cell)) f_c |cell|, accumulated in the same order as
/// the exact maximal function so that M f <= I f holds bit for bit.
GridFunction riesz_potential(const GridFunction& f, const KernelSpec& k);

}  // namespace gfm
