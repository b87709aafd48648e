#pragma once

#include <span>

#include "gfm/grid.hpp"
#include "gfm/step_function.hpp"

namespace gfm {

/// lambda_f(y): measure of {f > y}. Exact (count times cell volume).
double distribution(const GridFunction& f, double y);
/// Measure of {h > y} for a step function; +inf if the tail exceeds y.
double distribution(const StepFunction& h, double y);

/// Non-increasing rearrangement. Breakpoints sit at count * cell_volume, runs of
/// equal values are merged.
StepFunction rearrangement(const GridFunction& f);
StepFunction rearrangement(std::span<const double> values, double cell_volume);

/// f^#(r) = f*(v_n r^n).
double symmetric_rearrangement(const StepFunction& fstar, int n, double r);

/// Samples x -> phi(v_n |x|^n) at cell centres. phi must be non-increasing and
/// vanish beyond the inscribed-ball measure v_n L^n.
GridFunction synthesize_radial(const StepFunction& phi, const GridGeometry& geometry);

}  // namespace gfm
