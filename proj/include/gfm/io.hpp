#pragma once

#include <iosfwd>
#include <string>

#include "gfm/grid.hpp"
#include "gfm/step_function.hpp"

namespace gfm {

// Text grid: "gfm-grid 1", then "n <n>", "m <m>", "L <L>", then one value per line.
void write_grid_text(const GridFunction& f, std::ostream& out);
GridFunction read_grid_text(std::istream& in);

// Binary grid: "GFMGRID1", int32 n, int32 m, f64 L, f64 values (little endian host order).
void write_grid_binary(const GridFunction& f, std::ostream& out);
GridFunction read_grid_binary(std::istream& in);

/// Loads either format, sniffing the magic bytes.
GridFunction load_grid(const std::string& path);
void save_grid(const GridFunction& f, const std::string& path, bool binary = false);

// Step CSV: header "breakpoint,value"; row i holds the left end of segment i and
// its value, the final row the last breakpoint and the tail.
void write_step_csv(const StepFunction& h, std::ostream& out);
StepFunction read_step_csv(std::istream& in);

}  // namespace gfm
