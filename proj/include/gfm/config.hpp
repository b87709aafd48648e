#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gfm/cones.hpp"
#include "gfm/corpus.hpp"
#include "gfm/operators.hpp"
#include "gfm/spaces.hpp"

namespace gfm {

/// Suites in the order they run; class checks gate the rest.
const std::vector<std::string>& known_suites();

/// Flat key = value experiment description. '#' starts a comment; lists are
/// comma separated. Unknown keys and malformed values raise ConfigError.
struct ExperimentConfig {
  std::vector<std::string> kernels{"power:0.5"};  // "power:0.3n" scales alpha by n
  std::vector<int> dims{1};
  std::vector<int> grid_sizes{64, 128, 256};
  double box_half_width = 2.0;
  TGridSpec tgrid;
  CorpusSpec corpus = CorpusSpec::parse("ball:3,annulus:2,union:3,power:3,log:2,staircase:3,random:4", 1);
  RISpec E = RISpec::Lp(2.0);
  RISpec X = RISpec::Lp(4.0);
  std::vector<std::string> suites = known_suites();
  double cap = 1e6;
  double stability_tol = 0.10;
  FastPathPolicy fast_path;
  double fastpath_tol = 0.02;
  /// Empirical constants use t >= |B(0, resolved_radius_cells * h)|, h the coarsest cell width.
  double resolved_radius_cells = 2.0;
  double resolved_t_min(int n) const;
  std::size_t exact_max_cells = 4096;  // lemma32 and the Riesz cone direction
  double class_r_min = 1e-3;
  double class_r_max = 1e3;
  int class_ppd = 16;
  OptimalNormOptions optimal;
  int thm43_problems = 1000;
  std::uint64_t thm43_seed = 1;
  int embedding_decades = 4;
  std::string output_dir = "gfm-out";

  static ExperimentConfig parse(std::string_view text);
  static ExperimentConfig load(const std::string& path);

  /// One key = value per line, every field, fixed order.
  std::string canonical() const;
  /// FNV-1a over canonical().
  std::uint64_t hash() const;
  std::string hash_hex() const;
};

/// Kernel text for dimension n; a trailing 'n' on the parameter multiplies it by n.
KernelSpec kernel_for(const std::string& text, int n);

}  // namespace gfm
