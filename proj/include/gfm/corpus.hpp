#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gfm/grid.hpp"
#include "gfm/step_function.hpp"

namespace gfm {

/// Families and counts, e.g. "ball:3,power:4,random:5", plus the seed.
struct CorpusSpec {
  std::vector<std::pair<std::string, int>> families;
  std::uint64_t seed = 1;

  static CorpusSpec parse(std::string_view text, std::uint64_t seed);
  std::string describe() const;
  std::size_t size() const;
};

/// Known families: ball, annulus, union, power, log, staircase, random.
/// Every generator is supported in the closed unit ball (random blocks: in
/// [-1, 1]^n) and is independent of resolution; random blocks align with grids
/// whose cell width divides 1/4.
std::vector<Generator> generate_corpus(const CorpusSpec& spec, int n);
std::vector<GridFunction> generate_corpus(const CorpusSpec& spec, const GridGeometry& geometry);

/// Step approximation of (s + 1)^{-1/p} on (0, 1/eps - 1), geometric in s + 1,
/// sampled at the left end of each step.
StepFunction sharp_profile(double p, double eps, int steps_per_decade = 16);

}  // namespace gfm
