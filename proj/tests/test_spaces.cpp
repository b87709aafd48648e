#include "doctest.h"

#include <cmath>
#include <random>

#include "gfm/rearrange.hpp"
#include "gfm/spaces.hpp"
#include "gfm/supremal.hpp"

using namespace gfm;

namespace {

PrefixConstraintProblem random_problem(std::mt19937_64& rng, std::size_t m) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PrefixConstraintProblem p;
  for (std::size_t i = 0; i < m; ++i) {
    p.width.push_back(0.1 + u(rng));
    p.f.push_back(u(rng) < 0.25 ? 0.0 : u(rng) * 3.0);
    p.w.push_back(u(rng) < 0.2 ? 0.0 : u(rng));
  }
  return p;
}

StepFunction random_decreasing(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> br, v;
  double t = 0.0, val = 5.0;
  for (std::size_t i = 0; i < k; ++i) {
    t += u(rng);
    val *= u(rng);
    br.push_back(t);
    v.push_back(val);
  }
  return StepFunction(br, v);
}

}  // namespace

TEST_CASE("L_p norms of step and grid data") {
  CHECK(norm(RISpec::Lp(2), StepFunction::indicator(1.0)) == 1.0);
  CHECK(norm(RISpec::Lp(1), StepFunction::indicator(0.5, 2.0)) == 1.0);
  const GridFunction f(GridGeometry{1, 0.75, 3}, {3.0, 1.0, 2.0});
  CHECK(norm(RISpec::Lp(kInf), f) == 3.0);
  CHECK(norm(RISpec::Lp(1), f) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK_THROWS_AS(RISpec::Lp(0.5), DomainError);
  CHECK(RISpec::parse("L2") == RISpec::Lp(2));
  CHECK(std::isinf(RISpec::parse("Linf").p));
  CHECK(RISpec::parse("l1.5").p == 1.5);
  CHECK_THROWS_AS(RISpec::parse("Lx"), ConfigError);
  CHECK(RISpec::Lp(3).associate().p == doctest::Approx(1.5));
  CHECK(std::isinf(RISpec::Lp(1).associate().p));
}

TEST_CASE("associate norm and Hoelder duality") {
  CHECK(associate_norm(RISpec::Lp(2), StepFunction::indicator(1.0)) == 1.0);
  const StepFunction h({0.5, 2.0}, {4.0, 1.0});
  CHECK(associate_norm(RISpec::Lp(1), h) == 4.0);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_decreasing(rng, 6), b = random_decreasing(rng, 4);
    for (double p : {1.0, 1.5, 2.0, 3.0, kInf}) {
      CHECK(integrate_product(a, b) <= associate_norm(RISpec::Lp(p), a) * norm(RISpec::Lp(p), b) * (1 + 1e-12));
    }
  }
}

TEST_CASE("Luxemburg consistency and norm axioms") {
  std::mt19937_64 rng(5);
  std::exponential_distribution<double> ex(1.0);
  GridGeometry g{2, 1.0, 20};
  std::vector<double> v(g.cell_count());
  for (double& x : v) x = rng() % 2 ? ex(rng) : 0.0;
  const GridFunction f(g, v);
  for (double p : {1.0, 1.5, 2.0, 3.0, kInf}) {
    const RISpec E = RISpec::Lp(p);
    CHECK_NOTHROW(norm(E, f));
    CHECK(norm(E, f.scaled(4.0)) == doctest::Approx(4.0 * norm(E, f)).epsilon(1e-15));
    // monotone under a cellwise increase
    std::vector<double> w(v);
    for (double& x : w) x += 0.1;
    CHECK(norm(E, f) <= norm(E, GridFunction(g, w)));
  }
  // Fatou on truncations min(f*, N) of an unbounded-looking profile
  const auto fs = rearrangement(f);
  const double full = norm(RISpec::Lp(2), fs);
  double prev = 0.0;
  for (double cap = 0.5; cap < 100.0; cap *= 2.0) {
    std::vector<double> tv(fs.values().begin(), fs.values().end());
    for (double& x : tv) x = std::min(x, cap);
    const double tn = norm(RISpec::Lp(2), StepFunction({fs.breakpoints().begin(), fs.breakpoints().end()}, tv));
    CHECK(tn >= prev);
    prev = tn;
  }
  CHECK(prev == doctest::Approx(full).epsilon(1e-6));
}

TEST_CASE("prefix allocation: worked examples") {
  PrefixConstraintProblem a{{1, 1}, {1, 1}, {1, 2}};
  CHECK(theorem43_rhs(a) == 4.0);
  const auto ga = theorem43_lhs_greedy(a);
  CHECK(ga.value == 4.0);
  CHECK(ga.g == std::vector<double>{0.0, 2.0});
  CHECK(theorem43_lp_oracle(a) == 4.0);

  PrefixConstraintProblem b{{1, 1}, {1, 1}, {2, 1}};
  CHECK(theorem43_rhs(b) == 3.0);
  const auto gb = theorem43_lhs_greedy(b);
  CHECK(gb.value == 3.0);
  CHECK(gb.g == std::vector<double>{1.0, 1.0});
  CHECK(theorem43_lp_oracle(b) == 3.0);

  PrefixConstraintProblem one{{0.5}, {3.0}, {2.0}};
  CHECK(theorem43_lhs_greedy(one).value == 3.0);
  PrefixConstraintProblem z{{1, 2}, {0, 0}, {1, 2}};
  CHECK(theorem43_rhs(z) == 0.0);
  PrefixConstraintProblem wz{{1, 2}, {1, 2}, {0, 0}};
  CHECK(theorem43_lp_oracle(wz) == 0.0);
  PrefixConstraintProblem big;
  for (int i = 0; i < 13; ++i) big.width.push_back(1), big.f.push_back(1), big.w.push_back(1);
  CHECK_THROWS_AS(theorem43_lp_oracle(big), DomainError);
}

TEST_CASE("prefix allocation: random problems agree three ways") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = random_problem(rng, 1 + trial % 8);
    const double rhs = theorem43_rhs(p);
    CHECK(theorem43_lhs_greedy(p).value == doctest::Approx(rhs).epsilon(1e-12));
    CHECK(theorem43_lp_oracle(p) == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("admissibility check on a single cell has a closed form") {
  // one cell (0,T], g = 1, power kernel, n = 1: the vertices are eta = 0 and eta = T,
  // H(t) = (T^a - t^a)/a; L2 norm squared = int_0^T (T^a - t^a)^2/a^2 dt
  const double a = 0.5, T = 2.0;
  const AdmissibilityCheck check(KernelSpec::power(a, 1), RISpec::Lp(2), T, 1);
  const double g[] = {1.0};
  const double exact = std::sqrt(T * std::pow(T, 2 * a) * (1.0 - 2.0 / (a + 1) + 1.0 / (2 * a + 1))) / a;
  CHECK(check(g) == doctest::Approx(exact).epsilon(1e-10));
  const double g2[] = {2.0};
  CHECK(check(g2) == doctest::Approx(2.0 * check(g)).epsilon(1e-14));
}

TEST_CASE("optimal norm estimate") {
  const auto k = KernelSpec::power(0.5, 1);
  const RISpec E = RISpec::Lp(2);
  const StepFunction fs({0.3, 0.9, 2.0}, {3.0, 1.5, 0.5});
  CHECK(optimal_norm_estimate(StepFunction(), k, E).lower == 0.0);
  CHECK_THROWS_AS(optimal_norm_estimate(fs, k, E, {4, 0.0, 0, {1}}), DomainError);
  CHECK_THROWS_AS(optimal_norm_estimate(fs, k, E, {17, 0.0, 10, {1}}), DomainError);

  OptimalNormOptions opts;
  opts.seeds = {1, 2, 3};
  const auto est = optimal_norm_estimate(fs, k, E, opts);
  CHECK(est.lower > 0.0);
  for (const auto& w : est.witnesses) {
    CHECK(w.certificate <= 1.0 + 1e-12);
    CHECK(w.pairing / w.certificate <= est.lower);
    CHECK(w.g.is_non_increasing());
  }
  for (double lambda : {2.0, 0.25, 1024.0}) {
    const auto scaled = optimal_norm_estimate(fs.scaled(lambda), k, E, opts);
    CHECK(scaled.lower == lambda * est.lower);
  }
}

TEST_CASE("associate optimal lower bound and operator norm estimate") {
  const auto k = KernelSpec::power(0.5, 1);
  const RISpec E = RISpec::Lp(2);
  std::mt19937_64 rng(9);
  std::vector<StepFunction> corpus{StepFunction()};
  for (int i = 0; i < 4; ++i) corpus.push_back(random_decreasing(rng, 5));
  const StepFunction g({0.5, 1.5}, {2.0, 0.5});
  CHECK(associate_optimal_lower(StepFunction(), k, E, corpus) == 0.0);
  const double lower = associate_optimal_lower(g, k, E, corpus);
  for (const auto& f : corpus) {
    if (f.is_zero()) continue;
    CHECK(pairing_with_supremal(g, f, k) / norm(E, f) <= lower);
  }
  // single-element corpus
  const std::vector<StepFunction> one{corpus[1]};
  CHECK(associate_optimal_lower(g, k, E, one) == pairing_with_supremal(g, corpus[1], k) / norm(E, corpus[1]));
  // T chi_(0,1) = 1 on (0,1): pairing with chi_(0,1) is 1
  CHECK(pairing_with_supremal(StepFunction::indicator(1.0), StepFunction::indicator(1.0), k) ==
        doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<StepFunction> zeros{StepFunction(), StepFunction()};
  CHECK(operator_norm_estimate(k, E, RISpec::Lp(4), zeros) == 0.0);
  CHECK(operator_norm_estimate(k, E, RISpec::Lp(4), corpus) > 0.0);
}
