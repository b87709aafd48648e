#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "gfm/kernels.hpp"

using namespace gfm;

TEST_CASE("eval_phi closed forms") {
  CHECK(eval_phi(KernelSpec::power(1.0, 2), 2.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eval_phi(KernelSpec::log_kernel(1.0, 1), 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(eval_phi(KernelSpec::log_power(1.0, 1), 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(eval_phi(KernelSpec::log_kernel(1.0, 1), 1.5), DomainError);
  CHECK_THROWS_AS(eval_phi(KernelSpec::power(1.0, 2), 0.0), DomainError);
  CHECK_THROWS_AS(KernelSpec::power(2.0, 2), DomainError);
}

TEST_CASE("tabulated kernel interpolates in log-log and refuses to extrapolate") {
  // samples of r^-1/2 are exact under log-log interpolation
  std::vector<double> r{0.01, 0.1, 1.0, 10.0};
  std::vector<double> v;
  for (double x : r) v.push_back(1.0 / std::sqrt(x));
  const auto k = KernelSpec::tabulated(r, v, 1);
  CHECK(k(0.5) == doctest::Approx(1.0 / std::sqrt(0.5)).epsilon(1e-13));
  CHECK_THROWS_AS(k(20.0), DomainError);
  const auto ke = KernelSpec::tabulated(r, v, 1, true);
  CHECK(ke(100.0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_AS(KernelSpec::tabulated({1.0, 1.0}, {1.0, 2.0}, 1), DomainError);
  CHECK_THROWS_AS(KernelSpec::tabulated({1.0, 2.0}, {1.0, -2.0}, 1), DomainError);
}

TEST_CASE("kernel text form") {
  CHECK(KernelSpec::parse("power:0.5", 1).is_power());
  CHECK(std::holds_alternative<LogKernel>(KernelSpec::parse("log:2", 2).family()));
  CHECK(std::holds_alternative<LogPowerKernel>(KernelSpec::parse("logpower:1", 2).family()));
  CHECK_THROWS_AS(KernelSpec::parse("gauss:1", 1), ConfigError);
}

TEST_CASE("quasi_monotone_constant") {
  const std::vector<double> lin{1, 2, 4};
  CHECK(quasi_monotone_constant(lin, Direction::increasing) == 1.0);
  const std::vector<double> dip{2, 1, 1.5};
  CHECK(quasi_monotone_constant(dip, Direction::increasing) == 2.0);
  // brute force over all pairs
  const std::vector<double> wig{3, 1, 4, 1, 5, 9, 2, 6};
  double brute = 1.0;
  for (std::size_t i = 0; i < wig.size(); ++i)
    for (std::size_t j = i + 1; j < wig.size(); ++j) brute = std::max(brute, wig[i] / wig[j]);
  CHECK(quasi_monotone_constant(wig, Direction::increasing) == doctest::Approx(brute).epsilon(1e-15));
  std::vector<double> scaled(wig);
  for (double& x : scaled) x *= 7.25;
  CHECK(quasi_monotone_constant(scaled, Direction::increasing) ==
        quasi_monotone_constant(wig, Direction::increasing));
  CHECK_THROWS_AS(quasi_monotone_constant(std::vector<double>{1.0}, Direction::increasing), DomainError);
  CHECK_THROWS_AS(quasi_monotone_constant(std::vector<double>{1.0, 0.0}, Direction::increasing), DomainError);
}

TEST_CASE("phi_profile") {
  CHECK(phi_profile(KernelSpec::power(0.5, 1), 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(phi_profile(KernelSpec::power(1.0, 2), std::numbers::pi) == doctest::Approx(1.0).epsilon(1e-14));
  const auto k = KernelSpec::log_power(0.7, 1);
  for (double r : {0.01, 0.3, 2.0, 50.0}) CHECK(phi_profile(k, 2.0 * r) == doctest::Approx(k(r)).epsilon(1e-14));
}

TEST_CASE("power kernels: class constants match closed forms") {
  const GeometricGrid grid{1e-3, 1e3, 16};
  for (int n = 1; n <= 3; ++n) {
    for (double frac : {0.3, 0.5, 0.8}) {
      const double a = frac * n;
      const auto rep = classify(KernelSpec::power(a, n), grid);
      CHECK(rep.member_An);
      CHECK(rep.member_Bn);
      CHECK(rep.member_D);
      CHECK(rep.quasi_increase_constant_rn == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(rep.B_constant == doctest::Approx(1.0 / a).epsilon(1e-6));
      CHECK(rep.D_constant == doctest::Approx(1.0 / (n - a)).epsilon(1e-6));
      CHECK(rep.B_lower_ratio >= 1.0 / n);
    }
  }
  CHECK(check_class_D(KernelSpec::power(0.9, 1), grid).D_constant() == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(check_class_Bn(KernelSpec::power(0.5, 1), grid).B_constant() == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("log-power kernel: A_n and D but not B_n") {
  const GeometricGrid grid{1e-4, 1e4, 16};
  const auto rep = classify(KernelSpec::log_power(1.0, 2), grid);
  CHECK(rep.member_An);
  CHECK(rep.member_D);
  CHECK_FALSE(rep.member_Bn);
  CHECK(rep.B_growth_factor >= 1.9);
  // ratio rises over the last decade
  const auto& br = rep.B_ratio;
  const std::size_t last_decade = br.size() - 17;
  for (std::size_t i = last_decade + 1; i < br.size(); ++i) CHECK(br[i] > br[i - 1]);
}

TEST_CASE("log-power with alpha >= n has a singular D integrand") {
  const GeometricGrid grid{1e-4, 1e4, 16};
  CHECK_THROWS_AS(check_class_D(KernelSpec::log_power(1.0, 1), grid), SingularIntegrand);
  const auto rep = classify(KernelSpec::log_power(1.0, 1), grid);
  CHECK(rep.member_An);
  CHECK_FALSE(rep.member_D);
  CHECK_FALSE(rep.note.empty());
}

TEST_CASE("log kernel") {
  const auto k = KernelSpec::log_kernel(1.0, 2);
  const GeometricGrid grid{1e-6, 1.0, 16};
  const auto rep = classify(k, grid);
  CHECK(rep.member_An);
  CHECK(rep.member_Bn);
  // B ratio = 1/n + 1/(n^2 (1 + ln(R/r))) peaks at r = R
  CHECK(rep.B_constant == doctest::Approx(0.5 + 0.25).epsilon(1e-9));
  CHECK_FALSE(rep.member_D);
}

TEST_CASE("constant tabulated kernel is in A_n") {
  const auto k = KernelSpec::tabulated({1e-3, 1.0, 1e3}, {1.0, 1.0, 1.0}, 1);
  const auto rep = check_class_An(k, GeometricGrid{1e-3, 1e3, 8});
  CHECK(rep.member);
  CHECK(rep.quasi_increase_constant_rn == 1.0);
}

TEST_CASE("quadrature route agrees with closed forms") {
  // a table of r^{alpha-n} is exact under log-log interpolation, so the generic
  // integrator must reproduce r^alpha / alpha
  const double a = 0.5;
  std::vector<double> r, v;
  for (int i = -12; i <= 4; ++i) {
    r.push_back(std::pow(10.0, i));
    v.push_back(std::pow(r.back(), a - 1.0));
  }
  const auto k = KernelSpec::tabulated(r, v, 1, true);
  const std::vector<double> at{1e-3, 1.0, 100.0};
  const auto b = bn_integral(k, at);
  for (std::size_t i = 0; i < at.size(); ++i) CHECK(b[i] == doctest::Approx(std::sqrt(at[i]) / a).epsilon(1e-8));
  const auto d = d_integral(k, at);
  for (std::size_t i = 0; i < at.size(); ++i) CHECK(d[i] == doctest::Approx(std::sqrt(at[i]) / 0.5).epsilon(1e-8));
}
