#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "gfm/cones.hpp"
#include "gfm/corpus.hpp"
#include "gfm/rearrange.hpp"

using namespace gfm;

namespace {

GridFunction interval(int m) {
  GridGeometry g{1, 2.0, m};
  std::vector<double> v(g.cell_count());
  for (std::size_t c = 0; c < v.size(); ++c) v[c] = std::abs(g.center(c)[0]) < 1.0 ? 1.0 : 0.0;
  return GridFunction(g, std::move(v));
}

std::vector<double> tgrid(const GridGeometry& g) { return TGridSpec{}.points(g); }

}  // namespace

TEST_CASE("cone ids round-trip") {
  for (ConeId id : {ConeId::K1, ConeId::K2, ConeId::K3, ConeId::K4, ConeId::M_riesz})
    CHECK(parse_cone_id(to_string(id)) == id);
  CHECK_THROWS_AS(parse_cone_id("K5"), DomainError);
}

TEST_CASE("zero generator gives the zero element in every cone") {
  const auto k = KernelSpec::power(0.5, 1);
  const auto f = GridFunction::zeros(GridGeometry{1, 2.0, 64});
  for (ConeId id : {ConeId::K1, ConeId::K2, ConeId::K3, ConeId::K4, ConeId::M_riesz}) {
    const auto e = build_cone_element(f, k, RISpec::Lp(2), id);
    CHECK(e.is_zero());
    CHECK(e.functional_bound() == 0.0);
    CHECK(e(0.3) == 0.0);
  }
}

TEST_CASE("K3 of the interval indicator matches the closed form") {
  const double a = 0.5;
  const auto k = KernelSpec::power(a, 1);
  const auto e = build_cone_element(interval(512), k, RISpec::Lp(2), ConeId::K3);
  CHECK(e.functional_bound() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  // f* = indicator of (0, 2): T(t) = 2^a for t <= 2, else 2 t^{a-1}
  for (double t : {0.01, 0.5, 1.9, 2.0, 3.0, 50.0}) {
    const double want = t <= 2.0 ? std::pow(2.0, a) : 2.0 * std::pow(t, a - 1.0);
    CHECK(e(t) == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("exact dominations on a mixed corpus") {
  const auto k = KernelSpec::power(0.5, 1);
  const auto corpus = generate_corpus(CorpusSpec::parse("ball:2,union:2,power:2,staircase:2,random:2", 7), 1);
  const GridGeometry geom{1, 2.0, 128};
  const auto ts = tgrid(geom);
  for (const auto& gen : corpus) {
    CAPTURE(gen.id);
    const auto f = gen.sample(geom);
    const auto E = RISpec::Lp(2);
    const auto K1 = build_cone_element(f, k, E, ConeId::K1);
    const auto K2 = build_cone_element(f, k, E, ConeId::K2);
    const auto K3 = build_cone_element(f, k, E, ConeId::K3);
    const auto K4 = build_cone_element(f, k, E, ConeId::K4);
    const auto Mr = build_cone_element(f, k, E, ConeId::M_riesz);
    for (double t : ts) {
      CHECK(K1(t) <= Mr(t));
      CHECK(K4(t) <= 2.0 * K3(t));
      CHECK(K1(t) <= K2(t) * (1.0 + 1e-12));
    }
    CHECK(check_covering(K1, Mr, ts, CoveringMode::pointwise_dominate).pass);
    CHECK(check_covering(K4, K3, ts, CoveringMode::dominate_with_constant, 1e6, 2.0).pass);
  }
}

TEST_CASE("cone elements scale linearly with the generator") {
  const auto k = KernelSpec::power(0.5, 1);
  const auto f = generate_corpus(CorpusSpec::parse("staircase:1", 3), GridGeometry{1, 2.0, 128})[0];
  const auto f2 = f.scaled(2.0);
  const auto ts = tgrid(f.geometry());
  for (ConeId id : {ConeId::K1, ConeId::K2, ConeId::K3, ConeId::K4, ConeId::M_riesz}) {
    const auto a = build_cone_element(f, k, RISpec::Lp(2), id);
    const auto b = build_cone_element(f2, k, RISpec::Lp(2), id);
    CHECK(b.functional_bound() == 2.0 * a.functional_bound());
    for (double t : ts) CHECK(b(t) == 2.0 * a(t));
  }
}

TEST_CASE("covering check conventions") {
  const auto k = KernelSpec::power(0.5, 1);
  const auto f = interval(64);
  const auto K1 = build_cone_element(f, k, RISpec::Lp(2), ConeId::K1);
  const auto Z = build_cone_element(GridFunction::zeros(f.geometry()), k, RISpec::Lp(2), ConeId::K1);
  const std::vector<double> ts{0.5, 1.0};
  const auto r = check_covering(K1, Z, ts, CoveringMode::dominate_with_constant);
  CHECK(std::isinf(r.C_point));
  CHECK_FALSE(r.pass);
  const auto zz = check_covering(Z, Z, ts, CoveringMode::pointwise_dominate);
  CHECK(zz.points_used == 0);
  CHECK(zz.pass);
  CHECK_THROWS_AS(check_covering(K1, K1, std::vector<double>{}, CoveringMode::pointwise_dominate), DomainError);
}

TEST_CASE("equivalence suite on a small corpus") {
  const auto k = KernelSpec::power(0.5, 1);
  const auto classes = classify(k, GeometricGrid{1e-3, 1e3});
  const auto corpus = generate_corpus(CorpusSpec::parse("ball:1,power:1", 1), 1);
  EquivalenceOptions o;
  o.grid_sizes = {128, 256};
  o.riesz_max_m = 128;
  const auto rep = equivalence_suite(corpus, k, RISpec::Lp(2), classes, o);
  CHECK(rep.count(Status::fail) == 0);
  CHECK(rep.count(Status::pass) > 0);
  CHECK(rep.count(Status::skipped) == 0);

  CHECK(equivalence_suite({}, k, RISpec::Lp(2), classes, o).rows.empty());
}

TEST_CASE("equivalence suite skips directions whose hypotheses fail") {
  const auto k = KernelSpec::log_power(1.0, 2);
  const auto classes = classify(k, GeometricGrid{1e-3, 1e3});
  REQUIRE_FALSE(classes.member_Bn);
  const auto corpus = generate_corpus(CorpusSpec::parse("ball:1", 1), 2);
  EquivalenceOptions o;
  o.grid_sizes = {16, 32};
  const auto rep = equivalence_suite(corpus, k, RISpec::Lp(2), classes, o);
  CHECK(rep.count(Status::skipped) == 4);
  for (const auto& row : rep.rows)
    if (row.status == Status::skipped) CHECK(row.note.rfind("hypothesis not met", 0) == 0);
}

TEST_CASE("corpus is deterministic and validated") {
  const auto spec = CorpusSpec::parse("ball:2,annulus:1,union:1,power:1,log:1,staircase:1,random:1", 42);
  CHECK(spec.size() == 8);
  const GridGeometry g{2, 1.0, 32};
  const auto a = generate_corpus(spec, g);
  const auto b = generate_corpus(spec, g);
  REQUIRE(a.size() == 8);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::ranges::equal(a[i].values(), b[i].values()));
  CHECK_THROWS_AS(CorpusSpec::parse("blob:2", 1), ConfigError);
  CHECK_THROWS_AS(generate_corpus(spec, GridGeometry{2, 0.5, 32}), DomainError);
  // unit-ball indicator in 1D
  const auto ball = generate_corpus(CorpusSpec::parse("ball:1", 1), GridGeometry{1, 2.0, 512})[0];
  CHECK(ball.total_mass() == doctest::Approx(2.0));
}

TEST_CASE("power profile generator rearranges to the truncated profile") {
  const GridGeometry g{1, 1.0, 512};
  const auto f = generate_corpus(CorpusSpec::parse("power:1", 1), g)[0];
  const auto fs = rearrangement(f);
  const double cv = g.cell_volume();
  // f* at t is within one cell measure of the profile
  for (double t : {0.05, 0.3, 1.0, 1.7}) {
    CHECK(fs(t) <= std::pow(std::max(t - cv, cv), -0.3) * (1 + 1e-12));
    CHECK(fs(t) >= std::pow(t + cv, -0.3) * (1 - 1e-12));
  }
}

TEST_CASE("sharp profile") {
  const auto s = sharp_profile(2.0, 1e-2, 16);
  CHECK(s.segment_count() == 32);
  CHECK(s(0.0) == 1.0);
  CHECK(s.support_end() == doctest::Approx(99.0));
  CHECK(s.is_non_increasing());
}
