#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gfm/config.hpp"
#include "gfm/errors.hpp"
#include "gfm/harness.hpp"

using namespace gfm;

namespace {

std::string csv_body(const VerificationReport& r) {
  std::ostringstream s;
  r.write_csv(s, "stamp");
  const std::string all = s.str();
  return all.substr(all.find('\n') + 1);  // drop the stamp line
}

const ReportRow* find_row(const VerificationReport& r, const std::string& suite, const std::string& stat) {
  for (const auto& row : r.rows)
    if (row.suite == suite && row.statistic == stat) return &row;
  return nullptr;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = ExperimentConfig::parse(
      "# comment\nkernels = power:0.5, logpower:1  # trailing\nn = 1,2\ngrid_sizes = 32, 64\nE = L1.5\nX = Linf\n"
      "suites = thm43, cones\nfast_path = off\noptimal_seeds = 3, 4\nseed = 99\ncorpus = ball:1\n");
  CHECK(c.kernels.size() == 2);
  CHECK(c.dims == std::vector<int>{1, 2});
  CHECK(c.grid_sizes == std::vector<int>{32, 64});
  CHECK(c.E.p == 1.5);
  CHECK(std::isinf(c.X.p));
  CHECK(c.suites == std::vector<std::string>{"thm43", "cones"});
  CHECK(c.fast_path.mode == FastPathPolicy::Mode::off);
  CHECK(c.corpus.seed == 99);
  CHECK(c.optimal.seeds == std::vector<std::uint64_t>{3, 4});

  // canonical form parses back to the same config
  const auto again = ExperimentConfig::parse(c.canonical());
  CHECK(again.canonical() == c.canonical());
  CHECK(again.hash() == c.hash());
  CHECK(ExperimentConfig::parse("seed = 2\n").hash() != ExperimentConfig::parse("seed = 3\n").hash());

  CHECK(ExperimentConfig::parse("suites = all\n").suites == known_suites());
  CHECK(ExperimentConfig::parse("suites =\n").suites.empty());
}

TEST_CASE("config errors") {
  for (const char* bad : {"bogus = 1", "n = 4", "grid_sizes = 64, 32", "cap = abc", "fast_path = maybe",
                          "kernels = power:3", "kernels = nope:1", "suites = thm99", "seed = 1\nseed = 2",
                          "just a line", "corpus = blob:3", "box_half_width = 0.5", "optimal_cells = 17", "E = Lx"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(ExperimentConfig::parse(bad), ConfigError);
  }
  CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/config"), ConfigError);
}

TEST_CASE("kernel notation scales alpha by n") {
  CHECK(kernel_for("power:0.5n", 2).describe() == KernelSpec::power(1.0, 2).describe());
  CHECK(kernel_for("power:0.5", 2).describe() == KernelSpec::power(0.5, 2).describe());
}

TEST_CASE("empty suite list gives an empty report") {
  const auto r = run_suites(ExperimentConfig::parse("suites =\n"));
  CHECK(r.rows.empty());
  CHECK(r.all_pass());
}

TEST_CASE("logpower kernel skips the B_n suites") {
  const auto r = run_suites(ExperimentConfig::parse(
      "kernels = logpower:1\nn = 2\ngrid_sizes = 16, 32\ncorpus = ball:1\nsuites = thm32, thm33\n"));
  REQUIRE(r.rows.size() == 2);
  for (const auto& row : r.rows) {
    CHECK(row.status == Status::skipped);
    CHECK(row.note == "hypothesis not met: Phi not in B_n");
  }
}

TEST_CASE("small end-to-end run passes and is reproducible") {
  const std::string text =
      "kernels = power:0.5\nn = 1\ngrid_sizes = 32, 64\ncorpus = ball:1, power:1, staircase:1, random:2\n"
      "suites = all\nthm43_problems = 50\noptimal_seeds = 1, 2\n";
  const auto a = run_suites(ExperimentConfig::parse(text));
  const auto b = run_suites(ExperimentConfig::parse(text));
  CHECK(a.all_pass());
  CHECK(csv_body(a) == csv_body(b));
  for (const auto& s : known_suites()) {
    CAPTURE(s);
    CHECK(std::any_of(a.rows.begin(), a.rows.end(), [&](const ReportRow& r) { return r.suite == s; }));
  }
  // suites appear in run order
  std::size_t last = 0;
  for (const auto& row : a.rows) {
    const auto pos = static_cast<std::size_t>(std::find(known_suites().begin(), known_suites().end(), row.suite) -
                                              known_suites().begin());
    CHECK(pos >= last);
    last = pos;
  }
  // CSV round trip
  std::istringstream in(csv_body(a));
  const auto back = VerificationReport::read_csv(in);
  CHECK(back.rows.size() == a.rows.size());
  CHECK(csv_body(back) == csv_body(a));

  std::ostringstream plot;
  emit_plot_data(a, "thm31_ratio", plot);
  const std::string text_out = plot.str();
  CHECK(text_out.rfind("t,ratio,generator\n", 0) == 0);
  CHECK(std::count(text_out.begin(), text_out.end(), '\n') > 10);
  std::ostringstream cls;
  emit_plot_data(a, "class_Bn_ratio", cls);
  CHECK(cls.str().rfind("r,ratio\n", 0) == 0);
}

TEST_CASE("unknown plot key lists the available keys") {
  std::ostringstream out;
  try {
    emit_plot_data(VerificationReport{}, "nope", out);
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    for (const auto& k : plot_keys()) CHECK(msg.find(k) != std::string::npos);
  }
}

TEST_CASE("prefix allocation suite") {
  const auto r = thm43_suite(200, 5);
  CHECK(r.all_pass());
  CHECK(find_row(r, "thm43", "max_rel_deviation[greedy]") != nullptr);
  const auto structured = thm43_suite(0, 5);  // structured cases only
  CHECK(structured.all_pass());
  CHECK(std::none_of(structured.rows.begin(), structured.rows.end(),
                     [](const ReportRow& row) { return row.generator == "random"; }));
}

TEST_CASE("embedding suite contrast") {
  const auto k = KernelSpec::power(0.4, 1);
  const auto r = embedding_suite(k, RISpec::Lp(2), RISpec::Lp(10), 4, "k");
  const auto* band = find_row(r, "embedding", "band_q");
  const auto* growth = find_row(r, "embedding", "growth_p");
  REQUIRE(band);
  REQUIRE(growth);
  CHECK(band->value <= 3.0);
  CHECK(growth->value >= 10.0);
  // alpha / n > 1 / p: no Sobolev exponent
  const auto skip = embedding_suite(KernelSpec::power(0.8, 1), RISpec::Lp(2), RISpec::Lp(10), 4, "k");
  REQUIRE(!skip.rows.empty());
  for (const auto& row : skip.rows) CHECK(row.status == Status::skipped);
}
