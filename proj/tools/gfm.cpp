// gfm: verification harness command line.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "gfm/config.hpp"
#include "gfm/corpus.hpp"
#include "gfm/errors.hpp"
#include "gfm/harness.hpp"
#include "gfm/io.hpp"
#include "gfm/kernels.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

int cmd_verify(const std::string& path, const std::string& out_dir, bool quiet) {
  auto cfg = gfm::ExperimentConfig::load(path);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  const auto t0 = std::chrono::steady_clock::now();
  const auto report = gfm::run_suites(cfg, quiet ? nullptr : &std::cerr);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  gfm::write_outputs(report, cfg, wall);
  report.write_summary(std::cout);
  std::cout << "report: " << (std::filesystem::path(cfg.output_dir) / "report.csv").string() << " (" << wall
            << " s)\n";
  return report.all_pass() ? kExitPass : kExitFail;
}

int cmd_corpus(const std::string& path, const std::string& out_dir, int m, bool binary) {
  auto cfg = gfm::ExperimentConfig::load(path);
  const std::string dir = out_dir.empty() ? cfg.output_dir + "/corpus" : out_dir;
  std::filesystem::create_directories(dir);
  if (m <= 0) m = cfg.grid_sizes.back();
  for (int n : cfg.dims) {
    const gfm::GridGeometry geom{n, cfg.box_half_width, m};
    for (const auto& g : gfm::generate_corpus(cfg.corpus, n)) {
      const auto file = dir + "/" + g.id + "_n" + std::to_string(n) + "_m" + std::to_string(m) + ".grid";
      gfm::save_grid(g.sample(geom), file, binary);
      std::cout << file << '\n';
    }
  }
  return kExitPass;
}

int cmd_plotdata(const std::string& report_path, const std::string& key, const std::string& out,
                 const std::string& kernel) {
  std::ifstream in(report_path);
  if (!in) throw gfm::ConfigError("cannot read report '" + report_path + "'");
  const auto report = gfm::VerificationReport::read_csv(in);
  if (out.empty() || out == "-") {
    gfm::emit_plot_data(report, key, std::cout, kernel);
  } else {
    std::ofstream o(out);
    gfm::emit_plot_data(report, key, o, kernel);
  }
  return kExitPass;
}

int cmd_classcheck(const std::string& kernel, int n, double r_min, double r_max, int ppd, bool curves) {
  const auto k = gfm::kernel_for(kernel, n);
  const double hi = std::min(r_max, k.right_endpoint());
  const auto c = gfm::classify(k, gfm::GeometricGrid{r_min, hi, ppd});
  auto rep = gfm::class_check_suite(k, c, k.describe());
  if (!curves) std::erase_if(rep.rows, [](const gfm::ReportRow& r) { return r.statistic.ends_with("_ratio") && !std::isnan(r.x); });
  rep.write_csv(std::cout);
  return rep.all_pass() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized fractional maximal functions: verification harness"};
  app.require_subcommand(1);

  std::string cfg_path, out_dir, report_path, key, out_file, kernel, kernel_filter;
  bool quiet = false, binary = false, curves = false;
  int m = 0, n = 1, ppd = 16;
  double r_min = 1e-3, r_max = 1e3;

  auto* verify = app.add_subcommand("verify", "run the configured suites; exit 0 all pass, 1 any fail");
  verify->add_option("config", cfg_path, "config file")->required();
  verify->add_option("-o,--out", out_dir, "output directory (overrides output_dir)");
  verify->add_flag("-q,--quiet", quiet, "no progress on stderr");

  auto* corpus = app.add_subcommand("corpus", "write the corpus as grid files");
  corpus->add_option("config", cfg_path, "config file")->required();
  corpus->add_option("-o,--out", out_dir, "output directory");
  corpus->add_option("-m", m, "cells per axis (default: finest grid size)");
  corpus->add_flag("--binary", binary, "binary grid format");

  auto* plot = app.add_subcommand("plotdata", "project a report onto one figure's CSV");
  plot->add_option("report", report_path, "report.csv")->required();
  plot->add_option("key", key, "figure key")->required();
  plot->add_option("-o,--out", out_file, "output file (default stdout)");
  plot->add_option("--kernel", kernel_filter, "keep rows of this kernel label only");

  auto* cls = app.add_subcommand("classcheck", "kernel class membership and constants");
  cls->add_option("kernel", kernel, "e.g. power:0.5, log:1, logpower:1, table:file.csv")->required();
  cls->add_option("-n,--dim", n, "dimension")->check(CLI::Range(1, 3));
  cls->add_option("--r-min", r_min, "grid start");
  cls->add_option("--r-max", r_max, "grid end");
  cls->add_option("--ppd", ppd, "points per decade");
  cls->add_flag("--curves", curves, "include ratio curves");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (*verify) return cmd_verify(cfg_path, out_dir, quiet);
    if (*corpus) return cmd_corpus(cfg_path, out_dir, m, binary);
    if (*plot) return cmd_plotdata(report_path, key, out_file, kernel_filter);
    if (*cls) return cmd_classcheck(kernel, n, r_min, r_max, ppd, curves);
  } catch (const gfm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const gfm::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitPass;
}
