#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gfm/config.hpp"
#include "gfm/kernels.hpp"
#include "gfm/report.hpp"

namespace gfm {

/// Runs the configured suites in dependency order. Class checks are always
/// computed because they gate the theorem suites; their rows are reported
/// only when requested. Progress lines go to `log` when given.
VerificationReport run_suites(const ExperimentConfig& cfg, std::ostream* log = nullptr);

// Individual suites, usable without a config.
VerificationReport class_check_suite(const KernelSpec& k, const ClassReport& c, const std::string& label);
VerificationReport thm43_suite(int problems, std::uint64_t seed);
VerificationReport embedding_suite(const KernelSpec& k, const RISpec& E, const RISpec& X, int decades,
                                   const std::string& label, int steps_per_decade = 16);

/// Writes report.csv and summary.txt to cfg.output_dir.
void write_outputs(const VerificationReport& report, const ExperimentConfig& cfg, double wall_seconds);

const std::vector<std::string>& plot_keys();
/// Projects a report onto one figure's CSV. Unknown keys raise ConfigError
/// listing the available ones; an empty kernel filter keeps every kernel.
void emit_plot_data(const VerificationReport& report, std::string_view key, std::ostream& out,
                    std::string_view kernel = {});

}  // namespace gfm
