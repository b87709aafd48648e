#pragma once

#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace gfm {

enum class Status { pass, fail, skipped, info };

std::string to_string(Status s);
Status parse_status(const std::string& s);

struct ReportRow {
  std::string suite;
  std::string kernel;
  std::string generator;
  int m = 0;
  std::string statistic;
  double x = std::numeric_limits<double>::quiet_NaN();
  double value = std::numeric_limits<double>::quiet_NaN();
  Status status = Status::info;
  std::string note;
};

/// Append-only list of rows plus run metadata.
struct VerificationReport {
  std::vector<ReportRow> rows;
  std::map<std::string, std::string> metadata;

  void add(ReportRow row) { rows.push_back(std::move(row)); }
  void append(const VerificationReport& other);
  std::size_t count(Status s) const;
  bool all_pass() const { return count(Status::fail) == 0; }

  /// First line "# generated ..." carries the timestamp and wall time; the rest
  /// is reproducible for a fixed config.
  void write_csv(std::ostream& out, const std::string& stamp_line = "") const;
  static VerificationReport read_csv(std::istream& in);
  void write_summary(std::ostream& out) const;
};

}  // namespace gfm
