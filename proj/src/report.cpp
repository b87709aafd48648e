#include "gfm/report.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "gfm/errors.hpp"

namespace gfm {

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skipped: return "skipped";
    default: return "info";
  }
}

Status parse_status(const std::string& s) {
  if (s == "pass") return Status::pass;
  if (s == "fail") return Status::fail;
  if (s == "skipped") return Status::skipped;
  if (s == "info") return Status::info;
  throw ConfigError("unknown status '" + s + "'");
}

namespace {

const char* kHeader = "suite,kernel,generator,m,statistic,x,value,status,note";

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + '"';
}

std::string num(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_num(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(s);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        in_quotes = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void VerificationReport::append(const VerificationReport& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

std::size_t VerificationReport::count(Status s) const {
  std::size_t c = 0;
  for (const auto& r : rows) c += r.status == s ? 1 : 0;
  return c;
}

void VerificationReport::write_csv(std::ostream& out, const std::string& stamp_line) const {
  if (!stamp_line.empty()) out << "# generated " << stamp_line << '\n';
  for (const auto& [k, v] : metadata) out << "# " << k << '=' << v << '\n';
  out << kHeader << '\n';
  for (const auto& r : rows) {
    out << quote(r.suite) << ',' << quote(r.kernel) << ',' << quote(r.generator) << ',' << r.m << ','
        << quote(r.statistic) << ',' << num(r.x) << ',' << num(r.value) << ',' << to_string(r.status) << ','
        << quote(r.note) << '\n';
  }
}

VerificationReport VerificationReport::read_csv(std::istream& in) {
  VerificationReport rep;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (line.rfind("# generated", 0) != 0 && eq != std::string::npos) {
        rep.metadata[line.substr(2, eq - 2)] = line.substr(eq + 1);
      }
      continue;
    }
    if (!header) {
      if (line != kHeader) throw ConfigError("report: unexpected header '" + line + "'");
      header = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 9) throw ConfigError("report: malformed row '" + line + "'");
    ReportRow r;
    r.suite = f[0];
    r.kernel = f[1];
    r.generator = f[2];
    r.m = std::stoi(f[3]);
    r.statistic = f[4];
    r.x = parse_num(f[5]);
    r.value = parse_num(f[6]);
    r.status = parse_status(f[7]);
    r.note = f[8];
    rep.rows.push_back(std::move(r));
  }
  if (!header) throw ConfigError("report: missing header");
  return rep;
}

void VerificationReport::write_summary(std::ostream& out) const {
  // per suite: pass / fail / skipped counts
  std::map<std::string, std::tuple<std::size_t, std::size_t, std::size_t>> per;
  for (const auto& r : rows) {
    auto& [p, f, s] = per[r.suite];
    if (r.status == Status::pass) ++p;
    if (r.status == Status::fail) ++f;
    if (r.status == Status::skipped) ++s;
  }
  for (const auto& [suite, c] : per) {
    const auto& [p, f, s] = c;
    out << suite << ": " << p << " pass, " << f << " fail, " << s << " skipped\n";
  }
  for (const auto& r : rows) {
    if (r.status == Status::fail) {
      out << "FAIL " << r.suite << ' ' << r.kernel << ' ' << r.generator << " m=" << r.m << ' ' << r.statistic
          << " = " << num(r.value) << (r.note.empty() ? "" : " (" + r.note + ")") << '\n';
    }
    if (r.status == Status::skipped) {
      out << "skipped " << r.suite << ' ' << r.kernel << ' ' << r.statistic << ": " << r.note << '\n';
    }
  }
  out << (all_pass() ? "all checks passed" : "some checks failed") << '\n';
}

}  // namespace gfm
