#include "gfm/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "gfm/errors.hpp"

namespace gfm {

namespace {

constexpr char kMagic[8] = {'G', 'F', 'M', 'G', 'R', 'I', 'D', '1'};

void expect_key(std::istream& in, const char* key) {
  std::string k;
  if (!(in >> k) || k != key) throw ConfigError(std::string("grid text: expected '") + key + "'");
}

}  // namespace

void write_grid_text(const GridFunction& f, std::ostream& out) {
  const auto& g = f.geometry();
  out << "gfm-grid 1\n"
      << "n " << g.n << '\n'
      << "m " << g.cells_per_axis << '\n'
      << std::setprecision(17) << "L " << g.half_width << '\n';
  for (double v : f.values()) out << v << '\n';
}

GridFunction read_grid_text(std::istream& in) {
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "gfm-grid" || version != 1) {
    throw ConfigError("grid text: bad header");
  }
  GridGeometry g;
  expect_key(in, "n");
  in >> g.n;
  expect_key(in, "m");
  in >> g.cells_per_axis;
  expect_key(in, "L");
  in >> g.half_width;
  if (!in) throw ConfigError("grid text: bad geometry");
  g.validate();
  std::vector<double> values(g.cell_count());
  for (double& v : values) {
    if (!(in >> v)) throw ConfigError("grid text: truncated values");
  }
  return GridFunction(g, std::move(values));
}

void write_grid_binary(const GridFunction& f, std::ostream& out) {
  const auto& g = f.geometry();
  const std::int32_t n = g.n;
  const std::int32_t m = g.cells_per_axis;
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&m), sizeof m);
  out.write(reinterpret_cast<const char*>(&g.half_width), sizeof g.half_width);
  out.write(reinterpret_cast<const char*>(f.values().data()),
            static_cast<std::streamsize>(f.values().size() * sizeof(double)));
}

GridFunction read_grid_binary(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) throw ConfigError("grid binary: bad magic");
  std::int32_t n = 0, m = 0;
  double L = 0.0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&m), sizeof m);
  in.read(reinterpret_cast<char*>(&L), sizeof L);
  if (!in) throw ConfigError("grid binary: truncated header");
  GridGeometry g{n, L, m};
  g.validate();
  std::vector<double> values(g.cell_count());
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!in) throw ConfigError("grid binary: truncated values");
  return GridFunction(g, std::move(values));
}

GridFunction load_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open grid file " + path);
  char head[8] = {};
  in.read(head, sizeof head);
  in.clear();
  in.seekg(0);
  if (std::memcmp(head, kMagic, sizeof kMagic) == 0) return read_grid_binary(in);
  return read_grid_text(in);
}

void save_grid(const GridFunction& f, const std::string& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw ConfigError("cannot write grid file " + path);
  binary ? write_grid_binary(f, out) : write_grid_text(f, out);
}

void write_step_csv(const StepFunction& h, std::ostream& out) {
  out << "breakpoint,value\n" << std::setprecision(17);
  const auto br = h.breakpoints();
  const auto vals = h.values();
  for (std::size_t i = 0; i < br.size(); ++i) out << h.left(i) << ',' << vals[i] << '\n';
  out << (br.empty() ? 0.0 : br.back()) << ',' << h.tail() << '\n';
}

StepFunction read_step_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("breakpoint,value", 0) != 0) {
    throw ConfigError("step csv: missing header");
  }
  std::vector<double> lefts, vals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    double a = 0.0, v = 0.0;
    char comma = 0;
    if (!(row >> a >> comma >> v) || comma != ',') throw ConfigError("step csv: bad row '" + line + "'");
    lefts.push_back(a);
    vals.push_back(v);
  }
  if (lefts.empty()) throw ConfigError("step csv: no rows");
  const double tail = vals.back();
  vals.pop_back();
  std::vector<double> breaks(lefts.begin() + 1, lefts.end());
  return StepFunction(std::move(breaks), std::move(vals), tail);
}

}  // namespace gfm
