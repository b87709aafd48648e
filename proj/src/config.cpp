#include "gfm/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "gfm/errors.hpp"
#include "gfm/kernels.hpp"

namespace gfm {

const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> s{"class_checks", "rearrangement_exact", "lemma32", "thm31", "thm32",
                                          "thm33",        "cones",               "thm43",   "optimal_norm",
                                          "embedding"};
  return s;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long d = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const auto d = std::stoull(v, &used);
    if (used != v.size() || v.front() == '-') throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F&& f) {
  std::string out;
  for (const auto& x : xs) {
    if (!out.empty()) out += ',';
    out += f(x);
  }
  return out;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

KernelSpec kernel_for(const std::string& text, int n) {
  const auto colon = text.find(':');
  if (colon != std::string::npos && text.size() > colon + 1 && text.back() == 'n' && text.rfind("table", 0) != 0) {
    const std::string arg = text.substr(colon + 1, text.size() - colon - 2);
    const double v = to_double("kernels", arg);
    return KernelSpec::parse(text.substr(0, colon + 1) + num(v * n), n);
  }
  return KernelSpec::parse(text, n);
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  ExperimentConfig c;
  std::string corpus_text = c.corpus.describe();
  std::uint64_t seed = c.corpus.seed;
  std::map<std::string, int> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    if (seen[key]++) throw ConfigError("duplicate key '" + key + "'");
    if (key == "kernels") {
      c.kernels = split_list(v);
    } else if (key == "n") {
      c.dims.clear();
      for (const auto& s : split_list(v)) c.dims.push_back(static_cast<int>(to_int(key, s)));
    } else if (key == "grid_sizes") {
      c.grid_sizes.clear();
      for (const auto& s : split_list(v)) c.grid_sizes.push_back(static_cast<int>(to_int(key, s)));
    } else if (key == "box_half_width") {
      c.box_half_width = to_double(key, v);
    } else if (key == "tgrid_lo") {
      c.tgrid.lo_factor = to_double(key, v);
    } else if (key == "tgrid_hi") {
      c.tgrid.hi_factor = to_double(key, v);
    } else if (key == "tgrid_ppd") {
      c.tgrid.points_per_decade = static_cast<int>(to_int(key, v));
    } else if (key == "corpus") {
      corpus_text = v;
    } else if (key == "seed") {
      seed = to_u64(key, v);
    } else if (key == "E") {
      try {
        c.E = RISpec::parse(v);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("E: ") + e.what());
      }
    } else if (key == "X") {
      try {
        c.X = RISpec::parse(v);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("X: ") + e.what());
      }
    } else if (key == "suites") {
      c.suites = v == "all" ? known_suites() : split_list(v);
    } else if (key == "cap") {
      c.cap = to_double(key, v);
    } else if (key == "stability_tol") {
      c.stability_tol = to_double(key, v);
    } else if (key == "fast_path") {
      if (v == "off") c.fast_path.mode = FastPathPolicy::Mode::off;
      else if (v == "on") c.fast_path.mode = FastPathPolicy::Mode::on;
      else if (v == "auto") c.fast_path.mode = FastPathPolicy::Mode::automatic;
      else throw ConfigError("fast_path: expected off, on or auto");
    } else if (key == "fast_path_exact_up_to_m") {
      c.fast_path.exact_up_to_m = static_cast<int>(to_int(key, v));
    } else if (key == "bucket_ratio") {
      c.fast_path.bucket_ratio = to_double(key, v);
    } else if (key == "bucket_kernel_drop") {
      c.fast_path.bucket_kernel_drop = to_double(key, v);
    } else if (key == "fastpath_tol") {
      c.fastpath_tol = to_double(key, v);
    } else if (key == "resolved_radius_cells") {
      c.resolved_radius_cells = to_double(key, v);
    } else if (key == "exact_max_cells") {
      c.exact_max_cells = static_cast<std::size_t>(to_u64(key, v));
    } else if (key == "class_r_min") {
      c.class_r_min = to_double(key, v);
    } else if (key == "class_r_max") {
      c.class_r_max = to_double(key, v);
    } else if (key == "class_ppd") {
      c.class_ppd = static_cast<int>(to_int(key, v));
    } else if (key == "optimal_cells") {
      c.optimal.cells = static_cast<std::size_t>(to_u64(key, v));
    } else if (key == "optimal_budget") {
      c.optimal.budget = static_cast<std::size_t>(to_u64(key, v));
    } else if (key == "optimal_seeds") {
      c.optimal.seeds.clear();
      for (const auto& s : split_list(v)) c.optimal.seeds.push_back(to_u64(key, s));
    } else if (key == "thm43_problems") {
      c.thm43_problems = static_cast<int>(to_int(key, v));
    } else if (key == "thm43_seed") {
      c.thm43_seed = to_u64(key, v);
    } else if (key == "embedding_decades") {
      c.embedding_decades = static_cast<int>(to_int(key, v));
    } else if (key == "output_dir") {
      c.output_dir = v;
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  c.corpus = CorpusSpec::parse(corpus_text, seed);

  require(!c.kernels.empty() || c.suites.empty(), "kernels: at least one kernel needed");
  require(!c.dims.empty(), "n: at least one dimension needed");
  for (int n : c.dims) require(n >= 1 && n <= 3, "n: dimensions are 1, 2 or 3");
  for (int n : c.dims)
    for (const auto& k : c.kernels) {
      try {
        (void)kernel_for(k, n);
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        throw ConfigError("kernels: '" + k + "' in dimension " + std::to_string(n) + ": " + e.what());
      }
    }
  require(!c.grid_sizes.empty(), "grid_sizes: at least one size needed");
  for (int m : c.grid_sizes) require(m >= 2, "grid_sizes: sizes must be >= 2");
  require(std::is_sorted(c.grid_sizes.begin(), c.grid_sizes.end()), "grid_sizes: must be increasing");
  require(c.box_half_width >= 1.0, "box_half_width: corpus needs >= 1");
  require(c.tgrid.lo_factor > 0.0 && c.tgrid.hi_factor > c.tgrid.lo_factor && c.tgrid.points_per_decade > 0,
          "tgrid: need 0 < tgrid_lo < tgrid_hi and tgrid_ppd > 0");
  for (const auto& s : c.suites)
    require(std::find(known_suites().begin(), known_suites().end(), s) != known_suites().end(),
            "suites: unknown suite '" + s + "'");
  require(c.cap > 1.0, "cap: must exceed 1");
  require(c.stability_tol > 0.0, "stability_tol: must be positive");
  require(c.fast_path.bucket_ratio > 1.0, "bucket_ratio: must exceed 1");
  require(c.fast_path.bucket_kernel_drop > 0.0 && c.fast_path.bucket_kernel_drop < 1.0,
          "bucket_kernel_drop: must lie in (0, 1)");
  require(c.fastpath_tol > 0.0, "fastpath_tol: must be positive");
  require(c.resolved_radius_cells >= 0.0, "resolved_radius_cells: must be >= 0");
  require(c.class_r_min > 0.0 && c.class_r_max > c.class_r_min && c.class_ppd > 0, "class grid: bad range");
  require(c.optimal.cells >= 1 && c.optimal.cells <= kMaxOptimalCells, "optimal_cells: 1..16");
  require(c.optimal.budget > 0, "optimal_budget: must be positive");
  require(!c.optimal.seeds.empty(), "optimal_seeds: at least one seed");
  require(c.thm43_problems >= 0, "thm43_problems: must be >= 0");
  require(c.embedding_decades >= 1, "embedding_decades: must be >= 1");
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string ExperimentConfig::canonical() const {
  const auto ints = [](const auto& xs) { return join(xs, [](auto v) { return std::to_string(v); }); };
  const char* fp = fast_path.mode == FastPathPolicy::Mode::off ? "off"
                   : fast_path.mode == FastPathPolicy::Mode::on ? "on"
                                                                : "auto";
  std::ostringstream o;
  o << "kernels = " << join(kernels, [](const std::string& s) { return s; }) << '\n'
    << "n = " << ints(dims) << '\n'
    << "grid_sizes = " << ints(grid_sizes) << '\n'
    << "box_half_width = " << num(box_half_width) << '\n'
    << "tgrid_lo = " << num(tgrid.lo_factor) << '\n'
    << "tgrid_hi = " << num(tgrid.hi_factor) << '\n'
    << "tgrid_ppd = " << tgrid.points_per_decade << '\n'
    << "corpus = " << corpus.describe() << '\n'
    << "seed = " << corpus.seed << '\n'
    << "E = " << E.describe() << '\n'
    << "X = " << X.describe() << '\n'
    << "suites = " << join(suites, [](const std::string& s) { return s; }) << '\n'
    << "cap = " << num(cap) << '\n'
    << "stability_tol = " << num(stability_tol) << '\n'
    << "fast_path = " << fp << '\n'
    << "fast_path_exact_up_to_m = " << fast_path.exact_up_to_m << '\n'
    << "bucket_ratio = " << num(fast_path.bucket_ratio) << '\n'
    << "bucket_kernel_drop = " << num(fast_path.bucket_kernel_drop) << '\n'
    << "fastpath_tol = " << num(fastpath_tol) << '\n'
    << "resolved_radius_cells = " << num(resolved_radius_cells) << '\n'
    << "exact_max_cells = " << exact_max_cells << '\n'
    << "class_r_min = " << num(class_r_min) << '\n'
    << "class_r_max = " << num(class_r_max) << '\n'
    << "class_ppd = " << class_ppd << '\n'
    << "optimal_cells = " << optimal.cells << '\n'
    << "optimal_budget = " << optimal.budget << '\n'
    << "optimal_seeds = " << ints(optimal.seeds) << '\n'
    << "thm43_problems = " << thm43_problems << '\n'
    << "thm43_seed = " << thm43_seed << '\n'
    << "embedding_decades = " << embedding_decades << '\n'
    << "output_dir = " << output_dir << '\n';
  return o.str();
}

double ExperimentConfig::resolved_t_min(int n) const {
  const double h = 2.0 * box_half_width / grid_sizes.front();
  return unit_ball_volume(n) * std::pow(resolved_radius_cells * h, n);
}

std::uint64_t ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ExperimentConfig::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

}  // namespace gfm
