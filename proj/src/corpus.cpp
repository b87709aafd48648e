#include "gfm/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "gfm/detail/random.hpp"
#include "gfm/errors.hpp"
#include "gfm/kernels.hpp"

namespace gfm {

namespace {

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names{"ball", "annulus", "union", "power", "log", "staircase", "random"};
  return names;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::uint64_t stream_seed(std::uint64_t seed, std::size_t family, int index) {
  // splitmix64 finaliser over (seed, family, index)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (1 + family * 4096 + static_cast<std::uint64_t>(index));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Cellwise sampling of a point function at cell centres.
Generator pointwise(std::string id, bool radial, std::function<double(const std::array<double, 3>&, double)> value) {
  Generator g;
  g.id = std::move(id);
  g.radial = radial;
  g.sample = [value = std::move(value)](const GridGeometry& geom) {
    geom.validate();
    std::vector<double> v(geom.cell_count());
    const double cv = geom.cell_volume();
    for (std::size_t c = 0; c < v.size(); ++c) v[c] = value(geom.center(c), cv);
    return GridFunction(geom, std::move(v));
  };
  return g;
}

double norm_of(const std::array<double, 3>& x) { return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); }

// Radial generator x -> phi(v_n |x|^n), profile argument floored at one cell volume.
Generator radial(std::string id, int n, std::function<double(double)> phi) {
  const double vn = unit_ball_volume(n);
  return pointwise(std::move(id), true, [=](const std::array<double, 3>& x, double cv) {
    const double t = vn * std::pow(norm_of(x), n);
    if (t >= vn) return 0.0;
    return phi(std::max(t, cv));
  });
}

}  // namespace

CorpusSpec CorpusSpec::parse(std::string_view text, std::uint64_t seed) {
  CorpusSpec spec;
  spec.seed = seed;
  std::string s(text);
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
    if (item.empty()) continue;
    const auto colon = item.find(':');
    std::string name = item.substr(0, colon);
    int count = 1;
    if (colon != std::string::npos) {
      try {
        count = std::stoi(item.substr(colon + 1));
      } catch (const std::exception&) {
        throw ConfigError("corpus: bad count in '" + item + "'");
      }
    }
    if (std::find(family_names().begin(), family_names().end(), name) == family_names().end()) {
      throw ConfigError("corpus: unknown family '" + name + "'");
    }
    if (count < 0) throw ConfigError("corpus: negative count in '" + item + "'");
    spec.families.emplace_back(name, count);
  }
  return spec;
}

std::string CorpusSpec::describe() const {
  std::string out;
  for (const auto& [name, count] : families) {
    if (!out.empty()) out += ',';
    out += name + ':' + std::to_string(count);
  }
  return out;
}

std::size_t CorpusSpec::size() const {
  std::size_t s = 0;
  for (const auto& fc : families) s += static_cast<std::size_t>(fc.second);
  return s;
}

std::vector<Generator> generate_corpus(const CorpusSpec& spec, int n) {
  if (n < 1 || n > 3) throw DomainError("corpus dimension must be 1, 2 or 3");
  const double vn = unit_ball_volume(n);
  std::vector<Generator> out;
  for (const auto& [name, count] : spec.families) {
    const std::size_t fam = static_cast<std::size_t>(
        std::find(family_names().begin(), family_names().end(), name) - family_names().begin());
    for (int i = 0; i < count; ++i) {
      std::mt19937_64 rng(stream_seed(spec.seed, fam, i));
      const double frac = count > 1 ? static_cast<double>(i) / (count - 1) : 0.0;
      if (name == "ball") {
        const double r = 1.0 - 0.6 * frac;
        out.push_back(pointwise(fmt("ball_r%.2f", r), true, [r](const std::array<double, 3>& x, double) {
          return norm_of(x) < r ? 1.0 : 0.0;
        }));
      } else if (name == "annulus") {
        const double lo = 0.2 + 0.5 * frac, hi = std::min(1.0, lo + 0.3);
        out.push_back(pointwise(fmt("annulus_r%.2f", lo), false, [lo, hi](const std::array<double, 3>& x, double) {
          const double r = norm_of(x);
          return r >= lo && r < hi ? 1.0 : 0.0;
        }));
      } else if (name == "union") {
        struct Ball {
          std::array<double, 3> c;
          double r, h;
        };
        std::vector<Ball> balls(3);
        for (auto& b : balls) {
          b.c = {0.0, 0.0, 0.0};
          for (int d = 0; d < n; ++d) b.c[d] = -0.55 + 1.1 * detail::portable_uniform(rng);
          b.r = 0.15 + 0.25 * detail::portable_uniform(rng);
          b.h = 1.0 + 2.0 * detail::portable_uniform(rng);
        }
        out.push_back(pointwise("union_" + std::to_string(i), false, [balls](const std::array<double, 3>& x, double) {
          double v = 0.0;
          for (const auto& b : balls) {
            const std::array<double, 3> d{x[0] - b.c[0], x[1] - b.c[1], x[2] - b.c[2]};
            if (norm_of(d) < b.r) v += b.h;
          }
          return v;
        }));
      } else if (name == "power") {
        const double a = 0.3 + 0.15 * (i % 5);
        out.push_back(radial(fmt("power_a%.2f", a), n, [a](double t) { return std::pow(t, -a); }));
      } else if (name == "log") {
        const double b = 0.5 * (i + 1);
        out.push_back(radial(fmt("log_b%.1f", b), n, [b, vn](double t) { return std::pow(std::log(std::exp(1.0) * vn / t), b); }));
      } else if (name == "staircase") {
        const int steps = 3 + static_cast<int>(rng() % 4);
        std::vector<double> br(static_cast<std::size_t>(steps));
        for (double& x : br) x = vn * (0.05 + 0.95 * detail::portable_uniform(rng));
        std::sort(br.begin(), br.end());
        br.back() = vn;
        std::vector<double> vals(br.size());
        double v = 1.0 + 4.0 * detail::portable_uniform(rng);
        for (double& x : vals) {
          x = v;
          v *= 0.3 + 0.6 * detail::portable_uniform(rng);
        }
        br.erase(std::unique(br.begin(), br.end()), br.end());
        vals.resize(br.size());
        const StepFunction phi(br, vals);
        out.push_back(radial("staircase_" + std::to_string(i), n, [phi](double t) { return phi(t); }));
      } else {  // random blocks on an 8^n coarse grid over [-1, 1]^n
        const std::size_t blocks = static_cast<std::size_t>(std::pow(8, n));
        std::vector<double> val(blocks, 0.0);
        for (double& x : val) {
          const double keep = detail::portable_uniform(rng), u = detail::portable_uniform(rng);
          x = keep < 0.5 ? std::pow(1.0 - u, -1.0 / 1.5) : 0.0;  // Pareto, index 1.5
        }
        out.push_back(pointwise("random_" + std::to_string(i), false, [val, n](const std::array<double, 3>& x, double) {
          std::size_t idx = 0;
          for (int d = n - 1; d >= 0; --d) {
            if (x[d] < -1.0 || x[d] >= 1.0) return 0.0;
            idx = idx * 8 + static_cast<std::size_t>(std::floor((x[d] + 1.0) * 4.0));
          }
          return val[idx];
        }));
      }
    }
  }
  return out;
}

std::vector<GridFunction> generate_corpus(const CorpusSpec& spec, const GridGeometry& geometry) {
  if (geometry.half_width < 1.0) throw DomainError("corpus support exceeds the box: need half-width >= 1");
  std::vector<GridFunction> out;
  for (const auto& g : generate_corpus(spec, geometry.n)) out.push_back(g.sample(geometry));
  return out;
}

StepFunction sharp_profile(double p, double eps, int steps_per_decade) {
  if (!(p >= 1.0) || std::isinf(p)) throw DomainError("sharp profile needs finite p >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("sharp profile needs 0 < eps < 1");
  const int N = std::max(1, static_cast<int>(std::ceil(steps_per_decade * std::log10(1.0 / eps))));
  std::vector<double> br, vals;
  for (int i = 1; i <= N; ++i) {
    const double u_prev = std::pow(eps, -static_cast<double>(i - 1) / N);
    const double u = std::pow(eps, -static_cast<double>(i) / N);
    br.push_back(u - 1.0);
    vals.push_back(std::pow(u_prev, -1.0 / p));
  }
  return StepFunction(std::move(br), std::move(vals));
}

}  // namespace gfm
