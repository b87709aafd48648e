#include "gfm/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "gfm/errors.hpp"

namespace gfm {

std::string to_string(MaximalPath p) { return p == MaximalPath::exact ? "exact" : "bucketed"; }

MaximalOptions FastPathPolicy::choose(int n, int m) const {
  MaximalOptions o;
  o.bucket_ratio = bucket_ratio;
  o.bucket_kernel_drop = bucket_kernel_drop;
  const bool fast = mode == Mode::on || (mode == Mode::automatic && n >= 2 && m > exact_up_to_m);
  o.path = fast ? MaximalPath::bucketed : MaximalPath::exact;
  return o;
}

namespace {

// Integer cell offsets within one box, grouped by squared length q.
struct OffsetGroups {
  std::vector<std::array<int, 3>> offsets;
  std::vector<std::int64_t> q;        // per group
  std::vector<std::size_t> start;     // group g spans [start[g], start[g+1])
};

OffsetGroups build_offsets(int n, int m) {
  const int lo = -(m - 1), hi = m - 1;
  struct Item {
    std::int64_t q;
    std::array<int, 3> d;
  };
  std::vector<Item> items;
  const std::size_t side = static_cast<std::size_t>(2 * m - 1);
  items.reserve(n == 1 ? side : n == 2 ? side * side : side * side * side);
  const int hi1 = n >= 2 ? hi : 0, lo1 = n >= 2 ? lo : 0;
  const int hi2 = n >= 3 ? hi : 0, lo2 = n >= 3 ? lo : 0;
  for (int z = lo2; z <= hi2; ++z)
    for (int y = lo1; y <= hi1; ++y)
      for (int x = lo; x <= hi; ++x) {
        const std::int64_t q = std::int64_t{x} * x + std::int64_t{y} * y + std::int64_t{z} * z;
        items.push_back({q, {x, y, z}});
      }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return a.q != b.q ? a.q < b.q : a.d < b.d;
  });
  OffsetGroups g;
  g.offsets.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i == 0 || items[i].q != items[i - 1].q) {
      g.q.push_back(items[i].q);
      g.start.push_back(i);
    }
    g.offsets.push_back(items[i].d);
  }
  g.start.push_back(items.size());
  return g;
}

struct Prepared {
  GridGeometry geom;
  OffsetGroups groups;
  std::vector<double> phi;     // per group, Phi(max(h sqrt q, r_cell))
  std::vector<double> masses;  // f_c |cell|
  double total = 0.0;          // safe upper bound on the total mass
  bool decreasing = true;      // phi non-increasing over groups (pruning is valid)
  double r_cell = 0.0;
};

Prepared prepare(const GridFunction& f, const KernelSpec& k) {
  const auto& g = f.geometry();
  if (k.dim() != g.n) throw DomainError("kernel dimension does not match the grid");
  Prepared p;
  p.geom = g;
  p.groups = build_offsets(g.n, g.cells_per_axis);
  const double h = g.cell_width();
  p.r_cell = g.cell_radius();
  const double reach = std::max(p.r_cell, h * std::sqrt(static_cast<double>(p.groups.q.back())));
  if (!k.in_domain(reach) || !k.in_domain(p.r_cell)) {
    throw DomainError("kernel domain does not cover the box diameter: " + k.describe());
  }
  p.phi.resize(p.groups.q.size());
  for (std::size_t i = 0; i < p.phi.size(); ++i) {
    p.phi[i] = k(std::max(h * std::sqrt(static_cast<double>(p.groups.q[i])), p.r_cell));
    if (i > 0 && p.phi[i] > p.phi[i - 1]) p.decreasing = false;
  }
  const double cv = g.cell_volume();
  p.masses.resize(f.size());
  double total = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) {
    p.masses[c] = f[c] * cv;
    total += p.masses[c];
  }
  p.total = total * (1.0 + 1e-12);
  return p;
}

// Mass of group grp around cell c, summed in offset order.
inline double group_mass(const Prepared& p, std::size_t grp, const std::array<int, 3>& c) {
  const int m = p.geom.cells_per_axis;
  const int n = p.geom.n;
  double G = 0.0;
  for (std::size_t o = p.groups.start[grp]; o < p.groups.start[grp + 1]; ++o) {
    const auto& d = p.groups.offsets[o];
    const int x = c[0] + d[0];
    if (x < 0 || x >= m) continue;
    std::size_t idx = static_cast<std::size_t>(x);
    if (n >= 2) {
      const int y = c[1] + d[1];
      if (y < 0 || y >= m) continue;
      idx += static_cast<std::size_t>(m) * static_cast<std::size_t>(y);
      if (n == 3) {
        const int z = c[2] + d[2];
        if (z < 0 || z >= m) continue;
        idx += static_cast<std::size_t>(m) * static_cast<std::size_t>(m) * static_cast<std::size_t>(z);
      }
    }
    G += p.masses[idx];
  }
  return G;
}

MaximalFieldResult maximal_exact(const GridFunction& f, const Prepared& p) {
  const std::size_t N = f.size();
  std::vector<double> out(N, 0.0);
  std::size_t examined = 0;
  const std::size_t ngroups = p.groups.q.size();
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : examined)
  for (std::size_t cell = 0; cell < N; ++cell) {
    const auto c = p.geom.coords(cell);
    double best = 0.0, S = 0.0, P = 0.0;
    std::size_t seen = 0;
    for (std::size_t grp = 0; grp < ngroups; ++grp) {
      if (p.decreasing && p.phi[grp] * p.total <= best) break;
      ++seen;
      const double G = group_mass(p, grp, c);
      if (G == 0.0) continue;
      S += G;
      P += p.phi[grp] * G;
      // phi S <= P in exact arithmetic; the min keeps it so after rounding
      best = std::max(best, std::min(p.phi[grp] * S, P));
    }
    out[cell] = best;
    examined += seen;
  }
  MaximalFieldResult r;
  r.field = GridFunction(p.geom, std::move(out));
  r.radii_examined = examined;
  r.r_cell = p.r_cell;
  r.path = MaximalPath::exact;
  r.bucket_ratio = 1.0;
  return r;
}

std::int64_t isqrt(std::int64_t v) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

// Mass of cells whose centre lies within sqrt(q) cells of c, from prefix sums
// along axis 0.
double ball_mass(const Prepared& p, const std::vector<double>& prefix, const std::array<int, 3>& c,
                 std::int64_t q) {
  const int m = p.geom.cells_per_axis;
  const int n = p.geom.n;
  const auto row = [&](std::size_t row_index, std::int64_t w) {
    const int x0 = std::max(0, c[0] - static_cast<int>(w));
    const int x1 = std::min(m - 1, c[0] + static_cast<int>(w));
    if (x0 > x1) return 0.0;
    const std::size_t base = row_index * static_cast<std::size_t>(m + 1);
    return prefix[base + static_cast<std::size_t>(x1) + 1] - prefix[base + static_cast<std::size_t>(x0)];
  };
  const std::int64_t R = isqrt(q);
  double S = 0.0;
  if (n == 1) return row(0, R);
  const std::int64_t zr = n == 3 ? R : 0;
  for (std::int64_t dz = -zr; dz <= zr; ++dz) {
    const std::int64_t z = c[2] + dz;
    if (n == 3 && (z < 0 || z >= m)) continue;
    const std::int64_t rem_z = q - dz * dz;
    const std::int64_t yr = isqrt(rem_z);
    for (std::int64_t dy = -yr; dy <= yr; ++dy) {
      const std::int64_t y = c[1] + dy;
      if (y < 0 || y >= m) continue;
      const std::size_t ri = static_cast<std::size_t>((n == 3 ? z : 0) * m + y);
      S += row(ri, isqrt(rem_z - dy * dy));
    }
  }
  return std::max(S, 0.0);
}

MaximalFieldResult maximal_bucketed(const GridFunction& f, const Prepared& p, const MaximalOptions& opts) {
  if (!(opts.bucket_ratio > 1.0)) throw DomainError("bucket ratio must exceed 1");
  if (!(opts.bucket_kernel_drop > 0.0 && opts.bucket_kernel_drop < 1.0))
    throw DomainError("bucket kernel drop must lie in (0, 1)");
  const int m = p.geom.cells_per_axis;
  const std::size_t rows = f.size() / static_cast<std::size_t>(m);
  std::vector<double> prefix(rows * static_cast<std::size_t>(m + 1), 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    double run = 0.0;
    for (int x = 0; x < m; ++x) {
      run += p.masses[r * static_cast<std::size_t>(m) + static_cast<std::size_t>(x)];
      prefix[r * static_cast<std::size_t>(m + 1) + static_cast<std::size_t>(x) + 1] = run;
    }
  }
  // bucket radii: every q up to exact_below_q, then geometric, snapped to actual q.
  // Only the outermost radius of a bucket is scanned. Its ball holds at least the
  // mass of every inner one, so with Phi decreasing the loss per bucket is at most
  // 1 - Phi(outer)/Phi(inner); the kernel-drop rule keeps that below bucket_kernel_drop.
  std::vector<std::size_t> buckets;
  const auto& qs = p.groups.q;
  double next_radius = 0.0;
  double phi_floor = 0.0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const double r = std::sqrt(static_cast<double>(qs[i]));
    const bool last = i + 1 == qs.size();
    if (qs[i] <= opts.exact_below_q || last || std::sqrt(static_cast<double>(qs[i + 1])) > next_radius ||
        p.phi[i + 1] < phi_floor) {
      buckets.push_back(i);
      next_radius = r * opts.bucket_ratio;
      if (!last) phi_floor = p.phi[i + 1] * (1.0 - opts.bucket_kernel_drop);
    }
  }
  const std::size_t N = f.size();
  std::vector<double> out(N, 0.0);
  std::size_t examined = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : examined)
  for (std::size_t cell = 0; cell < N; ++cell) {
    const auto c = p.geom.coords(cell);
    double best = 0.0;
    std::size_t seen = 0;
    for (std::size_t b : buckets) {
      if (p.decreasing && p.phi[b] * p.total <= best) break;
      ++seen;
      best = std::max(best, p.phi[b] * ball_mass(p, prefix, c, qs[b]));
    }
    out[cell] = best;
    examined += seen;
  }
  MaximalFieldResult r;
  r.field = GridFunction(p.geom, std::move(out));
  r.radii_examined = examined;
  r.r_cell = p.r_cell;
  r.path = MaximalPath::bucketed;
  r.bucket_ratio = opts.bucket_ratio;
  return r;
}

}  // namespace

MaximalFieldResult maximal_function(const GridFunction& f, const KernelSpec& k, const MaximalOptions& opts) {
  const Prepared p = prepare(f, k);
  if (f.is_zero()) {
    MaximalFieldResult r;
    r.field = GridFunction::zeros(f.geometry());
    r.r_cell = p.r_cell;
    r.path = opts.path;
    r.bucket_ratio = opts.path == MaximalPath::exact ? 1.0 : opts.bucket_ratio;
    return r;
  }
  return opts.path == MaximalPath::exact ? maximal_exact(f, p) : maximal_bucketed(f, p, opts);
}

GridFunction riesz_potential(const GridFunction& f, const KernelSpec& k) {
  const Prepared p = prepare(f, k);
  const std::size_t N = f.size();
  std::vector<double> out(N, 0.0);
  if (f.is_zero()) return GridFunction(p.geom, std::move(out));
  const std::size_t ngroups = p.groups.q.size();
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t cell = 0; cell < N; ++cell) {
    const auto c = p.geom.coords(cell);
    double P = 0.0;
    for (std::size_t grp = 0; grp < ngroups; ++grp) {
      const double G = group_mass(p, grp, c);
      if (G == 0.0) continue;
      P += p.phi[grp] * G;
    }
    out[cell] = P;
  }
  return GridFunction(p.geom, std::move(out));
}

}  // namespace gfm
