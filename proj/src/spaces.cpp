#include "gfm/spaces.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gfm/detail/random.hpp"
#include "gfm/detail/sum.hpp"
#include "gfm/errors.hpp"
#include "gfm/rearrange.hpp"
#include "gfm/supremal.hpp"

namespace gfm {

RISpec RISpec::Lp(double p) {
  if (!(p >= 1.0)) throw DomainError("L_p needs p in [1, inf]");
  return RISpec{p};
}

RISpec RISpec::parse(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (!s.empty() && (s[0] == 'L' || s[0] == 'l')) s.erase(0, 1);
  if (s == "inf" || s == "infinity" || s == "Inf") return Lp(kInf);
  double p = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), p);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("cannot parse space '" + std::string(text) + "'");
  return Lp(p);
}

double conjugate_exponent(double p) {
  if (!(p >= 1.0)) throw DomainError("exponent must be >= 1");
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

RISpec RISpec::associate() const { return Lp(conjugate_exponent(p)); }

std::string RISpec::describe() const {
  if (std::isinf(p)) return "Linf";
  std::ostringstream os;
  os << 'L' << p;
  return os.str();
}

double norm(const RISpec& E, const StepFunction& h) {
  const double p = RISpec::Lp(E.p).p;
  const auto br = h.breakpoints();
  const auto vals = h.values();
  if (std::isinf(p)) {
    double m = std::abs(h.tail());
    for (double v : vals) m = std::max(m, std::abs(v));
    return m;
  }
  if (h.tail() != 0.0) return kInf;
  detail::CompensatedSum s;
  for (std::size_t i = 0; i < br.size(); ++i) s += std::pow(std::abs(vals[i]), p) * (br[i] - h.left(i));
  return std::pow(s.value(), 1.0 / p);
}

double norm_cellwise(const RISpec& E, const GridFunction& f) {
  const double p = RISpec::Lp(E.p).p;
  if (std::isinf(p)) return f.max_value();
  detail::CompensatedSum s;
  for (double v : f.values()) s += std::pow(v, p);
  return std::pow(s.value() * f.cell_volume(), 1.0 / p);
}

double norm(const RISpec& E, const GridFunction& f) {
  const double lux = norm(E, rearrangement(f));
  const double direct = norm_cellwise(E, f);
  if (std::abs(lux - direct) > 1e-12 * std::max(lux, direct)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "rearranged norm " << lux << " disagrees with cellwise norm " << direct;
    throw std::logic_error(msg.str());
  }
  return lux;
}

double associate_norm(const RISpec& E, const StepFunction& h) { return norm(E.associate(), h); }
double associate_norm(const RISpec& E, const GridFunction& f) { return norm(E.associate(), f); }

// ---------------------------------------------------------------------------
// prefix-constrained allocation

void PrefixConstraintProblem::validate() const {
  if (f.size() != width.size() || w.size() != width.size()) {
    throw DomainError("problem vectors must have equal length");
  }
  for (std::size_t i = 0; i < width.size(); ++i) {
    if (!(width[i] > 0.0) || !std::isfinite(width[i])) throw DomainError("cell widths must be positive");
    if (!(f[i] >= 0.0) || !std::isfinite(f[i])) throw DomainError("f must be finite and non-negative");
    if (!(w[i] >= 0.0) || !std::isfinite(w[i])) throw DomainError("weights must be finite and non-negative");
  }
}

double theorem43_rhs(const PrefixConstraintProblem& p) {
  p.validate();
  detail::CompensatedSum s;
  double suffix_max = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) {
    suffix_max = std::max(suffix_max, p.w[i]);
    s += p.mass(i) * suffix_max;
  }
  return s.value();
}

GreedyResult theorem43_lhs_greedy(const PrefixConstraintProblem& p) {
  p.validate();
  const std::size_t m = p.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p.w[a] > p.w[b]; });
  std::vector<double> slack(m);  // prefix(F) - prefix(G) at each right cell edge
  double run = 0.0;
  for (std::size_t i = 0; i < m; ++i) slack[i] = (run += p.mass(i));
  std::vector<double> G(m, 0.0);
  for (std::size_t i : order) {
    double room = kInf;
    for (std::size_t j = i; j < m; ++j) room = std::min(room, slack[j]);
    G[i] = std::max(room, 0.0);
    for (std::size_t j = i; j < m; ++j) slack[j] -= G[i];
  }
  GreedyResult r;
  r.g.resize(m);
  detail::CompensatedSum s;
  for (std::size_t i = 0; i < m; ++i) {
    r.g[i] = G[i] / p.width[i];
    s += G[i] * p.w[i];
  }
  r.value = s.value();
  return r;
}

std::vector<std::vector<double>> prefix_polytope_vertices(std::span<const double> masses, double tol) {
  const std::size_t m = masses.size();
  if (m > 24) throw DomainError("too many cells for vertex enumeration");
  std::vector<double> cap(m);
  double run = 0.0;
  for (std::size_t i = 0; i < m; ++i) cap[i] = (run += masses[i]);
  std::vector<std::vector<double>> out;
  std::vector<double> eta(m);
  for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << m); ++pattern) {
    double pre = 0.0;
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) {
      // bit set: prefix i tight, else eta_i = 0
      double e = (pattern >> i) & 1U ? cap[i] - pre : 0.0;
      if (e < -tol) {
        ok = false;
        break;
      }
      e = std::max(e, 0.0);
      if (pre + e > cap[i] + tol) ok = false;
      eta[i] = e;
      pre += e;
    }
    if (ok) out.push_back(eta);
  }
  return out;
}

double theorem43_lp_oracle(const PrefixConstraintProblem& p) {
  p.validate();
  if (p.size() > kMaxOracleCells) throw DomainError("LP oracle limited to 12 cells");
  std::vector<double> masses(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) masses[i] = p.mass(i);
  double best = 0.0;
  for (const auto& eta : prefix_polytope_vertices(masses)) {
    detail::CompensatedSum s;
    for (std::size_t i = 0; i < eta.size(); ++i) s += eta[i] * p.w[i];
    best = std::max(best, s.value());
  }
  return best;
}

// ---------------------------------------------------------------------------
// admissibility and the optimal-norm search

namespace {

template <int N>
void append_gauss(double a, double b, std::size_t cell, std::vector<double>& nodes, std::vector<double>& weights,
                  std::vector<std::size_t>& cells) {
  using Rule = boost::math::quadrature::gauss<double, N>;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (double sgn : {-1.0, 1.0}) {
      if (x[i] == 0.0 && sgn < 0) continue;
      nodes.push_back(mid + sgn * half * x[i]);
      weights.push_back(half * w[i]);
      cells.push_back(cell);
    }
  }
}

}  // namespace

AdmissibilityCheck::AdmissibilityCheck(const KernelSpec& k, const RISpec& E, double horizon, std::size_t cells)
    : cells_(cells), q_(conjugate_exponent(RISpec::Lp(E.p).p)) {
  if (cells == 0 || cells > kMaxOptimalCells) throw DomainError("admissibility check needs 1..16 cells");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be positive and finite");
  edges_.resize(cells + 1);
  for (std::size_t j = 0; j <= cells; ++j) edges_[j] = horizon * static_cast<double>(j) / static_cast<double>(cells);
  edges_.back() = horizon;
  width_.resize(cells);
  for (std::size_t j = 0; j < cells; ++j) width_[j] = edges_[j + 1] - edges_[j];

  std::vector<double> nodes;
  // first cell: panels graded towards 0, where Kint has a root-type singularity
  constexpr int kGrading = 40;
  double hi = edges_[1];
  for (int g = 0; g < kGrading; ++g) {
    append_gauss<10>(0.5 * hi, hi, 0, nodes, node_weight_, node_cell_);
    hi *= 0.5;
  }
  append_gauss<10>(0.0, hi, 0, nodes, node_weight_, node_cell_);
  for (std::size_t j = 1; j < cells; ++j) append_gauss<20>(edges_[j], edges_[j + 1], j, nodes, node_weight_, node_cell_);

  // Kint(t) = int_0^t Phi(s^{1/n}) ds = n int_0^{t^{1/n}} Phi(r) r^{n-1} dr
  const int n = k.dim();
  std::vector<double> ts(nodes);
  ts.insert(ts.end(), edges_.begin() + 1, edges_.end());
  std::vector<std::size_t> idx(ts.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return ts[a] < ts[b]; });
  std::vector<double> rs(ts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) rs[i] = std::pow(ts[idx[i]], 1.0 / n);
  const auto kint_sorted = bn_integral(k, rs);
  std::vector<double> kint(ts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) kint[idx[i]] = n * kint_sorted[i];

  std::vector<double> kint_edge(cells + 1, 0.0);
  for (std::size_t j = 1; j <= cells; ++j) kint_edge[j] = kint[nodes.size() + j - 1];
  cell_drop_.resize(cells);
  for (std::size_t j = 0; j < cells; ++j) cell_drop_[j] = kint_edge[j + 1] - kint_edge[j];
  coeff_.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    coeff_[i] = std::max(kint_edge[node_cell_[i] + 1] - kint[i], 0.0);
  }
}

double AdmissibilityCheck::vertex_norm(std::span<const double> eta) const {
  // suffix[j] = H at the left edge of cell j
  std::vector<double> suffix(cells_ + 1, 0.0);
  for (std::size_t j = cells_; j-- > 0;) suffix[j] = suffix[j + 1] + eta[j] / width_[j] * cell_drop_[j];
  if (std::isinf(q_)) return suffix[0];
  detail::CompensatedSum s;
  for (std::size_t i = 0; i < coeff_.size(); ++i) {
    const std::size_t j = node_cell_[i];
    const double H = eta[j] / width_[j] * coeff_[i] + suffix[j + 1];
    s += node_weight_[i] * std::pow(H, q_);
  }
  return std::pow(s.value(), 1.0 / q_);
}

double AdmissibilityCheck::operator()(std::span<const double> g_values) const {
  if (g_values.size() != cells_) throw DomainError("admissibility check: wrong number of cell values");
  std::vector<double> masses(cells_);
  for (std::size_t j = 0; j < cells_; ++j) {
    if (!(g_values[j] >= 0.0)) throw DomainError("admissibility check: negative cell value");
    masses[j] = g_values[j] * width_[j];
  }
  double best = 0.0;
  for (const auto& eta : prefix_polytope_vertices(masses)) best = std::max(best, vertex_norm(eta));
  return best;
}

OptimalNormEstimate optimal_norm_estimate(const StepFunction& fstar, const KernelSpec& k, const RISpec& E,
                                          const OptimalNormOptions& opts) {
  if (opts.budget == 0) throw DomainError("search budget must be positive");
  if (opts.cells == 0 || opts.cells > kMaxOptimalCells) throw DomainError("optimal norm search limited to 16 cells");
  if (!fstar.is_non_increasing()) throw DomainError("optimal norm search needs a non-increasing f*");
  OptimalNormEstimate est;
  if (fstar.is_zero()) return est;
  const double horizon = opts.horizon > 0.0 ? opts.horizon : fstar.support_end();
  const AdmissibilityCheck check(k, E, horizon, opts.cells);
  const std::size_t m = opts.cells;
  const DoubleStar F(fstar);
  std::vector<double> fint(m);
  const auto edges = check.edges();
  for (std::size_t j = 0; j < m; ++j) fint[j] = F.primitive(edges[j + 1]) - F.primitive(edges[j]);

  const auto gamma_of = [&](const std::vector<double>& beta) {
    std::vector<double> g(m);
    double run = 0.0;
    for (std::size_t j = m; j-- > 0;) g[j] = (run += beta[j]);
    return g;
  };
  const auto pairing = [&](const std::vector<double>& g) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += g[j] * fint[j];
    return s;
  };

  for (std::uint64_t seed : opts.seeds) {
    std::mt19937_64 rng(seed);
    std::vector<double> beta(m);
    for (double& b : beta) b = 0.05 + detail::portable_uniform(rng);
    std::size_t evals = 0;
    const auto J = [&](const std::vector<double>& b) {
      ++evals;
      const auto g = gamma_of(b);
      const double c = check(g);
      return c > 0.0 ? pairing(g) / c : 0.0;
    };
    double best = J(beta);
    double step = 0.5;
    while (evals < opts.budget && step > 1e-4) {
      bool improved = false;
      for (std::size_t j = 0; j < m && evals < opts.budget; ++j) {
        const double scale = std::accumulate(beta.begin(), beta.end(), 0.0) / static_cast<double>(m);
        for (double cand : {beta[j] * (1.0 + step), beta[j] * (1.0 - step), beta[j] + step * scale, 0.0}) {
          if (cand == beta[j] || evals >= opts.budget) continue;
          auto trial = beta;
          trial[j] = cand;
          if (std::all_of(trial.begin(), trial.end(), [](double b) { return b == 0.0; })) continue;
          const double v = J(trial);
          if (v > best) {
            best = v;
            beta = std::move(trial);
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    auto g = gamma_of(beta);
    const double c = check(g);
    if (!(c > 0.0)) continue;
    for (double& x : g) x /= c;
    AdmissibleWitness w;
    w.g = StepFunction(std::vector<double>(edges.begin() + 1, edges.end()), g, 0.0);
    w.certificate = check(g);
    w.pairing = pairing(g);
    w.seed = seed;
    est.lower = std::max(est.lower, w.pairing / w.certificate);
    est.witnesses.push_back(std::move(w));
  }
  return est;
}

double pairing_with_supremal(const StepFunction& g, const StepFunction& fstar, const KernelSpec& k) {
  if (g.tail() != 0.0) throw DomainError("pairing needs g of bounded support");
  if (g.is_zero() || fstar.is_zero()) return 0.0;
  const SupremalOperator T(fstar, k);
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  const double end = g.support_end();
  std::vector<double> cuts;
  for (double b : g.breakpoints()) cuts.push_back(b);
  for (double b : fstar.breakpoints())
    if (b < end) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  detail::CompensatedSum s;
  double a = 0.0;
  for (double b : cuts) {
    if (a >= end) break;
    const double gv = g(a);
    if (gv != 0.0) s += gv * GK::integrate([&](double t) { return T(t); }, a, b, 10, 1e-11);
    a = b;
  }
  return s.value();
}

double associate_optimal_lower(const StepFunction& gstar, const KernelSpec& k, const RISpec& E,
                               std::span<const StepFunction> corpus) {
  double best = 0.0;
  for (const auto& f : corpus) {
    if (f.is_zero()) continue;
    best = std::max(best, pairing_with_supremal(gstar, f, k) / norm(E, f));
  }
  return best;
}

double operator_norm_estimate(const KernelSpec& k, const RISpec& E, const RISpec& X,
                              std::span<const StepFunction> corpus) {
  double best = 0.0;
  for (const auto& f : corpus) {
    if (f.is_zero()) continue;
    best = std::max(best, SupremalOperator(f, k).lq_norm(X.p) / norm(E, f));
  }
  return best;
}

}  // namespace gfm
