#include "gfm/cones.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "gfm/errors.hpp"
#include "gfm/rearrange.hpp"

namespace gfm {

std::string to_string(ConeId id) {
  switch (id) {
    case ConeId::K1: return "K1";
    case ConeId::K2: return "K2";
    case ConeId::K3: return "K3";
    case ConeId::K4: return "K4";
    default: return "M_riesz";
  }
}

ConeId parse_cone_id(std::string_view text) {
  if (text == "K1") return ConeId::K1;
  if (text == "K2") return ConeId::K2;
  if (text == "K3") return ConeId::K3;
  if (text == "K4") return ConeId::K4;
  if (text == "M_riesz" || text == "M") return ConeId::M_riesz;
  throw DomainError("unsupported cone id '" + std::string(text) + "'");
}

ConeElement::ConeElement(ConeId id, Representation h, double functional_bound, std::string generator)
    : id_(id), h_(std::move(h)), bound_(functional_bound), generator_(std::move(generator)) {
  if (!(functional_bound >= 0.0)) throw DomainError("functional bound must be non-negative");
}

double ConeElement::operator()(double t) const {
  if (!(t > 0.0)) throw DomainError("cone elements are evaluated at t > 0");
  return std::visit([t](const auto& h) { return h(t); }, h_);
}

ConeElement build_cone_element(const GridFunction& f, const KernelSpec& k, const RISpec& E, ConeId id,
                               const ConeBuildOptions& opts) {
  const double bound = norm(E, f);
  if (f.is_zero()) return ConeElement(id, StepFunction(), 0.0, opts.generator);
  switch (id) {
    case ConeId::K1:
      return ConeElement(id, rearrangement(maximal_function(f, k, opts.maximal).field), bound, opts.generator);
    case ConeId::K2:
      return ConeElement(id, DoubleStar(rearrangement(maximal_function(f, k, opts.maximal).field)), bound,
                         opts.generator);
    case ConeId::K3:
      return ConeElement(id, SupremalOperator(rearrangement(f), k), bound, opts.generator);
    case ConeId::K4:
      return ConeElement(id, K4Functional(rearrangement(f), k), bound, opts.generator);
    case ConeId::M_riesz:
      return ConeElement(id, rearrangement(riesz_potential(f, k)), bound, opts.generator);
  }
  throw DomainError("unsupported cone id");
}

std::vector<double> TGridSpec::points(const GridGeometry& g) const {
  const double base = g.inscribed_ball_measure();
  auto pts = GeometricGrid{lo_factor * base, hi_factor * base, points_per_decade}.points();
  // grid fields vanish from the box measure on
  std::erase_if(pts, [&](double t) { return t >= g.box_measure(); });
  return pts;
}

CoveringReport check_covering(const ConeElement& src, const ConeElement& dst, std::span<const double> tgrid,
                              CoveringMode mode, double cap, double bound) {
  if (tgrid.empty()) throw DomainError("covering check needs a non-empty t-grid");
  CoveringReport r;
  for (double t : tgrid) {
    if (!(t > 0.0)) throw DomainError("covering check: t-grid must be positive");
    const double s = src(t), d = dst(t);
    if (s == 0.0 && d == 0.0) continue;
    ++r.points_used;
    r.C_point = std::max(r.C_point, d == 0.0 ? kInf : s / d);
  }
  if (src.functional_bound() == 0.0) {
    r.C0 = dst.functional_bound() == 0.0 ? 0.0 : kInf;
  } else {
    r.C0 = dst.functional_bound() / src.functional_bound();
  }
  const double limit = mode == CoveringMode::pointwise_dominate ? 1.0 : std::min(cap, bound);
  r.pass = r.C_point <= limit && r.C0 <= cap;
  return r;
}

namespace {

struct CoveringDirection {
  std::string name;
  bool needs_Bn;
  bool needs_D;
  bool needs_supremal;  // T requires a kernel on (0, inf)
  CoveringMode mode;
  double bound;  // exact bound; inf: finite and refinement-stable
};

std::vector<CoveringDirection> directions() {
  return {
      {"K1<K2", true, false, false, CoveringMode::pointwise_dominate, 1.0},
      {"K2<K3", true, false, true, CoveringMode::dominate_with_constant, kInf},
      {"K3<K1", true, false, true, CoveringMode::dominate_with_constant, kInf},
      {"K4<K3", true, false, true, CoveringMode::dominate_with_constant, 2.0},
      {"K3<K4", false, true, true, CoveringMode::dominate_with_constant, kInf},
      {"K1<M_riesz", false, false, false, CoveringMode::pointwise_dominate, 1.0},
  };
}

std::string unmet_hypothesis(const CoveringDirection& d, const KernelSpec& k, const ClassReport& c) {
  if (!c.member_An) return "hypothesis not met: Phi not in A_n";
  if (d.needs_Bn && !c.member_Bn) return "hypothesis not met: Phi not in B_n";
  if (d.needs_D && !c.member_D) return "hypothesis not met: Phi not in D";
  if (d.needs_supremal && std::isfinite(k.right_endpoint())) return "hypothesis not met: kernel domain bounded";
  return {};
}

}  // namespace

VerificationReport equivalence_suite(std::span<const Generator> corpus, const KernelSpec& k, const RISpec& E,
                                     const ClassReport& classes, const EquivalenceOptions& opts) {
  VerificationReport rep;
  if (corpus.empty()) return rep;
  const std::string label = opts.kernel_label.empty() ? k.describe() : opts.kernel_label;
  const int n = k.dim();

  std::vector<CoveringDirection> active;
  for (const auto& d : directions()) {
    if (d.name == "K1<M_riesz" && opts.riesz_max_m <= 0) continue;
    const auto why = unmet_hypothesis(d, k, classes);
    if (!why.empty()) {
      rep.add({"cones", label, "", 0, "direction[" + d.name + "]", NAN, NAN, Status::skipped, why});
    } else {
      active.push_back(d);
    }
  }
  if (active.empty()) return rep;
  const auto wants = [&](const char* name) {
    return std::any_of(active.begin(), active.end(), [&](const CoveringDirection& d) { return d.name == name; });
  };

  for (const auto& gen : corpus) {
    std::map<std::string, std::vector<std::pair<int, double>>> constants;
    for (int m : opts.grid_sizes) {
      const GridGeometry geom{n, opts.half_width, m};
      const GridFunction f = gen.sample(geom);
      const auto tgrid = opts.tgrid.points(geom);
      ConeBuildOptions bo;
      bo.maximal = opts.fast_path.choose(n, m);
      bo.generator = gen.id;
      const double bound = norm(E, f);
      const StepFunction fstar = rearrangement(f);

      const auto mstar = [&](const GridFunction& g, const std::string& key) {
        if (opts.maximal_star) return opts.maximal_star(g, bo.maximal, key);
        return rearrangement(maximal_function(g, k, bo.maximal).field);
      };
      const std::string key = gen.id + "@" + std::to_string(m);
      std::optional<ConeElement> K1, K2, K3, K4, K1rad, Mr;
      if (wants("K1<K2") || wants("K2<K3") || wants("K1<M_riesz")) {
        const auto mf = mstar(f, key);
        K1.emplace(ConeId::K1, mf, bound, gen.id);
        K2.emplace(ConeId::K2, DoubleStar(mf), bound, gen.id);
      }
      if (wants("K2<K3") || wants("K3<K1") || wants("K4<K3") || wants("K3<K4")) {
        K3.emplace(ConeId::K3, SupremalOperator(fstar, k), bound, gen.id);
        K4.emplace(ConeId::K4, K4Functional(fstar, k), bound, gen.id);
      }
      if (wants("K3<K1")) {
        const GridFunction frad = synthesize_radial(fstar, geom);
        K1rad.emplace(ConeId::K1, mstar(frad, key + "#radial"), norm(E, frad), gen.id);
      }
      if (wants("K1<M_riesz") && m <= opts.riesz_max_m) {
        Mr.emplace(build_cone_element(f, k, E, ConeId::M_riesz, bo));
      }

      for (const auto& d : active) {
        const ConeElement* src = nullptr;
        const ConeElement* dst = nullptr;
        if (d.name == "K1<K2") src = &*K1, dst = &*K2;
        else if (d.name == "K2<K3") src = &*K2, dst = &*K3;
        else if (d.name == "K3<K1") src = &*K3, dst = &*K1rad;
        else if (d.name == "K4<K3") src = &*K4, dst = &*K3;
        else if (d.name == "K3<K4") src = &*K3, dst = &*K4;
        else if (d.name == "K1<M_riesz") {
          if (!Mr) continue;
          src = &*K1, dst = &*Mr;
        }
        const bool exact = std::isfinite(d.bound);
        std::vector<double> resolved;
        if (!exact)
          for (double t : tgrid)
            if (t >= opts.resolved_t_min) resolved.push_back(t);
        const auto cov = check_covering(*src, *dst, exact ? tgrid : resolved, d.mode, opts.cap, d.bound);
        rep.add({"cones", label, gen.id, m, "C_point[" + d.name + "]", NAN, cov.C_point,
                 exact ? (cov.pass ? Status::pass : Status::fail) : Status::info,
                 exact ? "bound " + std::to_string(static_cast<int>(d.bound)) : ""});
        rep.add({"cones", label, gen.id, m, "C0[" + d.name + "]", NAN, cov.C0,
                 cov.C0 <= opts.cap ? Status::info : Status::fail, ""});
        constants[d.name].emplace_back(m, cov.C_point);
      }
    }
    for (const auto& d : active) {
      const auto& cs = constants[d.name];
      if (std::isfinite(d.bound) || cs.size() < 2) continue;
      const double prev = cs[cs.size() - 2].second, last = cs.back().second;
      const bool finite = std::all_of(cs.begin(), cs.end(), [&](const auto& c) {
        return std::isfinite(c.second) && c.second <= opts.cap;
      });
      const double change = prev > 0.0 ? std::abs(last - prev) / prev : (last == 0.0 ? 0.0 : kInf);
      rep.add({"cones", label, gen.id, cs.back().first, "stability[" + d.name + "]", NAN, change,
               finite && change < opts.stability_tol ? Status::pass : Status::fail,
               finite ? "" : "constant exceeds cap"});
    }
  }
  return rep;
}

}  // namespace gfm
