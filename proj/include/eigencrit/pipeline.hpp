#ifndef EIGENCRIT_PIPELINE_HPP
#define EIGENCRIT_PIPELINE_HPP

#include <map>
#include <memory>
#include <sstream>

#include "eigencrit/asymptotics.hpp"
#include "eigencrit/critical_points.hpp"
#include "eigencrit/degree.hpp"
#include "eigencrit/eigensolver.hpp"

namespace eigencrit {

/// One solved configuration: domain, grid, low spectrum, and the normalized
/// target mode with its interpolant and nodal curves.
struct PipelineRun {
  std::shared_ptr<const NormalizedDomain> domain;
  Grid grid;
  std::vector<EigenMode> modes;      // lowest modes, ascending
  NormalizedMode nmode;              // normalized target mode
  ScalarField field;                 // interpolant of nmode.values
  std::vector<NodalCurve> curves;    // zero set of the target mode
  double center_x = 0.0;             // mean abscissa of the main nodal curve
  LengthScale L;

  const EigenMode& mode(int m) const { return modes.at(std::size_t(m) - 1); }
};

inline double nodal_mean_x(const NodalCurve& c) {
  double s = 0.0;
  for (const auto& p : c.pts) s += p.x;
  return c.pts.empty() ? 0.0 : s / double(c.pts.size());
}

/// Solve and analyze one (domain, h, mode) cell.
inline PipelineRun run_pipeline(const DomainSpec& spec, double h,
                                int target_mode, double tol = 1e-10) {
  PipelineRun run;
  run.domain = std::make_shared<NormalizedDomain>(make_family(spec));
  run.grid = build_grid(run.domain, h);
  const SparseOperator op = assemble_dirichlet_laplacian(run.grid);
  run.modes = solve_lowest(op, run.grid, target_mode, tol);
  run.L = compute_L(*run.domain);
  run.nmode = normalize_mode(run.mode(target_mode), run.grid, *run.domain);
  run.field = ScalarField(run.grid, run.nmode.values);
  run.curves = nodal_curves(run.field, run.grid, *run.domain);
  run.center_x = run.curves.empty() ? 0.5 * (run.domain->a() + run.domain->b())
                                    : nodal_mean_x(run.curves.front());
  return run;
}

/// Memoizing wrapper; acceptance criteria share a handful of expensive
/// eigensolves.
class PipelineCache {
 public:
  const PipelineRun& get(const DomainSpec& spec, double h, int target_mode,
                         double tol = 1e-10) {
    std::ostringstream key;
    key << family_name(spec.family) << "|N=" << spec.N << "|ax=" << spec.axis_x
        << "|phi=" << int(spec.phi.kind) << "," << spec.phi.c << "|h=" << h
        << "|m=" << target_mode << "|tol=" << tol;
    auto it = cache_.find(key.str());
    if (it == cache_.end())
      it = cache_.emplace(key.str(),
                          std::make_shared<PipelineRun>(
                              run_pipeline(spec, h, target_mode, tol)))
               .first;
    return *it->second;
  }

 private:
  std::map<std::string, std::shared_ptr<PipelineRun>> cache_;
};

inline DomainSpec ellipse_spec(double N) {
  DomainSpec s;
  s.family = Family::Ellipse;
  s.N = N;
  s.axis_x = 0.5 * N;
  s.axis_y = 0.5;
  return s;
}

inline DomainSpec stadium_spec(double N) {
  DomainSpec s;
  s.family = Family::Stadium;
  s.N = N;
  return s;
}

inline DomainSpec rectangle_spec(double N) {
  DomainSpec s;
  s.family = Family::Rectangle;
  s.N = N;
  return s;
}

inline DomainSpec perturbed_spec(double N, CapFunction phi) {
  DomainSpec s;
  s.family = Family::PerturbedRectangle;
  s.N = N;
  s.phi = std::move(phi);
  return s;
}

// ---------------------------------------------------------------------------
// Boundary saddle check (Remark-3.5 style): one-sided Hessian at the nodal
// line's boundary contacts, linearly extrapolated along the inward normal
// where centered stencils are unavailable.
// ---------------------------------------------------------------------------

struct BoundarySaddle {
  Pt contact;
  double uxx = 0, uxy = 0, uyy = 0;
  double det = 0.0;
};

struct BoundarySaddleReport {
  std::vector<BoundarySaddle> saddles;   // one per contact
  bool all_saddle = false;               // det < 0 at every contact
  bool uxy_opposite = false;             // signs at the two contacts differ
};

inline BoundarySaddleReport boundary_saddle_check(const ScalarField& f,
                                                  const NormalizedDomain& dom,
                                                  const NodalCurve& curve) {
  if (curve.boundary_contacts.size() != 2)
    throw Error("boundary_saddle_check: curve must have two boundary contacts");
  BoundarySaddleReport rep;
  const double delta = 2.0 * f.h();
  for (const Pt& q : curve.boundary_contacts) {
    // inward normal from the height functions
    const double eps = 1e-4;
    double nxv, nyv;
    const bool bottom = std::abs(q.y - dom.f1(q.x)) < std::abs(q.y - dom.f2(q.x));
    if (bottom) {
      const double slope = (dom.f1(q.x + eps) - dom.f1(q.x - eps)) / (2 * eps);
      nxv = -slope; nyv = 1.0;
    } else {
      const double slope = (dom.f2(q.x + eps) - dom.f2(q.x - eps)) / (2 * eps);
      nxv = slope; nyv = -1.0;
    }
    const double nn = std::hypot(nxv, nyv);
    nxv /= nn; nyv /= nn;
    const Jet2 j1 = f.jet(q.x + delta * nxv, q.y + delta * nyv);
    const Jet2 j2 = f.jet(q.x + 2 * delta * nxv, q.y + 2 * delta * nyv);
    BoundarySaddle s;
    s.contact = q;
    s.uxx = 2 * j1.gxx - j2.gxx;
    s.uxy = 2 * j1.gxy - j2.gxy;
    s.uyy = 2 * j1.gyy - j2.gyy;
    s.det = s.uxx * s.uyy - s.uxy * s.uxy;
    rep.saddles.push_back(s);
  }
  rep.all_saddle = rep.saddles[0].det < 0.0 && rep.saddles[1].det < 0.0;
  rep.uxy_opposite = rep.saddles[0].uxy * rep.saddles[1].uxy < 0.0;
  return rep;
}

}  // namespace eigencrit

#endif  // EIGENCRIT_PIPELINE_HPP
