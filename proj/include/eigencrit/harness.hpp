#ifndef EIGENCRIT_HARNESS_HPP
#define EIGENCRIT_HARNESS_HPP

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "eigencrit/verify.hpp"

// Configuration-driven experiment runner. A config names domain families,
// sweep lists for N and h, the target mode, and analysis toggles; the runner
// executes every (domain, N, h) cell, captures per-cell errors as data, and
// serializes the whole bundle to deterministic JSON.

namespace eigencrit {

using json = nlohmann::ordered_json;

constexpr const char* kToolkitVersion = "1.0.0";

struct AnalysisToggles {
  bool critical_points = true;
  bool nodal = true;
  bool degree = false;
  bool strip = false;
  bool fit = false;
  int directional_thetas = 0;  // 0 disables the directional sweep
};

struct ExperimentConfig {
  std::vector<DomainSpec> domains;  // per-family templates; N comes from the sweep
  std::vector<double> Ns;
  std::vector<double> hs;
  int m = 2;
  AnalysisToggles analyses;
  std::string out_dir = "out";
  int threads = 0;  // 0: EIGENCRIT_THREADS or hardware concurrency
};

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

namespace detail {

inline bool supported_h(double h) {
  for (int k = 4; k <= 8; ++k)
    if (std::abs(h - std::ldexp(1.0, -k)) < 1e-15) return true;
  return false;
}

inline CapFunction cap_from_json(const json& j) {
  CapFunction phi;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "zero") {
    phi.kind = CapFunction::Kind::Zero;
  } else if (kind == "parabolic") {
    phi.kind = CapFunction::Kind::Parabolic;
    phi.c = j.at("c").get<double>();
  } else if (kind == "tent") {
    phi.kind = CapFunction::Kind::Tent;
    phi.c = j.at("c").get<double>();
  } else if (kind == "samples") {
    phi.kind = CapFunction::Kind::Samples;
    for (const auto& p : j.at("samples"))
      phi.samples.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  } else {
    throw Error("unknown cap kind: " + kind);
  }
  return phi;
}

inline json cap_to_json(const CapFunction& phi) {
  json j;
  switch (phi.kind) {
    case CapFunction::Kind::Zero: j["kind"] = "zero"; break;
    case CapFunction::Kind::Parabolic: j["kind"] = "parabolic"; j["c"] = phi.c; break;
    case CapFunction::Kind::Tent: j["kind"] = "tent"; j["c"] = phi.c; break;
    case CapFunction::Kind::Samples: {
      j["kind"] = "samples";
      json s = json::array();
      for (const auto& p : phi.samples) s.push_back({p.x, p.y});
      j["samples"] = s;
      break;
    }
  }
  return j;
}

inline DomainSpec spec_for(const DomainSpec& tmpl, double N) {
  DomainSpec s = tmpl;
  s.N = N;
  if (s.family == Family::Ellipse && s.axis_x <= 0.0) s.axis_x = 0.5 * N;
  return s;
}

}  // namespace detail

inline ExperimentConfig parse_config(const json& j) {
  ExperimentConfig cfg;
  for (const auto& d : j.at("domains")) {
    DomainSpec s;
    s.family = family_from_name(d.at("family").get<std::string>());
    if (s.family == Family::CustomHeightFunctions)
      throw Error("custom domains need programmatic boundary functions");
    if (d.contains("phi")) s.phi = detail::cap_from_json(d.at("phi"));
    if (d.contains("axis_x")) s.axis_x = d.at("axis_x").get<double>();
    cfg.domains.push_back(std::move(s));
  }
  if (cfg.domains.empty()) throw Error("config: no domains");
  cfg.Ns = j.at("N").get<std::vector<double>>();
  cfg.hs = j.at("h").get<std::vector<double>>();
  for (double h : cfg.hs)
    if (!detail::supported_h(h))
      throw Error("config: h must be 2^-k for k in 4..8");
  if (j.contains("m")) cfg.m = j.at("m").get<int>();
  if (j.contains("analyses")) {
    const auto& a = j.at("analyses");
    cfg.analyses.critical_points = a.value("critical_points", true);
    cfg.analyses.nodal = a.value("nodal", true);
    cfg.analyses.degree = a.value("degree", false);
    cfg.analyses.strip = a.value("strip", false);
    cfg.analyses.fit = a.value("fit", false);
    cfg.analyses.directional_thetas = a.value("directional_thetas", 0);
  }
  if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
  return cfg;
}

/// Canonical JSON form of a config; the config hash is the FNV-1a hash of its
/// dump, so it changes exactly when a semantically relevant field changes.
inline json config_to_json(const ExperimentConfig& cfg) {
  json j;
  json ds = json::array();
  for (const auto& s : cfg.domains) {
    json d;
    d["family"] = family_name(s.family);
    if (s.family == Family::PerturbedRectangle)
      d["phi"] = detail::cap_to_json(s.phi);
    if (s.family == Family::Ellipse && s.axis_x > 0.0) d["axis_x"] = s.axis_x;
    ds.push_back(d);
  }
  j["domains"] = ds;
  j["N"] = cfg.Ns;
  j["h"] = cfg.hs;
  j["m"] = cfg.m;
  j["analyses"] = {{"critical_points", cfg.analyses.critical_points},
                   {"nodal", cfg.analyses.nodal},
                   {"degree", cfg.analyses.degree},
                   {"strip", cfg.analyses.strip},
                   {"fit", cfg.analyses.fit},
                   {"directional_thetas", cfg.analyses.directional_thetas}};
  return j;
}

inline std::uint64_t config_hash(const ExperimentConfig& cfg) {
  return fnv1a(config_to_json(cfg).dump());
}

// ---------------------------------------------------------------------------
// Result bundle
// ---------------------------------------------------------------------------

struct RunRecord {
  std::string family;
  double N = 0, h = 0;
  int m = 0;
  bool ok = false;
  std::string error;

  std::vector<double> lambdas;
  std::vector<double> residuals;
  double L = 0, center_x = 0;
  std::vector<CriticalPoint> crit;
  double nodal_width = 0;
  int n_curves = 0;
  std::vector<Pt> main_curve;
  int deg_right = 0, deg_left = 0;
  bool deg_computed = false;
  double A0 = 0, sup0 = 0, sup1 = 0, sup2 = 0;
  bool strip_computed = false;
  std::vector<std::pair<double, int>> directional;  // theta -> crossing count
};

struct FitRecord {
  std::string family;
  double a_hat = 0;
  bool boundary_hit = false;
  double rms = 0;
};

struct ResultBundle {
  std::string version = kToolkitVersion;
  std::uint64_t hash = 0;
  json config;
  std::vector<RunRecord> records;
  std::vector<FitRecord> fits;
  std::vector<double> wall_seconds;  // per record; kept out of results.json
};

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

namespace detail {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("EIGENCRIT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? int(hw) : 1;
}

inline RunRecord run_cell(const DomainSpec& spec, double N, double h, int m,
                          const AnalysisToggles& an) {
  RunRecord rec;
  rec.family = family_name(spec.family);
  rec.N = N;
  rec.h = h;
  rec.m = m;
  try {
    const PipelineRun run = run_pipeline(detail::spec_for(spec, N), h, m);
    for (const auto& mode : run.modes) {
      rec.lambdas.push_back(mode.lambda);
      rec.residuals.push_back(mode.residual);
    }
    rec.L = run.L.L;
    rec.center_x = run.center_x;
    if (an.critical_points)
      rec.crit = find_critical_points(run.field, *run.domain).points;
    if (an.nodal) {
      rec.n_curves = int(run.curves.size());
      if (!run.curves.empty()) {
        rec.nodal_width = run.curves.front().width();
        rec.main_curve = run.curves.front().pts;
      }
    }
    if (an.degree) {
      rec.deg_right = region_degree_T(run.field, *run.domain, Side::Right,
                                      run.center_x, 4 * h).winding;
      rec.deg_left = region_degree_T(run.field, *run.domain, Side::Left,
                                     run.center_x, 4 * h).winding;
      rec.deg_computed = true;
    }
    if (an.strip) {
      const double k = std::min(2.0, 0.25 * N);
      const A0Estimate a0 = estimate_A0(run.field, *run.domain, run.center_x, k);
      const WindowError we =
          sup_error_window(run.field, *run.domain, a0.A0, run.center_x, k);
      rec.A0 = a0.A0;
      rec.sup0 = we.order0;
      rec.sup1 = we.order1;
      rec.sup2 = we.order2;
      rec.strip_computed = true;
    }
    for (int t = 0; t < an.directional_thetas; ++t) {
      const double theta = t * kPi / an.directional_thetas;
      const ScalarField df = directional_field(run.field, theta, run.grid);
      const Grid& g = run.grid;
      auto curves = extract_level_curves(
          df, 0.0, [&g](int i, int j) { return g.is_interior(i, j); });
      int long_curves = 0;
      for (const auto& c : curves)
        if (c.length() > 4 * h) ++long_curves;
      rec.directional.push_back({theta, long_curves});
    }
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  return rec;
}

}  // namespace detail

inline ResultBundle run_experiment(const ExperimentConfig& cfg) {
  ResultBundle bundle;
  bundle.config = config_to_json(cfg);
  bundle.hash = config_hash(cfg);

  struct Cell { const DomainSpec* spec; double N, h; };
  std::vector<Cell> cells;
  for (const auto& d : cfg.domains)
    for (double N : cfg.Ns)
      for (double h : cfg.hs) cells.push_back({&d, N, h});

  bundle.records.resize(cells.size());
  bundle.wall_seconds.resize(cells.size());
  const int nthreads = std::min<int>(detail::resolve_threads(cfg.threads),
                                     std::max<std::size_t>(cells.size(), 1));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const auto t0 = std::chrono::steady_clock::now();
      bundle.records[i] = detail::run_cell(*cells[i].spec, cells[i].N,
                                           cells[i].h, cfg.m, cfg.analyses);
      bundle.wall_seconds[i] = std::chrono::duration<double>(
          std::chrono::steady_clock::now() - t0).count();
    }
  };
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // per-family expansion fit over the sweep, when enough cells survived
  if (cfg.analyses.fit) {
    for (const auto& d : cfg.domains) {
      std::vector<EigenTableEntry> table;
      for (const auto& rec : bundle.records) {
        if (!rec.ok || rec.family != family_name(d.family)) continue;
        for (int m = 1; m <= int(rec.lambdas.size()); ++m)
          table.push_back({m, rec.N,
                           dispersion_corrected(rec.lambdas[m - 1], rec.h)});
      }
      if (table.size() < 3) continue;
      const double max_phi = std::max(d.phi.max_value(), 1.0);
      const AsymptoticFit fit = fit_a(table, max_phi);
      double ss = 0.0;
      for (double r : fit.residuals) ss += r * r;
      bundle.fits.push_back({std::string(family_name(d.family)), fit.a,
                             fit.boundary_hit,
                             std::sqrt(ss / double(fit.residuals.size()))});
    }
  }
  return bundle;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline json bundle_to_json(const ResultBundle& b) {
  json j;
  j["version"] = b.version;
  j["config_hash"] = b.hash;
  j["config"] = b.config;
  json recs = json::array();
  for (const auto& r : b.records) {
    json jr;
    jr["family"] = r.family;
    jr["N"] = r.N;
    jr["h"] = r.h;
    jr["m"] = r.m;
    jr["ok"] = r.ok;
    jr["config_hash"] = b.hash;
    if (!r.ok) {
      jr["error"] = r.error;
      recs.push_back(jr);
      continue;
    }
    jr["lambdas"] = r.lambdas;
    jr["residuals"] = r.residuals;
    jr["L"] = r.L;
    jr["center_x"] = r.center_x;
    json cps = json::array();
    for (const auto& c : r.crit)
      cps.push_back({{"x", c.p.x}, {"y", c.p.y},
                     {"kind", crit_kind_name(c.kind)}, {"index", c.index}});
    jr["critical_points"] = cps;
    jr["n_curves"] = r.n_curves;
    jr["nodal_width"] = r.nodal_width;
    json poly = json::array();
    for (const auto& p : r.main_curve) poly.push_back({p.x, p.y});
    jr["main_curve"] = poly;
    if (r.deg_computed) {
      jr["deg_right"] = r.deg_right;
      jr["deg_left"] = r.deg_left;
    }
    if (r.strip_computed) {
      jr["A0"] = r.A0;
      jr["sup_window"] = {r.sup0, r.sup1, r.sup2};
    }
    if (!r.directional.empty()) {
      json dir = json::array();
      for (const auto& [theta, count] : r.directional)
        dir.push_back({{"theta", theta}, {"curves", count}});
      jr["directional"] = dir;
    }
    recs.push_back(jr);
  }
  j["records"] = recs;
  json fits = json::array();
  for (const auto& f : b.fits)
    fits.push_back({{"family", f.family}, {"a_hat", f.a_hat},
                    {"boundary_hit", f.boundary_hit}, {"rms", f.rms}});
  j["fits"] = fits;
  return j;
}

inline ResultBundle bundle_from_json(const json& j) {
  ResultBundle b;
  b.version = j.at("version").get<std::string>();
  b.hash = j.at("config_hash").get<std::uint64_t>();
  b.config = j.at("config");
  for (const auto& jr : j.at("records")) {
    RunRecord r;
    r.family = jr.at("family").get<std::string>();
    r.N = jr.at("N").get<double>();
    r.h = jr.at("h").get<double>();
    r.m = jr.at("m").get<int>();
    r.ok = jr.at("ok").get<bool>();
    if (!r.ok) {
      r.error = jr.at("error").get<std::string>();
      b.records.push_back(std::move(r));
      continue;
    }
    r.lambdas = jr.at("lambdas").get<std::vector<double>>();
    r.residuals = jr.at("residuals").get<std::vector<double>>();
    r.L = jr.at("L").get<double>();
    r.center_x = jr.at("center_x").get<double>();
    for (const auto& c : jr.at("critical_points")) {
      CriticalPoint cp;
      cp.p = {c.at("x").get<double>(), c.at("y").get<double>()};
      cp.index = c.at("index").get<int>();
      const std::string kind = c.at("kind").get<std::string>();
      cp.kind = kind == "max"   ? CritKind::Max
                : kind == "min" ? CritKind::Min
                : kind == "saddle" ? CritKind::Saddle : CritKind::Degenerate;
      r.crit.push_back(cp);
    }
    r.n_curves = jr.at("n_curves").get<int>();
    r.nodal_width = jr.at("nodal_width").get<double>();
    for (const auto& p : jr.at("main_curve"))
      r.main_curve.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    if (jr.contains("deg_right")) {
      r.deg_right = jr.at("deg_right").get<int>();
      r.deg_left = jr.at("deg_left").get<int>();
      r.deg_computed = true;
    }
    if (jr.contains("A0")) {
      r.A0 = jr.at("A0").get<double>();
      const auto sup = jr.at("sup_window").get<std::vector<double>>();
      r.sup0 = sup.at(0); r.sup1 = sup.at(1); r.sup2 = sup.at(2);
      r.strip_computed = true;
    }
    if (jr.contains("directional"))
      for (const auto& d : jr.at("directional"))
        r.directional.push_back(
            {d.at("theta").get<double>(), d.at("curves").get<int>()});
    b.records.push_back(std::move(r));
  }
  for (const auto& f : j.at("fits"))
    b.fits.push_back({f.at("family").get<std::string>(),
                      f.at("a_hat").get<double>(),
                      f.at("boundary_hit").get<bool>(),
                      f.at("rms").get<double>()});
  return b;
}

// ---------------------------------------------------------------------------
// Report emission
// ---------------------------------------------------------------------------

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  out.precision(17);
  return out;
}

}  // namespace detail

/// Writes results.json (and timings.json); with csv also the fixed-column
/// per-table files and one polyline file per record's main nodal curve.
inline void emit_report(const ResultBundle& b, const std::string& dir,
                        const std::string& format = "json") {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path root(dir);

  {
    auto out = detail::open_out(root / "results.json");
    out << bundle_to_json(b).dump(2) << "\n";
  }
  {
    // wall-clock times live outside results.json so reruns stay byte-identical
    json t;
    t["wall_seconds"] = b.wall_seconds;
    auto out = detail::open_out(root / "timings.json");
    out << t.dump(2) << "\n";
  }
  if (format != "csv") return;

  auto eig = detail::open_out(root / "eigenvalues.csv");
  eig << "family,N,h,m,lambda,residual\n";
  auto cps = detail::open_out(root / "critical_points.csv");
  cps << "family,N,h,x,y,kind,index\n";
  auto nod = detail::open_out(root / "nodal.csv");
  nod << "family,N,h,n_curves,width,center_x\n";
  auto deg = detail::open_out(root / "degree.csv");
  deg << "family,N,h,deg_right,deg_left\n";
  auto fit = detail::open_out(root / "fit.csv");
  fit << "family,a_hat,boundary_hit,rms\n";

  int rec_id = 0;
  for (const auto& r : b.records) {
    ++rec_id;
    if (!r.ok) continue;
    for (std::size_t i = 0; i < r.lambdas.size(); ++i)
      eig << r.family << "," << r.N << "," << r.h << "," << (i + 1) << ","
          << r.lambdas[i] << "," << r.residuals[i] << "\n";
    for (const auto& c : r.crit)
      cps << r.family << "," << r.N << "," << r.h << "," << c.p.x << ","
          << c.p.y << "," << crit_kind_name(c.kind) << "," << c.index << "\n";
    nod << r.family << "," << r.N << "," << r.h << "," << r.n_curves << ","
        << r.nodal_width << "," << r.center_x << "\n";
    if (r.deg_computed)
      deg << r.family << "," << r.N << "," << r.h << "," << r.deg_right << ","
          << r.deg_left << "\n";
    if (!r.main_curve.empty()) {
      auto poly = detail::open_out(
          root / ("contour_" + std::to_string(rec_id) + ".csv"));
      poly << "x,y\n";
      for (const auto& p : r.main_curve) poly << p.x << "," << p.y << "\n";
    }
  }
  for (const auto& f : b.fits)
    fit << f.family << "," << f.a_hat << "," << (f.boundary_hit ? 1 : 0) << ","
        << f.rms << "\n";
}

}  // namespace eigencrit

#endif  // EIGENCRIT_HARNESS_HPP
