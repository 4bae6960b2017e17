#include "geoflow/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <random>

#include "CLI11.hpp"
#include "geoflow/actions.hpp"
#include "geoflow/atlas.hpp"
#include "geoflow/integrator.hpp"
#include "geoflow/io.hpp"
#include "geoflow/sections.hpp"
#include "geoflow/verify.hpp"

namespace geoflow {

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runs body on the file at path, or on fallback when path is empty.
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(fallback);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  body(f);
  f.flush();
  if (!f) throw IoError("write to " + path + " failed");
}

double or_default(double v, double d) { return v > 0 ? v : d; }
std::size_t or_default(std::size_t v, std::size_t d) { return v > 0 ? v : d; }

std::string fiber_string(const FiberLabel& f) {
  if (f.multiplicity > 1 && f.kind != FiberKind::two_S1) return to_string(f.kind) + " x" + std::to_string(f.multiplicity);
  return to_string(f.kind);
}

struct Bounds {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  void add(double x, double y) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  SvgPlot plot(const std::string& xl, const std::string& yl) const {
    // Keep a degenerate range drawable.
    const double dx = x1 > x0 ? 0 : 1, dy = y1 > y0 ? 0 : 1;
    return SvgPlot(x0 - dx, x1 + dx, y0 - dy, y1 + dy, xl, yl);
  }
};

// ---- simulate ----------------------------------------------------------------------------------

int simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const EllipsoidSpec spec = validated_spec(cfg);
  std::mt19937_64 rng(cfg.seed);
  const PhasePoint p0 = random_point(spec, rng, cfg.h);
  IntegrateOptions opt;
  opt.tol = or_default(cfg.tol, 1e-10);
  opt.samples = cfg.samples;
  const Trajectory tr = integrate(spec, p0, or_default(cfg.t_end, 100.0), opt);
  emit(cfg.out, out, [&](std::ostream& os) { write_trajectory_csv(os, tr); });
  std::ostream& rep = cfg.out.empty() ? err : out;
  for (const auto& [label, v] : tr.drift.relative) rep << "drift " << label << ' ' << csv_number(v) << '\n';
  rep << "constraint pre-projection " << csv_number(tr.drift.max_constraint_violation) << '\n';
  rep << "constraint samples " << csv_number(tr.drift.max_sample_constraint) << '\n';
  return 0;
}

// ---- diagram -----------------------------------------------------------------------------------

struct DiagramRow {
  double u = 0, v = 0;
  std::string kind, label, type, fiber;
};

int diagram(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const EllipsoidSpec spec = validated_spec(cfg);
  const double h = cfg.h;
  const bool c22 = spec.symmetry == Case::c22;
  const bool so3 = spec.symmetry == Case::c13 || spec.symmetry == Case::c31;
  const std::size_t n = or_default(cfg.grid, std::size_t{201});
  if (n < 2) throw Error(ErrorKind::usage, "--grid must be at least 2");

  auto em_at = [&](double u, double v) {
    EMValue em;
    em.symmetry = spec.symmetry;
    em.h = h;
    if (c22) {
      em.j1 = u;
      em.j2 = v;
    } else {
      em.j = u;
      em.g = v;
    }
    return em;
  };
  auto label_at = [&](double u, double v) -> std::string {
    try {
      return fiber_string(fiber_label(spec, h, em_at(u, v)));
    } catch (const Error&) {
      return {};
    }
  };

  std::vector<DiagramRow> rows;
  std::vector<std::vector<std::pair<double, double>>> polylines;
  for (const auto& c : boundary_curves(spec, h)) {
    polylines.emplace_back();
    for (std::size_t i = 0; i < n; ++i) {
      const double u = c.j_min + (c.j_max - c.j_min) * static_cast<double>(i) / static_cast<double>(n - 1);
      const double v = c.g_at(u);
      rows.push_back({u, v, "curve", to_string(c.kind), "", label_at(u, v)});
      polylines.back().push_back({u, v});
    }
  }
  const auto marks = landmarks(spec, h);
  for (const auto& m : marks) {
    std::string type;
    try {
      type = to_string(classify_critical(spec, m.seed).type);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::invalid_spec) throw;
      type = to_string(m.type);  // the SO(3) cases are labelled by the theorem alone
    }
    rows.push_back({m.u, m.v, "landmark", m.name, type, fiber_string(m.fiber)});
  }
  // One sample point per chamber on a few vertical lines.
  if (c22) {
    const double u = 0.3 * std::sqrt(2 * h * spec.alphas[0]), v = 0.3 * std::sqrt(2 * h * spec.alphas[2]);
    for (auto [s1, s2] : {std::pair{1, 1}, {-1, 1}, {-1, -1}, {1, -1}})
      rows.push_back({s1 * u, s2 * v, "chamber", "regular", "regular", label_at(s1 * u, s2 * v)});
  } else if (!so3) {
    const auto q = boundary_curves(spec, h);
    const double jt = tangency_j(spec, h), jm = diagram_j_max(spec, h);
    for (double j : {0.0, 0.5 * jt, 0.5 * (jt + jm)}) {
      std::vector<double> g{q[0].g_at(j), q[1].g_at(j)};
      if (j <= jt) g.push_back(q[2].g_at(j));
      std::sort(g.begin(), g.end());
      for (std::size_t k = 0; k + 1 < g.size(); ++k) {
        const double mid = 0.5 * (g[k] + g[k + 1]);
        rows.push_back({j, mid, "chamber", "regular", "regular", label_at(j, mid)});
      }
    }
  } else {
    const double j = 0.5 * std::sqrt(2 * alpha_rev(spec) * h);
    rows.push_back({j, 0, "chamber", "regular", "regular", label_at(j, 0)});
  }

  emit(cfg.out, out, [&](std::ostream& os) {
    os << (c22 ? "j1,j2," : so3 ? "j," : "j,g,") << "kind,label,type,fiber\n";
    for (const auto& r : rows) {
      os << csv_number(r.u) << ',';
      if (!so3) os << csv_number(r.v) << ',';
      os << csv_field(r.kind) << ',' << csv_field(r.label) << ',' << csv_field(r.type) << ',' << csv_field(r.fiber)
         << '\n';
    }
  });
  if (!cfg.svg.empty()) {
    Bounds b;
    for (const auto& r : rows) b.add(r.u, r.v);
    SvgPlot plot = b.plot(c22 ? "j1" : "j", c22 ? "j2" : so3 ? "" : "g");
    for (const auto& pl : polylines) plot.polyline(pl, "#1f5fa8");
    for (const auto& r : rows) {
      if (r.kind == "landmark") plot.marker(r.u, r.v, "#c0392b", r.label + ": " + r.type + ", " + r.fiber);
      if (r.kind == "chamber") plot.marker(r.u, r.v, "#999999", r.fiber);
    }
    emit(cfg.svg, err, [&](std::ostream& os) { plot.write(os); });
  }
  if (!cfg.out.empty())
    for (const auto& m : marks)
      out << m.name << ": (" << csv_number(m.u) << ", " << csv_number(m.v) << ") corank " << m.corank << ' '
          << to_string(m.type) << ' ' << fiber_string(m.fiber) << '\n';
  return 0;
}

// ---- actions -----------------------------------------------------------------------------------

int actions(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const EllipsoidSpec spec = validated_spec(cfg);
  if (spec.symmetry != Case::c22) throw Error(ErrorKind::invalid_spec, "actions are implemented for c22");
  const double a1 = spec.alphas[0], a2 = spec.alphas[2], h = cfg.h;
  const auto grid = energy_surface_grid(a1, a2, h, or_default(cfg.grid, std::size_t{21}));
  emit(cfg.out, out, [&](std::ostream& os) {
    os << "j1,j2,I,I_smooth\n";
    for (std::size_t i = 0; i < grid.j1.size(); ++i)
      os << csv_number(grid.j1[i]) << ',' << csv_number(grid.j2[i]) << ',' << csv_number(grid.I[i]) << ','
         << csv_number(grid.I_shifted[i]) << '\n';
  });
  if (!cfg.mesh.empty()) emit(cfg.mesh, out, [&](std::ostream& os) { write_mesh(os, action_mesh(grid, true)); });
  if (cfg.j1 || cfg.j2) {
    std::ostream& rep = cfg.out.empty() ? err : out;
    const double j1 = cfg.j1.value_or(0), j2 = cfg.j2.value_or(0);
    rep << "I " << csv_number(action_I(a1, a2, h, j1, j2, ActionMethod::legendre)) << '\n';
    rep << "I quadrature " << csv_number(action_I(a1, a2, h, j1, j2, ActionMethod::quadrature)) << '\n';
    if (j1 != 0 && j2 != 0) {
      rep << "dI/dJ1 " << csv_number(dI_dJ(a1, a2, h, j1, j2, 1)) << '\n';
      rep << "dI/dJ2 " << csv_number(dI_dJ(a1, a2, h, j1, j2, 2)) << '\n';
    }
    const auto s = smooth_action(a1, a2, h, j1, j2);
    rep << "quadrant " << quadrant_of(j1, j2) << " smooth " << csv_number(s[0]) << ' ' << csv_number(s[1]) << ' '
        << csv_number(s[2]) << '\n';
  }
  return 0;
}

// ---- section -----------------------------------------------------------------------------------

int section(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const EllipsoidSpec spec = validated_spec(cfg);
  if (spec.symmetry != Case::c112) throw Error(ErrorKind::invalid_spec, "sections are implemented for c112");
  const std::array<double, 3> a{spec.alphas[0], spec.alphas[1], spec.alphas[2]};
  const double h = cfg.h, j = cfg.j.value_or(0.5);
  const std::size_t n = or_default(cfg.grid, std::size_t{400});
  const auto curve = analytic_section_curve(a, h, j, n);
  const Atom pre = classify_atom(curve, false), post = classify_atom(curve, true);

  std::vector<SectionPoint> pts;
  if (pre != Atom::point)
    pts = numeric_section(spec, separatrix_seeds(spec, h, j, cfg.trajectories), or_default(cfg.t_end, 20.0),
                          or_default(cfg.tol, 1e-11));
  double worst = 0;
  for (const auto& p : pts) worst = std::max(worst, distance_to_curve(curve, p.phi, p.pphi));

  emit(cfg.out, out, [&](std::ostream& os) {
    os << "phi,pphi,source\n";
    for (const auto& s : curve.samples) os << csv_number(s[0]) << ',' << csv_number(s[1]) << ",analytic\n";
    for (const auto& p : pts) os << csv_number(p.phi) << ',' << csv_number(p.pphi) << ",numeric\n";
  });
  if (!cfg.svg.empty()) {
    Bounds b;
    for (const auto& s : curve.samples) b.add(s[0], s[1]);
    SvgPlot plot = b.plot("phi", "p_phi");
    // samples hold the upper branch followed by the lower one
    const std::size_t half = curve.samples.size() / 2;
    for (std::size_t br = 0; br < 2; ++br) {
      std::vector<std::pair<double, double>> pl;
      for (std::size_t k = br * half; k < (br + 1) * half; ++k) pl.push_back({curve.samples[k][0], curve.samples[k][1]});
      plot.polyline(pl, "#1f5fa8");
    }
    for (const auto& p : pts) plot.marker(p.phi, p.pphi, "#c0392b");
    emit(cfg.svg, err, [&](std::ostream& os) { plot.write(os); });
  }
  std::ostream& rep = cfg.out.empty() ? err : out;
  rep << "atom " << to_string(pre) << " quotient " << to_string(post) << '\n';
  rep << "lobe separation " << csv_number(lobe_separation(curve)) << '\n';
  rep << "numeric points " << pts.size() << " max distance " << csv_number(worst) << '\n';
  return 0;
}

// ---- verify ------------------------------------------------------------------------------------

int verify(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const VerifyReport r = run_verification(cfg.seed);
  emit(cfg.out, out, [&](std::ostream& os) { write_report(os, r); });
  if (!cfg.out.empty()) out << (r.pass() ? "verify: ok\n" : "verify: FAILED\n");
  return r.pass() ? 0 : 1;
}

}  // namespace

std::vector<double> default_alphas(Case c) {
  switch (c) {
    case Case::generic: return {0.25, 0.5, 1, 2};
    case Case::c22: return {1, 2};
    case Case::c112:
    case Case::c211: return {1, 2, 3};
    case Case::c13:
    case Case::c31: return {1, 2};
  }
  return {};
}

EllipsoidSpec validated_spec(const RunConfig& cfg) {
  const std::vector<double> a = cfg.alphas.empty() ? default_alphas(cfg.symmetry) : cfg.alphas;
  if (a.size() != distinct_count(cfg.symmetry))
    throw Error(ErrorKind::usage, "--alphas for case " + to_string(cfg.symmetry) + " takes " +
                                      std::to_string(distinct_count(cfg.symmetry)) + " distinct values");
  return expand_spec(cfg.symmetry, a);
}

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geodesic flow on ellipsoids with symmetry: integration, diagrams, actions, sections.", "geoflow"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help and exit");  // -h would clash with --h
  RunConfig cfg;
  std::string case_name = "c22";

  auto common = [&](CLI::App* s) {
    s->add_option("--case", case_name, "symmetry case")
        ->check(CLI::IsMember({"generic", "c22", "c112", "c211", "c13", "c31"}))
        ->capture_default_str();
    s->add_option("--alphas", cfg.alphas, "distinct semi-axes squared, comma separated")->delimiter(',');
    s->add_option("--h", cfg.h, "energy")->check(CLI::PositiveNumber)->capture_default_str();
    s->add_option("--seed", cfg.seed, "seed for all random sampling")->capture_default_str();
    s->add_option("--out", cfg.out, "output file (default: standard output)");
  };

  auto* sim = app.add_subcommand("simulate", "integrate one random trajectory, write CSV and a drift report");
  common(sim);
  sim->add_option("--tol", cfg.tol, "integrator tolerance (default 1e-10)")->check(CLI::PositiveNumber);
  sim->add_option("--t-end", cfg.t_end, "final time (default 100)")->check(CLI::PositiveNumber);
  sim->add_option("--samples", cfg.samples, "stored samples")->check(CLI::Range(2, 10000000))->capture_default_str();

  auto* dia = app.add_subcommand("diagram", "boundary curves, landmarks and fiber labels of the diagram");
  common(dia);
  dia->add_option("--grid", cfg.grid, "samples per curve (default 201)");
  dia->add_option("--svg", cfg.svg, "SVG output file");

  auto* act = app.add_subcommand("actions", "c22 action grid and the smoothed surface mesh");
  common(act);
  act->add_option("--grid", cfg.grid, "grid points per direction (default 21)");
  act->add_option("--mesh", cfg.mesh, "mesh output file for I + |J1| + |J2|");
  act->add_option("--j1", cfg.j1, "evaluate the action at this J1 as well");
  act->add_option("--j2", cfg.j2, "evaluate the action at this J2 as well");

  auto* sec = app.add_subcommand("section", "c112 Poincare section of the separatrix at momentum j");
  common(sec);
  sec->add_option("--j", cfg.j, "angular momentum on curve B (default 0.5)");
  sec->add_option("--grid", cfg.grid, "analytic samples per branch (default 400)");
  sec->add_option("--tol", cfg.tol, "integrator tolerance (default 1e-11)")->check(CLI::PositiveNumber);
  sec->add_option("--t-end", cfg.t_end, "integration time per trajectory (default 20)")->check(CLI::PositiveNumber);
  sec->add_option("--trajectories", cfg.trajectories, "number of separatrix seeds")
      ->check(CLI::Range(1, 100000))
      ->capture_default_str();
  sec->add_option("--svg", cfg.svg, "SVG output file");

  auto* ver = app.add_subcommand("verify", "run the identity and property suite");
  ver->add_option("--seed", cfg.seed, "seed for all random sampling")->capture_default_str();
  ver->add_option("--out", cfg.out, "report file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.symmetry = parse_case(case_name);
    if (sim->parsed()) return simulate(cfg, out, err);
    if (dia->parsed()) return diagram(cfg, out, err);
    if (act->parsed()) return actions(cfg, out, err);
    if (sec->parsed()) return section(cfg, out, err);
    return verify(cfg, out, err);
  } catch (const Error& e) {
    err << "geoflow: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "geoflow: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace geoflow
