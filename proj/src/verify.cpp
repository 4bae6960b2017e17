#include "geoflow/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <random>

#include <boost/math/tools/minima.hpp>

#include "geoflow/actions.hpp"
#include "geoflow/atlas.hpp"
#include "geoflow/conserved.hpp"
#include "geoflow/core.hpp"
#include "geoflow/integrator.hpp"
#include "geoflow/parallel.hpp"
#include "geoflow/reduction.hpp"
#include "geoflow/sections.hpp"
#include "geoflow/separation.hpp"

namespace geoflow {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t tag) {
  std::seed_seq s{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                  static_cast<std::uint32_t>(tag)};
  return std::mt19937_64(s);
}

CheckRow row(std::string name, double value, double threshold, RowRole role = RowRole::shared) {
  return {std::move(name), value, threshold, role};
}

// max that lets a NaN through, so a NaN residual fails its row.
double worst(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return kNaN;
  return std::max(a, b);
}

// Thread-safe running maximum for parallel loops.
class MaxAccumulator {
 public:
  void add(double v) {
    std::lock_guard<std::mutex> lk(m_);
    value_ = worst(value_, v);
  }
  double value() const { return value_; }

 private:
  std::mutex m_;
  double value_ = 0;
};

EllipsoidSpec spec_of(Case c, std::vector<double> distinct) { return expand_spec(c, distinct); }

PhasePoint perturb(const EllipsoidSpec& spec, const PhasePoint& p, std::mt19937_64& rng, double eps) {
  std::normal_distribution<double> n(0.0, eps);
  PhasePoint q = p;
  for (int i = 0; i < 4; ++i) {
    q.x[i] += n(rng);
    q.y[i] += n(rng);
  }
  return project(spec, q);
}

double eig_abs(const EllipsoidSpec& spec, const Observable& f, const PhasePoint& p) {
  const auto sp = squared_pairs(flow_jacobian(spec, f, p), 1);
  return std::sqrt(std::abs(sp.at(0).real()));
}

// ---- criteria ----------------------------------------------------------------------------------

CheckGroup conservation(std::uint64_t seed) {
  CheckGroup g{1, "conservation along 20 trajectories per case, t = 100, tol 1e-10", {}};
  const std::vector<std::pair<Case, std::vector<double>>> cases = {{Case::generic, {0.25, 0.5, 1, 2}},
                                                                   {Case::c22, {1, 2}},
                                                                   {Case::c112, {1, 2, 3}},
                                                                   {Case::c211, {1, 2, 3}},
                                                                   {Case::c13, {1, 2}}};
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const auto spec = spec_of(cases[ci].first, cases[ci].second);
    MaxAccumulator drift, constraint;
    parallel_for(20, [&](std::size_t k) {
      auto rng = stream(seed, 100 * ci + k);
      const PhasePoint p0 = random_point(spec, rng, 0.5);
      IntegrateOptions opt;
      opt.tol = 1e-10;
      opt.samples = 400;
      const auto tr = integrate(spec, p0, 100.0, opt);
      drift.add(tr.drift.max_relative());
      constraint.add(tr.drift.max_sample_constraint);
    });
    const std::string c = to_string(spec.symmetry);
    g.rows.push_back(row(c + " max relative drift", drift.value(), 1e-8));
    g.rows.push_back(row(c + " max constraint residual", constraint.value(), 1e-10));
  }
  return g;
}

CheckGroup commutation(std::uint64_t seed) {
  CheckGroup g{2, "brackets and algebraic relations at 1000 random points per case", {}};
  const std::vector<std::pair<Case, std::vector<double>>> cases = {
      {Case::generic, {0.25, 0.5, 1, 2}}, {Case::c22, {1, 2}}, {Case::c112, {1, 2, 3}},
      {Case::c211, {1, 2, 3}},            {Case::c13, {1, 2}}, {Case::c31, {1, 2}}};
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const auto spec = spec_of(cases[ci].first, cases[ci].second);
    const std::string c = to_string(spec.symmetry);
    std::vector<Observable> fs{obs::hamiltonian()};
    for (auto& f : declared_integrals(spec)) fs.push_back(f);
    const bool separable = spec.symmetry == Case::c112 || spec.symmetry == Case::c211;
    const bool so3 = spec.symmetry == Case::c13 || spec.symmetry == Case::c31;
    double brackets = 0, relations = 0, gtilde = 0, witness = 0;
    auto rng = stream(seed, 1000 + ci);
    for (int k = 0; k < 1000; ++k) {
      const PhasePoint p = random_point(spec, rng);
      for (std::size_t a = 0; a < fs.size(); ++a)
        for (std::size_t b = a + 1; b < fs.size(); ++b) {
          // The SO(3) angular momenta are not in involution with each other.
          if (so3 && fs[a].name[0] == 'L' && fs[b].name[0] == 'L') continue;
          brackets = worst(brackets, std::abs(poisson_bracket(spec, fs[a], fs[b], p)));
        }
      for (const auto& [name, v] : relation_residuals(spec, p)) relations = worst(relations, std::abs(v));
      if (separable) {
        const auto ax = separation_axes(spec);
        const double h = energy(p);
        const auto sc = separated_constants(ax, confocal_from_reduced(ax, reduce(spec, p)), h);
        gtilde = worst(gtilde, std::abs(separated_relation_residual(ax, sc, conserved_set(spec, p).values.at("G"))));
      }
      if (so3) {
        // {L_ab, L_ac} = x_b y_c - x_c y_b over the triple block (a, b, c).
        const int a = spec.symmetry == Case::c13 ? 1 : 0;
        const std::string lab = "L" + std::to_string(a) + std::to_string(a + 1);
        const std::string lac = "L" + std::to_string(a) + std::to_string(a + 2);
        const double br = poisson_bracket(spec, integral(spec, lab), integral(spec, lac), p);
        witness = worst(witness, std::abs(br - (p.x[a + 1] * p.y[a + 2] - p.x[a + 2] * p.y[a + 1])));
      }
    }
    g.rows.push_back(row(c + " max pairwise bracket", brackets, 1e-9));
    g.rows.push_back(row(c + " max relation residual", relations, 1e-10));
    if (separable) g.rows.push_back(row(c + " separated-constant relation", gtilde, 1e-10));
    if (so3) g.rows.push_back(row(c + " {L,L} non-involution identity", witness, 1e-10));
  }
  return g;
}

CheckGroup polygon(std::uint64_t seed) {
  CheckGroup g{3, "c22 polygon, alpha = (1, 2), h = 1", {}};
  const auto spec = spec_of(Case::c22, {1, 2});
  const double h = 1, a1 = 1, a2 = 2;

  // Vertices as intersections of the computed edges.
  const auto edges = boundary_curves(spec, h);
  std::vector<std::array<double, 2>> found;
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t k = i + 1; k < edges.size(); ++k) {
      const auto& e = edges[i].coef;
      const auto& f = edges[k].coef;
      const double det = e[0] * f[1] - e[1] * f[0];
      if (std::abs(det) < 1e-14) continue;
      const double u = (e[2] * f[1] - e[1] * f[2]) / det, v = (e[0] * f[2] - e[2] * f[0]) / det;
      const bool on_i = u >= edges[i].j_min - 1e-12 && u <= edges[i].j_max + 1e-12;
      const bool on_k = u >= edges[k].j_min - 1e-12 && u <= edges[k].j_max + 1e-12;
      if (on_i && on_k) found.push_back({u, v});
    }
  const std::array<std::array<double, 2>, 4> want{{{std::sqrt(2.0), 0}, {-std::sqrt(2.0), 0}, {0, 2}, {0, -2}}};
  double verr = found.size() == 4 ? 0.0 : kNaN;
  for (const auto& w : want) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& f : found) best = std::min(best, std::hypot(f[0] - w[0], f[1] - w[1]));
    verr = worst(verr, best);
  }
  g.rows.push_back(row("vertex error", verr, 1e-12));

  auto rng = stream(seed, 3000);
  double excess = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 10000; ++k) {
    const auto em = energy_momentum(spec, random_point(spec, rng, h));
    excess = std::max(excess, std::abs(em.j1) / std::sqrt(a1) + std::abs(em.j2) / std::sqrt(a2) - std::sqrt(2 * h));
  }
  g.rows.push_back(row("sampled momenta beyond the polygon", std::max(excess, 0.0), 1e-12));

  double hmin_err = 0, direct_err = 0;
  for (int s1 : {1, -1})
    for (int s2 : {1, -1})
      for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double j1 = s1 * std::sqrt(2 * h * a1) * t, j2 = s2 * std::sqrt(2 * h * a2) * (1 - t);
        hmin_err = worst(hmin_err, std::abs(equilibria_22(a1, a2, j1, j2).h_min - h));
      }
  for (double j1 : {-0.9, -0.4, 0.2, 0.6})
    for (double j2 : {-1.1, -0.3, 0.5, 0.8}) {
      const auto e = equilibria_22(a1, a2, j1, j2);
      auto f = [&](double phi) { return chart_hamiltonian_22(a1, a2, j1, j2, {phi, 0.0}); };
      const auto m = boost::math::tools::brent_find_minima(f, 1e-6, kPi / 2 - 1e-6, 52);
      direct_err = worst(direct_err, std::max(std::abs(m.first - e.phi), std::abs(m.second - e.h_min)));
    }
  g.rows.push_back(row("h_min - h on the boundary", hmin_err, 1e-10));
  g.rows.push_back(row("equilibria vs direct minimiser", direct_err, 1e-6));
  return g;
}

struct Expected {
  std::string landmark;
  double u, v;
};

CheckGroup diagrams(std::uint64_t seed) {
  CheckGroup g{4, "c112 / c211 diagrams, alpha = (1, 2, 3), h = 1", {}};
  const double h = 1;
  const double r6 = std::sqrt(6.0), r3 = std::sqrt(3.0), r2 = std::sqrt(2.0);
  const std::vector<std::pair<Case, std::vector<Expected>>> cases = {
      {Case::c112,
       {{"corner A/B +", r6, 2}, {"corner A/B -", -r6, 2}, {"tangency B/C +", r3, 2.5}, {"tangency B/C -", -r3, 2.5}}},
      {Case::c211,
       {{"curve A at j=0", 0, -2},
        {"wall B at j=0", 0, -1},
        {"origin", 0, 0},
        {"corner A/B +", r2, 2},
        {"corner A/B -", -r2, 2}}}};
  auto rng = stream(seed, 4000);
  for (const auto& [cs, expected] : cases) {
    const auto spec = spec_of(cs, {1, 2, 3});
    const std::string c = to_string(cs);
    const auto marks = landmarks(spec, h);
    const auto curves = boundary_curves(spec, h);
    const Observable H = obs::hamiltonian(), G = integral(spec, "G"), J = integral(spec, "J");

    double closed = 0, numeric = 0;
    for (const auto& e : expected) {
      const auto it = std::find_if(marks.begin(), marks.end(), [&](const Landmark& m) { return m.name == e.landmark; });
      if (it == marks.end()) {
        closed = numeric = kNaN;
        continue;
      }
      closed = worst(closed, std::hypot(it->u - e.u, it->v - e.v));
      // Recover the value from a perturbed seed.
      EMValue em;
      if (it->type == CriticalType::degenerate) {
        PhasePoint p = degenerate_family_point(spec, h, locate_degenerate(spec, h));
        if (e.u < 0) (cs == Case::c112 ? p.y[3] : p.y[1]) *= -1;
        em = energy_momentum(spec, p);
      } else {
        CriticalProblem prob;
        if (it->corank == 2) {
          prob.targets = {G, J};
          prob.basis = {H};
          prob.pins = {{H, h}};
        } else {
          prob.targets = {G};
          prob.basis = {H, J};
          prob.pins = {{H, h}, {J, it->u}};
        }
        const auto res = find_critical(spec, perturb(spec, it->seed, rng, 1e-3), prob);
        em = res.converged ? energy_momentum(spec, res.p) : EMValue{};
        if (!res.converged) em.j = em.g = kNaN;
      }
      numeric = worst(numeric, std::hypot(em.j - e.u, em.g - e.v));
    }
    g.rows.push_back(row(c + " closed-form landmark error", closed, 1e-12));
    g.rows.push_back(row(c + " numeric critical search error", numeric, 1e-6));

    // The curves themselves meet where the landmarks say.
    double meet = 0;
    const double jm = diagram_j_max(spec, h), jt = tangency_j(spec, h);
    meet = worst(meet, std::abs(curves[0].g_at(jm) - curves[1].g_at(jm)));
    meet = worst(meet, std::abs(curves[1].g_at(jt) - curves[2].g_at(jt)));
    const double d = 1e-6;
    const double slope_b = (curves[1].g_at(jt + d) - curves[1].g_at(jt - d)) / (2 * d);
    const double slope_c = (curves[2].g_at(jt + d) - curves[2].g_at(jt - d)) / (2 * d);
    g.rows.push_back(row(c + " curve intersection residual", meet, 1e-12));
    g.rows.push_back(row(c + " B/C slope mismatch at the tangency", std::abs(slope_b - slope_c), 1e-8));
  }
  return g;
}

CheckGroup eigenvalues(std::uint64_t) {
  CheckGroup g{5, "eigenvalues and critical types", {}};
  const double h = 1;
  {
    const auto spec = spec_of(Case::c22, {1, 2});
    const double a1 = 1, a2 = 2;
    PhasePoint corner;
    corner.x = {0, 0, 0, std::sqrt(a2)};
    corner.y = {0, 0, std::sqrt(2 * h), 0};
    const double lam = eig_abs(spec, integral(spec, "G1"), corner);
    g.rows.push_back(row("c22 corner |lambda| - 2 sqrt 2", std::abs(lam - 2 * std::sqrt(2.0)), 1e-8));
    g.rows.push_back(row("c22 corner vs 2 sqrt(2 h a1)/(a2 - a1)",
                         std::abs(lam - 2 * std::sqrt(2 * h * a1) / (a2 - a1)), 1e-8));

    const double psi = kPi / 4, c = std::cos(psi), s = std::sin(psi);
    PhasePoint edge;
    edge.x = {std::sqrt(a1) * c, 0, std::sqrt(a2) * s, 0};
    edge.y = {0, std::sqrt(2 * h) * c, 0, std::sqrt(2 * h) * s};
    const double le = eig_abs(spec, polygon_integral(spec, 1, 1), edge);
    const double den = a2 + a1 + (a2 - a1) * (c * c - s * s);
    g.rows.push_back(row("c22 edge |lambda| - 2 sqrt 2 / 3 (reference)", std::abs(le - 2 * std::sqrt(2.0) / 3), 1e-8,
                         RowRole::literal));
    g.rows.push_back(row("c22 edge |lambda| - 2 sqrt 2 / sqrt(denominator)",
                         std::abs(le - 2 * std::sqrt(2.0) / std::sqrt(den)), 1e-8, RowRole::corrected));
  }
  {
    const auto spec = spec_of(Case::c112, {1, 2, 3});
    const auto& a = spec.alphas;
    const Observable f1 = integral(spec, "F1");
    // Degenerate point of curve B: y0^2 = 2h(a1 - a0)/(a2 - a0).
    const double y0sq = 2 * h * (a[1] - a[0]) / (a[2] - a[0]);
    const double s_deg = std::sqrt(y0sq / (2 * h));
    const auto l2 = squared_pairs(flow_jacobian(spec, f1, degenerate_family_point(spec, h, s_deg)), 1);
    g.rows.push_back(row("c112 lambda^2 at y0^2 = 1", std::abs(l2.at(0)), 1e-8));
    g.rows.push_back(row("c112 located y0^2 - 1", std::abs(2 * h * std::pow(locate_degenerate(spec, h), 2) - 1), 1e-8));
    // lambda^2 = -det of the 2x2 block, 4 K(x,y)^2 - 4 K(y,y)(K(x,x) - 1), along the family.
    double block = 0;
    for (double s : {0.2, 0.4, 0.6, 0.8, 0.9}) {
      const PhasePoint p = degenerate_family_point(spec, h, s);
      auto K = [&](const Vec4& u, const Vec4& v) {
        double r = 0;
        for (int k = 0; k < 4; ++k)
          if (k != 1) r += u[k] * v[k] / (a[k] - a[1]);
        return r;
      };
      const double want = 4 * K(p.x, p.y) * K(p.x, p.y) - 4 * K(p.y, p.y) * (K(p.x, p.x) - 1);
      const auto got = squared_pairs(flow_jacobian(spec, f1, p), 1).at(0);
      block = worst(block, std::abs(got - want));
    }
    g.rows.push_back(row("c112 block lambda^2 along the degenerate family", block, 1e-8));
    // Corank-two corner: +-2 i sqrt(2 a0 h)/(a2 - a0) for F0, +-2 i sqrt(2 a1 h)/(a2 - a1) for F1.
    const auto marks = landmarks(spec, h);
    const PhasePoint corner = marks.at(0).seed;
    const double e0 = eig_abs(spec, integral(spec, "F0"), corner);
    const double e1 = eig_abs(spec, f1, corner);
    g.rows.push_back(row("c112 corner F0 eigenvalue", std::abs(e0 - 2 * std::sqrt(2 * a[0] * h) / (a[2] - a[0])), 1e-8));
    g.rows.push_back(row("c112 corner F1 eigenvalue", std::abs(e1 - 2 * std::sqrt(2 * a[1] * h) / (a[2] - a[1])), 1e-8));
  }
  double mismatches = 0;
  for (auto [c, d] : {std::pair<Case, std::vector<double>>{Case::c22, {1, 2}}, {Case::c112, {1, 2, 3}},
                      {Case::c211, {1, 2, 3}}}) {
    const auto spec = spec_of(c, d);
    for (const auto& m : landmarks(spec, h)) {
      const auto cl = classify_critical(spec, m.seed);
      if (cl.type != m.type || cl.corank != m.corank) ++mismatches;
    }
  }
  g.rows.push_back(row("landmark type mismatches", mismatches, 0));
  return g;
}

CheckGroup actions(std::uint64_t) {
  CheckGroup g{6, "c22 actions, alpha = (1, 2), h = 1", {}};
  const double a1 = 1, a2 = 2, h = 1;
  const auto grid = energy_surface_grid(a1, a2, h, 21);
  MaxAccumulator cross;
  parallel_for(grid.j1.size(), [&](std::size_t i) {
    const double q = action_I(a1, a2, h, grid.j1[i], grid.j2[i], ActionMethod::quadrature);
    cross.add(std::abs(q - grid.I[i]));
  });
  g.rows.push_back(row("quadrature vs Legendre form", cross.value(), 1e-9));

  const double e = 1e-5;
  const double d1p = dI_dJ(a1, a2, h, e, 0.5, 1), d1m = dI_dJ(a1, a2, h, -e, 0.5, 1);
  const double d2p = dI_dJ(a1, a2, h, 0.5, e, 2), d2m = dI_dJ(a1, a2, h, 0.5, -e, 2);
  g.rows.push_back(row("dI/dJ1 at 0+ minus +1 (reference)", std::abs(d1p - 1), 1e-3, RowRole::literal));
  g.rows.push_back(row("dI/dJ1 at 0- minus -1 (reference)", std::abs(d1m + 1), 1e-3, RowRole::literal));
  g.rows.push_back(row("dI/dJ1 at 0+ minus -1", std::abs(d1p + 1), 1e-3, RowRole::corrected));
  g.rows.push_back(row("dI/dJ1 at 0- minus +1", std::abs(d1m - 1), 1e-3, RowRole::corrected));
  g.rows.push_back(row("dI/dJ2 at 0+ minus -1", std::abs(d2p + 1), 1e-3));
  g.rows.push_back(row("dI/dJ2 at 0- minus +1", std::abs(d2m - 1), 1e-3));

  const GluingSet used = transition_matrices(), shown = transition_matrices(true);
  g.rows.push_back(row("J1 jump minus +2 (reference)", std::abs(d1p - d1m - 2), 1e-3, RowRole::literal));
  g.rows.push_back(row("J1 jump minus the M1 entry", std::abs(d1p - d1m - static_cast<double>(used.m1[2][0])), 1e-3,
                       RowRole::corrected));
  g.rows.push_back(row("J2 jump minus -2", std::abs(d2p - d2m + 2), 1e-3));
  g.rows.push_back(row("J2 jump minus the M3 entry", std::abs(d2p - d2m - static_cast<double>(used.m3[2][1])), 1e-3));

  auto off_identity = [](const IntMatrix3& m) {
    long bad = 0;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) bad = std::max(bad, std::abs(m[i][k] - (i == k ? 1L : 0L)));
    return static_cast<double>(bad);
  };
  g.rows.push_back(row("M_total - identity, displayed matrices", off_identity(shown.total), 0));
  g.rows.push_back(row("M_total - identity, matrices in use", off_identity(used.total), 0));

  // Straddle tests of the smoothed third action across each axis.
  auto third = [&](double j1, double j2) { return smooth_action(a1, a2, h, j1, j2)[2]; };
  auto slope = [&](double j1, double j2, int which) {
    const double s = 1e-7;
    return which == 1 ? (third(j1 + s, j2) - third(j1 - s, j2)) / (2 * s)
                      : (third(j1, j2 + s) - third(j1, j2 - s)) / (2 * s);
  };
  double jump_v = 0, jump_s = 0;
  for (double other : {-0.6, -0.2, 0.3, 0.7}) {
    jump_v = worst(jump_v, std::abs(third(1e-6, other) - third(-1e-6, other)));
    jump_v = worst(jump_v, std::abs(third(other, 1e-6) - third(other, -1e-6)));
    jump_s = worst(jump_s, std::abs(slope(e, other, 1) - slope(-e, other, 1)));
    jump_s = worst(jump_s, std::abs(slope(other, e, 2) - slope(other, -e, 2)));
  }
  g.rows.push_back(row("smooth action value jump across the axes", jump_v, 1e-5));
  g.rows.push_back(row("smooth action slope jump across the axes", jump_s, 1e-3));
  return g;
}

CheckGroup sections(std::uint64_t) {
  CheckGroup g{7, "c112 sections, alpha = (1, 2, 3), h = 1", {}};
  const auto spec = spec_of(Case::c112, {1, 2, 3});
  const std::array<double, 3> a{1, 2, 3};
  const double h = 1;
  for (double j : {0.5, 1.2}) {
    const auto curve = analytic_section_curve(a, h, j);
    // A short horizon: orbits on the separatrix creep towards the saddle, where an O(e) energy error
    // moves the crossing by O(sqrt e).
    const auto pts = numeric_section(spec, separatrix_seeds(spec, h, j, 20), 20.0, 1e-11);
    double d = pts.size() >= 20 ? 0.0 : kNaN;
    for (const auto& p : pts) d = worst(d, distance_to_curve(curve, p.phi, p.pphi));
    char name[64];
    std::snprintf(name, sizeof name, "numeric crossings off the curve at j = %.1f", j);
    g.rows.push_back(row(name, d, 1e-6));
  }
  auto miss = [](Atom got, Atom want) { return got == want ? 0.0 : 1.0; };
  g.rows.push_back(row("atom at j = 0.5", miss(classify_atom(analytic_section_curve(a, h, 0.5), false), Atom::B), 0));
  g.rows.push_back(
      row("atom at j = 0.5, quotient", miss(classify_atom(analytic_section_curve(a, h, 0.5), true), Atom::B), 0));
  g.rows.push_back(row("atom at j = 0", miss(classify_atom(analytic_section_curve(a, h, 0), false), Atom::C2), 0));
  g.rows.push_back(row("atom at j = 0, quotient", miss(classify_atom(analytic_section_curve(a, h, 0), true), Atom::B), 0));
  g.rows.push_back(row("atom at j^2 = 3",
                       miss(classify_atom(analytic_section_curve(a, h, std::sqrt(3.0)), false), Atom::point), 0));
  return g;
}

CheckGroup so3_cases(std::uint64_t seed) {
  CheckGroup g{8, "c13 / c31 range and fibers, alpha = (1, 2), h = 1", {}};
  const double h = 1;
  for (Case cs : {Case::c13, Case::c31}) {
    const auto spec = spec_of(cs, {1, 2});
    const std::string c = to_string(cs);
    const double bound = 2 * alpha_rev(spec) * h;
    const Observable J = integral(spec, "J");
    auto rng = stream(seed, cs == Case::c13 ? 8000 : 8001);
    double excess = 0, negative = 0;
    for (int k = 0; k < 100000; ++k) {
      const double j2 = std::pow(J.value(to_state(random_point(spec, rng, h))), 2);
      excess = worst(excess, std::max(0.0, j2 - bound));
      if (j2 < 0) ++negative;
    }
    g.rows.push_back(row(c + " sampled J^2 above 2 alpha_rev h", excess, 1e-9 * bound));
    g.rows.push_back(row(c + " sampled J^2 below 0", negative, 0));

    double attained = 0, defining = 0;
    std::normal_distribution<double> n(0, 1);
    for (int k = 0; k < 100; ++k) {
      Eigen::Vector3d u(n(rng), n(rng), n(rng)), v(n(rng), n(rng), n(rng));
      u.normalize();
      v = (v - v.dot(u) * u).normalized();
      const PhasePoint p = so3_seed(spec, h, {u[0], u[1], u[2]}, {v[0], v[1], v[2]});
      attained = worst(attained, std::abs(std::pow(J.value(to_state(p)), 2) - bound));
      for (double r : so3_defining_residuals(spec, h, p)) defining = worst(defining, std::abs(r));
    }
    g.rows.push_back(row(c + " extremal seeds |J^2 - bound|", attained, 1e-3));
    g.rows.push_back(row(c + " SO(3) defining equations", defining, 1e-12));
    const auto curve = trace_zero_momentum_curve(spec, h);
    g.rows.push_back(row(c + " J = 0 curve closure", curve.closure_error, 1e-8));
    g.rows.push_back(row(c + " J = 0 curve relation residual", curve.relation_error, 1e-8));
  }
  return g;
}

// ---- module invariants -------------------------------------------------------------------------

const std::vector<std::pair<Case, std::vector<double>>>& all_cases() {
  static const std::vector<std::pair<Case, std::vector<double>>> v = {
      {Case::generic, {0.25, 0.5, 1, 2}}, {Case::c22, {1, 2}}, {Case::c112, {1, 2, 3}},
      {Case::c211, {1, 2, 3}},            {Case::c13, {1, 2}}, {Case::c31, {1, 2}}};
  return v;
}

CheckGroup geometry_invariants(std::uint64_t seed) {
  CheckGroup g{0, "geometry-core", {}};
  double anti_exact = 0, anti_fd = 0, casimir = 0, tangent = 0;
  Observable smooth{"x0^2 y1 + sin(y2) + x3 y3^3",
                    [](const State& z) { return z[0] * z[0] * z[5] + std::sin(z[6]) + z[3] * std::pow(z[7], 3); },
                    {}};
  for (std::size_t ci = 0; ci < all_cases().size(); ++ci) {
    const auto spec = spec_of(all_cases()[ci].first, all_cases()[ci].second);
    std::vector<Observable> fs{obs::hamiltonian()};
    for (auto& f : declared_integrals(spec)) fs.push_back(f);
    const Observable c1 = obs::c1(spec.alphas), c2 = obs::c2(spec.alphas);
    auto rng = stream(seed, 9000 + ci);
    for (int k = 0; k < 1000; ++k) {
      const PhasePoint p = random_point(spec, rng);
      for (const auto& f : fs) {
        casimir = worst(casimir, std::abs(poisson_bracket(spec, c1, f, p)));
        casimir = worst(casimir, std::abs(poisson_bracket(spec, c2, f, p)));
      }
      if (k < 200) {
        for (std::size_t a = 0; a < fs.size(); ++a)
          for (std::size_t b = a + 1; b < fs.size(); ++b)
            anti_exact = worst(anti_exact, std::abs(poisson_bracket(spec, fs[a], fs[b], p) +
                                                    poisson_bracket(spec, fs[b], fs[a], p)));
        anti_fd = worst(anti_fd, std::abs(poisson_bracket(spec, smooth, fs.back(), p) +
                                          poisson_bracket(spec, fs.back(), smooth, p)));
      }
      const State z = to_state(p), v = vector_field(spec.alphas, z);
      tangent = worst(tangent, std::abs(constraint_gradient_c1(spec.alphas, z).dot(v)));
      tangent = worst(tangent, std::abs(constraint_gradient_c2(spec.alphas, z).dot(v)));
    }
  }
  g.rows.push_back(row("antisymmetry, closed-form gradients", anti_exact, 0));
  g.rows.push_back(row("antisymmetry, finite-difference gradients", anti_fd, 1e-9));
  g.rows.push_back(row("Casimir brackets {C1, f}, {C2, f}", casimir, 1e-10));
  g.rows.push_back(row("dC1/dt, dC2/dt along the vector field", tangent, 1e-12));
  return g;
}

CheckGroup integrator_invariants(std::uint64_t seed) {
  CheckGroup g{0, "flow-integrator", {}};
  double ratio = 0, reversal = 0;
  for (std::size_t ci = 0; ci < all_cases().size(); ++ci) {
    const auto spec = spec_of(all_cases()[ci].first, all_cases()[ci].second);
    std::vector<PhasePoint> seeds;
    auto rng = stream(seed, 10000 + ci);
    for (int k = 0; k < 4; ++k) seeds.push_back(random_point(spec, rng, 0.5));
    std::vector<double> coarse(seeds.size()), fine(seeds.size()), back(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t k) {
      IntegrateOptions opt;
      opt.samples = 200;
      opt.tol = 1e-8;
      coarse[k] = integrate(spec, seeds[k], 100.0, opt).drift.max_relative();
      opt.tol = 5e-9;
      fine[k] = integrate(spec, seeds[k], 100.0, opt).drift.max_relative();
      opt.tol = 1e-10;
      const auto fwd = integrate(spec, seeds[k], 50.0, opt);
      PhasePoint turn = fwd.points.back();
      for (double& y : turn.y) y = -y;
      PhasePoint end = integrate(spec, turn, 50.0, opt).points.back();
      for (double& y : end.y) y = -y;
      back[k] = (to_state(end) - to_state(seeds[k])).norm();
    });
    ratio = worst(ratio, *std::max_element(fine.begin(), fine.end()) / *std::max_element(coarse.begin(), coarse.end()));
    reversal = worst(reversal, *std::max_element(back.begin(), back.end()));
  }
  g.rows.push_back(row("drift ratio when tol is halved", ratio, 2));
  g.rows.push_back(row("time-reversal return error, t = 50", reversal, 1e-6));
  return g;
}

CheckGroup reduction_invariants(std::uint64_t seed) {
  CheckGroup g{0, "symmetry-reduction", {}};
  double poisson = 0;
  for (std::size_t ci = 1; ci < all_cases().size(); ++ci) {
    const auto spec = spec_of(all_cases()[ci].first, all_cases()[ci].second);
    auto rng = stream(seed, 11000 + ci);
    for (int k = 0; k < 200; ++k) {
      const PhasePoint p = random_point(spec, rng);
      const ReducedPoint r = reduce(spec, p);
      if (r.singular) continue;
      const Eigen::VectorXd zr = reduced_state(r);
      const Eigen::MatrixXd pr = bracket_tensor_n(r.axes, zr);
      std::vector<Observable> coords;
      for (int a = 0; a < zr.size(); ++a)
        coords.push_back({"r" + std::to_string(a),
                          [&spec, a](const State& z) { return reduced_state(reduce(spec, from_state(z)))[a]; },
                          {}});
      std::vector<State> grads;
      for (const auto& o : coords) grads.push_back(gradient_of(o, to_state(p)));
      const Mat8 P = bracket_tensor(spec.alphas, to_state(p));
      for (int a = 0; a < zr.size(); ++a)
        for (int b = a + 1; b < zr.size(); ++b)
          poisson = worst(poisson, std::abs(grads[a].dot(P * grads[b]) - pr(a, b)));
    }
  }
  g.rows.push_back(row("reduction is Poisson on coordinate functions", poisson, 1e-8));

  {
    const auto spec = spec_of(Case::c13, {1, 2});
    auto rng = stream(seed, 11100);
    double sheets = 0, rel = 0;
    for (int k = 0; k < 1000; ++k) {
      const auto b = invariants(spec, random_point(spec, rng)).at(0);
      if (b.pi4 > 0 && !(b.pi2 > 0)) ++sheets;
      rel = worst(rel, std::abs(b.relation()));
    }
    g.rows.push_back(row("c13 reduced points with pi2 <= 0 at j != 0", sheets, 0));
    g.rows.push_back(row("c13 block relation pi1 pi2 - pi3^2 - j^2", rel, 1e-10));
  }
  {
    const auto spec = spec_of(Case::c22, {1, 2});
    auto rng = stream(seed, 11200);
    double cover = 0;
    for (int k = 0; k < 1000; ++k) {
      const ReducedPoint r = reduce(spec, random_point(spec, rng));
      const double h0 = reduced_hamiltonian(r);
      const auto c0 = reduced_casimirs(r);
      for (int flips = 1; flips < 4; ++flips) {
        ReducedPoint q = r;
        for (int s = 0; s < 2; ++s)
          if (flips >> s & 1) {
            q.xi[s] = -q.xi[s];
            q.eta[s] = -q.eta[s];
          }
        const auto c1 = reduced_casimirs(q);
        cover = worst(cover, std::abs(reduced_hamiltonian(q) - h0));
        cover = worst(cover, std::max(std::abs(c1[0] - c0[0]), std::abs(c1[1] - c0[1])));
      }
    }
    g.rows.push_back(row("c22 sign flips change H or the Casimirs", cover, 1e-14));
  }
  return g;
}

CheckGroup separation_invariants(std::uint64_t seed) {
  CheckGroup g{0, "separation-coordinates", {}};
  double momentum = 0, disorder = 0;
  for (Case cs : {Case::c112, Case::c211}) {
    const auto spec = spec_of(cs, {1, 2, 3});
    const auto ax = separation_axes(spec);
    auto rng = stream(seed, cs == Case::c112 ? 12000 : 12001);
    for (int k = 0; k < 3; ++k) {
      IntegrateOptions opt;
      opt.samples = 500;
      const auto tr = integrate(spec, random_point(spec, rng, 0.5), 50.0, opt);
      for (const auto& p : tr.points) {
        const ReducedPoint r = reduce(spec, p);
        bool near_plane = r.singular;
        for (double xi : r.xi) near_plane = near_plane || std::abs(xi) < 1e-3;
        if (near_plane) continue;
        const ConfocalPoint c = confocal_from_reduced(ax, r);
        if (!(ax.a[0] < c.lambda1 && c.lambda1 < ax.a[1] && ax.a[1] < c.lambda2 && c.lambda2 < ax.a[2])) ++disorder;
        const double h = energy(p);
        const double gt = separation_constant_from_G(ax, conserved_set(spec, p).values.at("G"), h, c.ptheta);
        for (auto [lam, pm] : {std::pair{c.lambda1, c.p1}, {c.lambda2, c.p2}}) {
          const double want = momentum_polynomial(ax, h, gt, c.ptheta, lam);
          momentum = worst(momentum, std::abs(want - pm * pm) / std::max(1.0, pm * pm));
        }
      }
    }
  }
  g.rows.push_back(row("p^2 from the separated polynomial vs the lift", momentum, 1e-7));
  g.rows.push_back(row("confocal ordering violations off the planes", disorder, 0));
  return g;
}

CheckGroup atlas_invariants(std::uint64_t seed) {
  CheckGroup g{0, "bifurcation-atlas", {}};
  const double h = 1;
  double outside = 0;
  for (Case cs : {Case::c112, Case::c211}) {
    const auto spec = spec_of(cs, {1, 2, 3});
    const auto q = boundary_curves(spec, h);
    const double jt = tangency_j(spec, h);
    auto rng = stream(seed, cs == Case::c112 ? 13000 : 13001);
    for (int k = 0; k < 10000; ++k) {
      const auto em = energy_momentum(spec, random_point(spec, rng, h));
      const double a = q[0].g_at(em.j), other = std::abs(em.j) <= jt ? q[2].g_at(em.j) : q[1].g_at(em.j);
      const double tol = 1e-9;
      if (em.g < std::min(a, other) - tol || em.g > std::max(a, other) + tol ||
          std::abs(em.j) > diagram_j_max(spec, h) + tol)
        ++outside;
    }
  }
  g.rows.push_back(row("c112 / c211 sampled values outside the region", outside, 0));

  double fibers = 0;
  for (auto [c, d] : {std::pair<Case, std::vector<double>>{Case::c22, {1, 2}}, {Case::c112, {1, 2, 3}},
                      {Case::c211, {1, 2, 3}}, {Case::c13, {1, 2}}, {Case::c31, {1, 2}}}) {
    const auto spec = spec_of(c, d);
    for (const auto& m : landmarks(spec, h)) {
      const auto f = fiber_label(spec, h, energy_momentum(spec, m.seed));
      if (f.kind != m.fiber.kind || f.multiplicity != m.fiber.multiplicity) ++fibers;
    }
  }
  g.rows.push_back(row("landmark fiber label mismatches", fibers, 0));

  double chambers = 0;
  {
    const auto spec = spec_of(Case::c112, {1, 2, 3});
    // (j, g, components): between A and B one torus, between B and C two.
    for (auto [j, gv, want] : {std::tuple{0.0, 4.5, 1}, {0.0, 1.5, 2}, {2.0, 2.8, 1}, {1.0, 2.5, 2}, {-1.0, 4.5, 1}})
      if (regular_components(spec, h, j, gv) != want) ++chambers;
  }
  g.rows.push_back(row("c112 chamber multiplicity mismatches", chambers, 0));

  double optimal = 0;
  for (double j1 : {-0.9, -0.3, 0.4, 0.8})
    for (double j2 : {-1.0, -0.2, 0.5, 1.1}) {
      const auto e = equilibria_22(1, 2, j1, j2);
      for (double d : {-1e-3, 1e-3})
        if (!(chart_hamiltonian_22(1, 2, j1, j2, {e.phi + d, 0.0}) > e.h_min)) ++optimal;
    }
  g.rows.push_back(row("equilibria not strict minima at phi* +- 1e-3", optimal, 0));
  return g;
}

CheckGroup action_invariants(std::uint64_t) {
  CheckGroup g{0, "action-variables", {}};
  const double a1 = 1, a2 = 2, h = 1;
  const auto grid = energy_surface_grid(a1, a2, h, 21);
  MaxAccumulator fd;
  parallel_for(grid.j1.size(), [&](std::size_t i) {
    const double j1 = grid.j1[i], j2 = grid.j2[i];
    if (std::abs(j1) < 1e-3 || std::abs(j2) < 1e-3) return;
    const double s = 1e-6;
    auto I = [&](double u, double v) { return action_I(a1, a2, h, u, v, ActionMethod::legendre); };
    fd.add(std::abs(dI_dJ(a1, a2, h, j1, j2, 1) - (I(j1 + s, j2) - I(j1 - s, j2)) / (2 * s)));
    fd.add(std::abs(dI_dJ(a1, a2, h, j1, j2, 2) - (I(j1, j2 + s) - I(j1, j2 - s)) / (2 * s)));
  });
  g.rows.push_back(row("dI/dJ vs finite differences of I", fd.value(), 1e-5));
  return g;
}

CheckGroup section_invariants(std::uint64_t) {
  CheckGroup g{0, "poincare-sections", {}};
  const std::array<double, 3> a{1, 2, 3};
  const double h = 1;
  const double jt = std::sqrt(3.0);
  double quotient = 0, monotone = 0;
  double prev = std::numeric_limits<double>::infinity();
  for (double t : {0.95, 0.8, 0.6, 0.4, 0.2, 0.1, 0.05, 0.0}) {
    const auto c = analytic_section_curve(a, h, t * jt);
    if (classify_atom(c, true) != Atom::B) ++quotient;
    const double sep = lobe_separation(c);
    if (!(sep < prev)) ++monotone;
    prev = sep;
  }
  g.rows.push_back(row("quotient atoms other than B below the tangency", quotient, 0));
  g.rows.push_back(row("lobe separation not decreasing as j -> 0", monotone, 0));
  g.rows.push_back(row("lobe separation at j = 0", prev, 1e-12));
  return g;
}

}  // namespace

bool CheckGroup::criterion_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.role == RowRole::corrected || r.pass(); });
}

bool CheckGroup::verify_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.role == RowRole::literal || r.pass(); });
}

bool VerifyReport::pass() const {
  return std::all_of(groups.begin(), groups.end(), [](const CheckGroup& g) { return g.verify_pass(); });
}

CheckGroup acceptance_criterion(int id, std::uint64_t seed) {
  switch (id) {
    case 1: return conservation(seed);
    case 2: return commutation(seed);
    case 3: return polygon(seed);
    case 4: return diagrams(seed);
    case 5: return eigenvalues(seed);
    case 6: return actions(seed);
    case 7: return sections(seed);
    case 8: return so3_cases(seed);
    default: break;
  }
  throw Error(ErrorKind::index_range, "criteria are numbered 1 to 8");
}

std::vector<CheckGroup> invariant_suite(std::uint64_t seed) {
  return {geometry_invariants(seed),   integrator_invariants(seed), reduction_invariants(seed),
          separation_invariants(seed), atlas_invariants(seed),      action_invariants(seed),
          section_invariants(seed)};
}

VerifyReport run_verification(std::uint64_t seed) {
  VerifyReport r;
  for (int id = 1; id <= kCriterionCount; ++id) r.groups.push_back(acceptance_criterion(id, seed));
  for (auto& g : invariant_suite(seed)) r.groups.push_back(std::move(g));
  return r;
}

void write_report(std::ostream& os, const VerifyReport& r) {
  char line[256];
  for (const auto& g : r.groups) {
    if (g.criterion)
      os << "[" << g.criterion << "] " << g.title << "\n";
    else
      os << "[" << g.title << "]\n";
    for (const auto& row : g.rows) {
      const char* status = row.pass() ? "ok" : (row.role == RowRole::literal ? "differs" : "FAIL");
      std::snprintf(line, sizeof line, "  %-58s %12.3e  <= %9.1e  %s\n", row.name.c_str(), row.value, row.threshold,
                    status);
      os << line;
    }
  }
  os << (r.pass() ? "verify: all residuals below thresholds\n" : "verify: FAILED\n");
}

}  // namespace geoflow
