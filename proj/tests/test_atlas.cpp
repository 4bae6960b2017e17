#include "doctest.h"
#include "helpers.hpp"

#include <complex>

#include "geoflow/atlas.hpp"
#include "geoflow/conserved.hpp"
#include "geoflow/reduction.hpp"

using namespace geoflow;
using testing_support::spec;

namespace {
constexpr double kPi = 3.14159265358979323846;

const Landmark& find(const std::vector<Landmark>& v, const std::string& name) {
  for (const auto& l : v)
    if (l.name == name) return l;
  throw std::runtime_error("no landmark " + name);
}
}  // namespace

TEST_CASE("c22 polygon") {
  const auto curves = boundary_curves(spec(Case::c22, {1, 2}), 1);
  REQUIRE(curves.size() == 4);
  // Edges meet at (+-sqrt2, 0) and (0, +-2).
  for (const auto& c : curves) {
    CHECK(c.kind == CurveKind::polygon_edge);
    const double u = c.j_min < 0 ? c.j_min : c.j_max;
    CHECK(std::abs(u) == doctest::Approx(std::sqrt(2.0)));
    CHECK(c.g_at(u) == doctest::Approx(0).scale(1));
    CHECK(std::abs(c.g_at(0)) == doctest::Approx(2));
    CHECK(std::abs(c.residual(u, 0)) < 1e-14);
  }
}

TEST_CASE("c112 and c211 curves") {
  const auto c = boundary_curves(spec(Case::c112, {1, 2, 3}), 1);
  REQUIRE(c.size() == 3);
  for (double j : {0.0, 0.5, 1.0, 1.7}) {
    CHECK(c[0].g_at(j) == doctest::Approx(6 - 2.0 / 3 * j * j));
    CHECK(c[1].g_at(j) == doctest::Approx(3 - j * j / 6));
    CHECK(c[2].g_at(j) == doctest::Approx(std::sqrt(12.0) * j - 7.0 / 6 * j * j));
    CHECK(c[2].g_at(-j) == doctest::Approx(c[2].g_at(j)));
  }
  const double jc = std::sqrt(6.0);
  CHECK(c[0].g_at(jc) == doctest::Approx(2));
  CHECK(c[1].g_at(jc) == doctest::Approx(2));
  CHECK(diagram_j_max(spec(Case::c112, {1, 2, 3}), 1) == doctest::Approx(jc));
  const double jt = tangency_j(spec(Case::c112, {1, 2, 3}), 1);
  CHECK(jt == doctest::Approx(std::sqrt(3.0)));
  CHECK(c[1].g_at(jt) == doctest::Approx(2.5));
  CHECK(c[2].g_at(jt) == doctest::Approx(2.5));

  const auto d = boundary_curves(spec(Case::c211, {1, 2, 3}), 1);
  REQUIRE(d.size() == 3);
  CHECK(d[0].g_at(0) == doctest::Approx(-2));
  CHECK(d[1].g_at(0) == doctest::Approx(-1));
  CHECK(d[2].g_at(0) == doctest::Approx(0).scale(1));
  CHECK(diagram_j_max(spec(Case::c211, {1, 2, 3}), 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(tangency_j(spec(Case::c211, {1, 2, 3}), 1) == doctest::Approx(1));
}

TEST_CASE("sampled points stay inside the c112 region") {
  const auto s = spec(Case::c112, {1, 2, 3});
  const auto c = boundary_curves(s, 1);
  const double jt = tangency_j(s, 1);
  std::mt19937_64 rng(89);
  for (int t = 0; t < 2000; ++t) {
    const auto em = energy_momentum(s, random_point(s, rng, 1.0));
    CHECK(em.g <= c[0].g_at(em.j) + 1e-9);
    const double lower = std::abs(em.j) <= jt ? c[2].g_at(em.j) : c[1].g_at(em.j);
    CHECK(em.g >= lower - 1e-9);
  }
}

TEST_CASE("landmark classification") {
  const auto s = spec(Case::c112, {1, 2, 3});
  const auto marks = landmarks(s, 1);
  const std::pair<const char*, CriticalType> expect[] = {
      {"corner A/B +", CriticalType::elliptic_elliptic}, {"origin", CriticalType::elliptic_elliptic},
      {"wall B at j=0", CriticalType::hyperbolic},       {"curve A at j=0", CriticalType::elliptic},
      {"tangency B/C +", CriticalType::degenerate}};
  for (const auto& [name, type] : expect) {
    const auto& m = find(marks, name);
    CHECK_MESSAGE(m.type == type, name);
    if (type != CriticalType::degenerate) CHECK_MESSAGE(classify_critical(s, m.seed).type == type, name);
    const auto em = energy_momentum(s, m.seed);
    CHECK(em.j == doctest::Approx(m.u).scale(1));
    CHECK(em.g == doctest::Approx(m.v).scale(1));
  }
  const auto& corner = find(marks, "corner A/B +");
  CHECK(corner.corank == 2);
  CHECK(corner.u == doctest::Approx(std::sqrt(6.0)));

  std::mt19937_64 rng(97);
  CHECK_THROWS_AS(classify_critical(s, random_point(s, rng, 1.0)), Error);
}

TEST_CASE("c22 corner eigenvalues") {
  const auto s = spec(Case::c22, {1, 2});
  const PhasePoint p{{0, 0, 0, std::sqrt(2.0)}, {0, 0, std::sqrt(2.0), 0}};
  const auto sq = squared_pairs(flow_jacobian(s, integral(s, "G1"), p), 2);
  // lambda = i 2 sqrt(2 h a1) / (a2 - a1) = 2 sqrt(2) i at h = 1.
  bool found = false;
  for (const auto& l2 : sq) found = found || std::abs(l2 - std::complex<double>(-8, 0)) < 1e-6;
  CHECK(found);
  CHECK(classify_critical(s, p).type == CriticalType::elliptic_elliptic);
  CHECK(classify_critical(s, p).corank == 2);
}

TEST_CASE("degenerate point on the c112 family") {
  const auto s = spec(Case::c112, {1, 2, 3});
  const double sd = locate_degenerate(s, 1);
  const PhasePoint p = degenerate_family_point(s, 1, sd);
  // The degenerate member has y0^2 = 2h (a1 - a0) / (a2 - a0).
  CHECK(p.y[0] * p.y[0] == doctest::Approx(1).epsilon(1e-8));
  const auto em = energy_momentum(s, p);
  CHECK(std::abs(em.j) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-8));
  CHECK(em.g == doctest::Approx(2.5).epsilon(1e-8));
}

TEST_CASE("equilibria of the reduced c22 system") {
  const auto e = equilibria_22(1, 2, 1, 0.4);
  double best = 1e300, arg = 0;
  for (int k = 1; k < 200000; ++k) {
    const double phi = kPi / 2 * k / 200000;
    const double v = chart_hamiltonian_22(1, 2, 1, 0.4, {phi, 0});
    if (v < best) best = v, arg = phi;
  }
  CHECK(e.h_min == doctest::Approx(best).epsilon(1e-9));
  CHECK(e.phi == doctest::Approx(arg).epsilon(1e-4));
  CHECK(e.h_min == doctest::Approx(0.82285).epsilon(1e-4));
  CHECK(e.xi1 * e.xi1 + e.xi2 * e.xi2 / 2 == doctest::Approx(1));
  // Equal weights on a sphere-like pair put the minimum on the diagonal.
  const auto sym = equilibria_22(1, 1 + 1e-9, 0.5, 0.5);
  CHECK(sym.xi1 == doctest::Approx(sym.xi2).epsilon(1e-6));
}

TEST_CASE("fiber labels") {
  const auto s22 = spec(Case::c22, {1, 2});
  EMValue em;
  em.symmetry = Case::c22;
  em.h = 1;
  em.j1 = 0.2, em.j2 = 0.3;
  const auto f = fiber_label(s22, 1, em);
  CHECK(f.kind == FiberKind::T3);
  CHECK(f.multiplicity == 1);

  const auto s = spec(Case::c112, {1, 2, 3});
  EMValue b;
  b.symmetry = Case::c112;
  b.h = 1;
  b.j = 1.0;
  b.g = 3 - 1.0 / 6;
  CHECK(fiber_label(s, 1, b).kind == FiberKind::BxT2);
  CHECK(regular_components(s, 1, 0, 4.5) == 1);
  CHECK(regular_components(s, 1, 0, 1.5) == 2);
  CHECK(regular_components(s, 1, 2.0, 2.8) == 1);

  const auto s13 = spec(Case::c13, {1, 2});
  EMValue r;
  r.symmetry = Case::c13;
  r.h = 1;
  r.j = 2;
  CHECK(fiber_label(s13, 1, r).kind == FiberKind::SO3);
}

TEST_CASE("critical search recovers a perturbed corner") {
  const auto s = spec(Case::c112, {1, 2, 3});
  const auto& m = find(landmarks(s, 1), "corner A/B +");
  PhasePoint seed = m.seed;
  seed.y[0] += 1e-3;
  seed.x[1] += 1e-3;
  seed = project(s, seed);
  CriticalProblem prob;
  prob.targets = {integral(s, "G"), integral(s, "J")};
  prob.basis = {obs::hamiltonian()};
  prob.pins = {{obs::hamiltonian(), 1.0}};
  const auto r = find_critical(s, seed, prob);
  CHECK(r.converged);
  const auto em = energy_momentum(s, r.p);
  CHECK(std::abs(em.j) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-8));
  CHECK(em.g == doctest::Approx(2).epsilon(1e-8));
}

TEST_CASE("SO(3) fibers") {
  for (Case c : {Case::c13, Case::c31}) {
    const auto s = spec(c, {1, 2});
    std::mt19937_64 rng(101);
    std::normal_distribution<double> n;
    for (int t = 0; t < 20; ++t) {
      Eigen::Vector3d u(n(rng), n(rng), n(rng)), v(n(rng), n(rng), n(rng));
      u.normalize();
      v = (v - v.dot(u) * u).normalized();
      const PhasePoint p = so3_seed(s, 1, {u[0], u[1], u[2]}, {v[0], v[1], v[2]});
      for (double r : so3_defining_residuals(s, 1, p)) CHECK(std::abs(r) < 1e-12);
      CHECK(energy_momentum(s, p).j * energy_momentum(s, p).j == doctest::Approx(2 * alpha_rev(s)));
    }
    const auto z = trace_zero_momentum_curve(s, 1);
    CHECK(z.closure_error < 1e-8);
    CHECK(z.relation_error < 1e-9);
    CHECK(z.period > 0);
  }
}
