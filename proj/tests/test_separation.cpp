#include "doctest.h"
#include "helpers.hpp"

#include "geoflow/conserved.hpp"
#include "geoflow/integrator.hpp"
#include "geoflow/reduction.hpp"
#include "geoflow/separation.hpp"

using namespace geoflow;
using testing_support::spec;

TEST_CASE("confocal chart round trip and ordering") {
  std::mt19937_64 rng(67);
  for (Case c : {Case::c112, Case::c211}) {
    const auto s = spec(c, {1, 2, 3});
    const SeparationAxes ax = separation_axes(s);
    CHECK(ax.r == (c == Case::c112 ? 2 : 0));
    for (int t = 0; t < 300; ++t) {
      const ReducedPoint r = reduce(s, random_point(s, rng));
      const ConfocalPoint q = confocal_from_reduced(ax, r);
      CHECK(ax.a[0] < q.lambda1);
      CHECK(q.lambda1 < ax.a[1]);
      CHECK(ax.a[1] < q.lambda2);
      CHECK(q.lambda2 < ax.a[2]);
      // The defining equation of the chart, checked in its summed form.
      double root = 0;
      for (int k = 0; k < 3; ++k) root += r.xi[k] * r.xi[k] / (ax.a[k] * (ax.a[k] - q.lambda1));
      CHECK(std::abs(root) < 1e-6 * (1 + std::abs(r.xi[0] * r.xi[0] / (ax.a[0] * (ax.a[0] - q.lambda1)))));
      std::array<double, 3> xi, eta;
      cartesian_from_confocal(ax, q, xi, eta);
      for (int k = 0; k < 3; ++k) {
        CHECK(xi[k] == doctest::Approx(r.xi[k]).epsilon(1e-9));
        CHECK(eta[k] == doctest::Approx(r.eta[k]).epsilon(1e-7));
      }
      CHECK(confocal_hamiltonian(ax, q) == doctest::Approx(reduced_hamiltonian(r)).epsilon(1e-10));
    }
  }
}

TEST_CASE("separated constants agree with each other and with G") {
  std::mt19937_64 rng(71);
  for (Case c : {Case::c112, Case::c211}) {
    const auto s = spec(c, {1, 2, 3});
    const SeparationAxes ax = separation_axes(s);
    for (int t = 0; t < 300; ++t) {
      const PhasePoint p = random_point(s, rng);
      const ReducedPoint r = reduce(s, p);
      const ConfocalPoint q = confocal_from_reduced(ax, r);
      const double h = energy(p);
      const auto sc = separated_constants(ax, q, h);
      const double G = conserved_set(s, p).values.at("G");
      const double g = separation_constant_from_G(ax, G, h, q.ptheta);
      const double scale = 1 + std::abs(g) + h;
      CHECK(std::abs(sc.g1 - g) < 1e-9 * scale);
      CHECK(std::abs(sc.g2 - g) < 1e-9 * scale);
      CHECK(std::abs(separated_relation_residual(ax, sc, G)) < 2e-9 * scale);
      // Each momentum is a function of its own coordinate. The polynomial form subtracts lambda from
      // the axes, so it is only well conditioned away from the coordinate planes.
      if (std::min({std::abs(r.xi[0]), std::abs(r.xi[1]), std::abs(r.xi[2])}) < 1e-3) continue;
      CHECK(q.p1 * q.p1 == doctest::Approx(momentum_polynomial(ax, h, g, q.ptheta, q.lambda1)).epsilon(1e-7).scale(1));
      CHECK(q.p2 * q.p2 == doctest::Approx(momentum_polynomial(ax, h, g, q.ptheta, q.lambda2)).epsilon(1e-7).scale(1));
      CHECK(separated_constant(ax, q.lambda1, q.p1, h, q.ptheta) == doctest::Approx(g).epsilon(1e-7).scale(scale));
    }
  }
}

TEST_CASE("separated constants at rest") {
  const auto s = spec(Case::c112, {1, 2, 3});
  const SeparationAxes ax = separation_axes(s);
  const ConfocalPoint q = confocal_from_cartesian(ax, {0.5, 0.8, 0.9}, {0, 0, 0}, 0);
  const auto sc = separated_constants(ax, q, 0.7);
  CHECK(sc.g1 == doctest::Approx(-0.7 * q.lambda1));
  CHECK(sc.g2 == doctest::Approx(-0.7 * q.lambda2));
}

TEST_CASE("partial fractions of the separating curve") {
  std::mt19937_64 rng(73);
  const auto s = spec(Case::c112, {1, 2, 3});
  const SeparationAxes ax = separation_axes(s);
  for (int t = 0; t < 20; ++t) {
    const PhasePoint p = random_point(s, rng);
    const auto v = conserved_set(s, p).values;
    const double h = energy(p), J = v.at("J"), G = v.at("G");
    const double g = separation_constant_from_G(ax, G, h, J);
    for (double z : {-0.7, 0.3, 1.5, 2.5, 4.0}) {
      const double r = partial_fraction_residual(ax, {v.at("F0"), v.at("F1")}, G, h, g, J, z);
      CHECK(std::abs(r) < 1e-9 * (1 + std::abs(G) + J * J));
    }
  }
}

TEST_CASE("separated constants are conserved along the flow") {
  std::mt19937_64 rng(79);
  const auto s = spec(Case::c211, {1, 2, 3});
  const SeparationAxes ax = separation_axes(s);
  const Trajectory tr = integrate(s, random_point(s, rng, 1.0), 30, 1e-11);
  const double g0 = separated_constants(ax, confocal_from_reduced(ax, reduce(s, tr.points.front())), 1.0).g1;
  double worst = 0;
  for (const auto& p : tr.points) {
    const auto sc = separated_constants(ax, confocal_from_reduced(ax, reduce(s, p)), energy(p));
    worst = std::max({worst, std::abs(sc.g1 - g0), std::abs(sc.g2 - g0)});
  }
  CHECK(worst < 1e-7 * (1 + std::abs(g0)));
}

TEST_CASE("confocal chart refuses coordinate planes") {
  const auto ax = separation_axes(spec(Case::c112, {1, 2, 3}));
  CHECK_THROWS_AS(confocal_from_cartesian(ax, {0, 1, 1}, {0, 0, 0}, 0), Error);
  CHECK_THROWS_AS(separation_axes(spec(Case::c22, {1, 2})), Error);
  CHECK_THROWS_AS(momentum_polynomial(ax, 1, 0, 0, ax.a[1]), Error);
}
