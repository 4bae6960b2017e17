#include "doctest.h"

#include <cmath>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "geoflow/actions.hpp"
#include "geoflow/core.hpp"

using namespace geoflow;

namespace {
constexpr double kPi = 3.14159265358979323846;

// (2/pi) times the integral of p_phi over the allowed phi interval, straight from the chart.
double action_by_phi(double a1, double a2, double h, double j1, double j2) {
  const auto e = branch_roots(a1, a2, h, j1, j2);
  const double lo = std::acos(std::sqrt(e.s2sq / a1)), hi = std::acos(std::sqrt(e.s1sq / a1));
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [&](double phi) { return std::sqrt(std::max(0.0, pphi_squared(a1, a2, h, j1, j2, phi))); };
  return 2.0 / kPi * ts.integrate(f, lo, hi, 1e-13);
}
}  // namespace

TEST_CASE("branch roots") {
  const auto e = branch_roots(1, 2, 1, 1, 0.4);
  CHECK(e.s1sq == doctest::Approx(0.548616).epsilon(1e-5));
  CHECK(e.s2sq == doctest::Approx(0.911384).epsilon(1e-5));
  for (double s2 : {e.s1sq, e.s2sq}) {
    const double phi = std::acos(std::sqrt(s2));
    CHECK(std::abs(pphi_squared(1, 2, 1, 1, 0.4, phi)) < 1e-12);
  }
  CHECK(branch_roots(1, 2, 1, 1e-9, 0.4).s1sq < 1e-15);
  CHECK(branch_roots(1, 2, 1, 1, 0).s2sq == 1.0);
  CHECK_THROWS_AS(branch_roots(1, 2, 1, 2, 2), Error);
  CHECK_THROWS_AS(branch_roots(2, 1, 1, 0.1, 0.1), Error);
}

TEST_CASE("three routes to the action agree") {
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (int t = 0; t < 40; ++t) {
    const double p = u(rng), q = u(rng);
    const double j1 = std::sqrt(2.0) * 0.5 * (p + q), j2 = 2.0 * 0.5 * (p - q);
    if (j1 == 0 || j2 == 0) continue;
    const double L = action_I(1, 2, 1, j1, j2, ActionMethod::legendre);
    const double Q = action_I(1, 2, 1, j1, j2, ActionMethod::quadrature);
    CHECK(L == doctest::Approx(Q).epsilon(1e-10));
    CHECK(L == doctest::Approx(action_by_phi(1, 2, 1, j1, j2)).epsilon(1e-8));
  }
}

TEST_CASE("action on the boundary and under scaling") {
  CHECK(action_I(1, 2, 1, std::sqrt(2.0), 0, ActionMethod::legendre) == 0.0);
  CHECK(action_I(1, 2, 1, 0, 2, ActionMethod::legendre) == 0.0);
  CHECK(action_I(1, 2, 1, std::sqrt(2.0) / 2, 1, ActionMethod::quadrature) == 0.0);
  const double I = action_I(1, 2, 1, 0.3, -0.5, ActionMethod::legendre);
  CHECK(action_I(1, 2, 4, 0.6, -1.0, ActionMethod::legendre) == doctest::Approx(2 * I).epsilon(1e-12));
  CHECK(I == doctest::Approx(action_I(1, 2, 1, -0.3, 0.5, ActionMethod::legendre)).epsilon(1e-14));
}

TEST_CASE("derivatives against finite differences") {
  const double step = 1e-5;
  for (auto [j1, j2] : {std::pair{0.3, 0.5}, {-0.7, 0.2}, {0.1, -1.1}, {-0.4, -0.4}}) {
    for (int w : {1, 2}) {
      auto I = [&](double d) {
        return action_I(1, 2, 1, j1 + (w == 1 ? d : 0), j2 + (w == 2 ? d : 0), ActionMethod::legendre);
      };
      const double fd = (I(step) - I(-step)) / (2 * step);
      CHECK(dI_dJ(1, 2, 1, j1, j2, w) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
  CHECK_THROWS_AS(dI_dJ(1, 2, 1, 0, 0.5, 1), Error);
  CHECK_THROWS_AS(dI_dJ(1, 2, 1, 0.2, 0.5, 3), Error);
}

TEST_CASE("one-sided derivative limits at the axes") {
  // Away from the axis the J1 slope tends to -sign(J1), and the J2 slope to -sign(J2).
  CHECK(dI_dJ(1, 2, 1, 1e-5, 0.5, 1) == doctest::Approx(-1).epsilon(1e-3));
  CHECK(dI_dJ(1, 2, 1, -1e-5, 0.5, 1) == doctest::Approx(1).epsilon(1e-3));
  CHECK(dI_dJ(1, 2, 1, 0.4, 1e-5, 2) == doctest::Approx(-1).epsilon(1e-3));
  CHECK(dI_dJ(1, 2, 1, 0.4, -1e-5, 2) == doctest::Approx(1).epsilon(1e-3));
}

TEST_CASE("gluing matrices") {
  for (bool shown : {false, true}) {
    const GluingSet g = transition_matrices(shown);
    CHECK(g.total == int_identity());
    for (const auto& m : {g.s1, g.s2, g.m1, g.m2, g.m3, g.m4}) CHECK(std::abs(int_determinant(m)) == 1);
    CHECK(int_multiply(g.m1, int_inverse(g.m1)) == int_identity());
  }
  CHECK(transition_matrices(false).m1[2][0] == -2);
  CHECK(transition_matrices(true).m1[2][0] == 2);
  CHECK(transition_matrices(false).m3[2][1] == -2);
  CHECK_THROWS_AS(int_inverse({{{2, 0, 0}, {0, 1, 0}, {0, 0, 1}}}), Error);
}

TEST_CASE("glued action is C1 across the axes") {
  const double d = 1e-4;
  auto slope_gap = [&](double j1, double j2, int w) {
    auto I = [&](double s) { return smooth_action(1, 2, 1, j1 + (w == 1 ? s : 0), j2 + (w == 2 ? s : 0))[2]; };
    const double right = (I(2 * d) - I(d)) / d, left = (I(-d) - I(-2 * d)) / d;
    return std::abs(right - left);
  };
  // One-sided slopes differ by O(d) from curvature; a kink would leave a gap of 2.
  CHECK(slope_gap(0, 0.5, 1) < 1e-2);
  CHECK(slope_gap(0, -0.5, 1) < 1e-2);
  CHECK(slope_gap(0.4, 0, 2) < 1e-2);
  CHECK(slope_gap(-0.4, 0, 2) < 1e-2);
  CHECK(quadrant_of(0, 0) == "++");
  CHECK(quadrant_of(-1, 0) == "-+");
}

TEST_CASE("action grid and mesh") {
  const auto g = energy_surface_grid(1, 2, 1, 5);
  CHECK(g.j1.size() == 25);
  const auto m = action_mesh(g, true);
  CHECK(m.vertices.size() == 25);
  CHECK(m.triangles.size() == 32);
  for (std::size_t i = 0; i < g.I.size(); ++i) {
    CHECK(g.I[i] >= 0);
    CHECK(g.I_shifted[i] == doctest::Approx(g.I[i] + std::abs(g.j1[i]) + std::abs(g.j2[i])));
  }
  CHECK_THROWS_AS(energy_surface_grid(1, 2, 1, 2), Error);
}
