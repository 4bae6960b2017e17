#include "doctest.h"
#include "helpers.hpp"

#include "geoflow/conserved.hpp"
#include "geoflow/integrator.hpp"
#include "geoflow/reduction.hpp"

using namespace geoflow;
using testing_support::spec;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<std::pair<Case, std::vector<double>>> symmetric_cases() {
  auto all = testing_support::all_cases();
  all.erase(all.begin());
  return all;
}
}  // namespace

TEST_CASE("block invariants at hand-checked points") {
  auto inv = invariants(make_spec(Case::c22, {1, 1, 2, 2}), {{1, 0, 0, 0}, {0, 1, 0, 0}});
  REQUIRE(inv.size() == 2);
  CHECK(inv[0].pi1 == 1.0);
  CHECK(inv[0].pi2 == 1.0);
  CHECK(inv[0].pi3 == 0.0);
  CHECK(inv[0].pi4 == 1.0);
  CHECK(inv[1].pi1 == 0.0);
  CHECK(inv[1].pi4 == 0.0);

  inv = invariants(make_spec(Case::c112, {1, 2, 3, 3}), {{0, 0, std::sqrt(3.0), 0}, {1, 0, 0, 0}});
  REQUIRE(inv.size() == 1);
  CHECK(inv[0].pi1 == doctest::Approx(3));
  CHECK(inv[0].pi2 == 0.0);
  CHECK(inv[0].pi3 == 0.0);
  CHECK(inv[0].pi4 == 0.0);

  CHECK_THROWS_AS(invariants(make_spec(Case::generic, {1, 2, 3, 4}), {}), Error);
}

TEST_CASE("block relation and reduced quantities at random points") {
  std::mt19937_64 rng(53);
  for (auto [c, d] : symmetric_cases()) {
    const auto s = spec(c, d);
    for (int t = 0; t < 200; ++t) {
      const PhasePoint p = random_point(s, rng);
      for (const auto& b : invariants(s, p)) CHECK(std::abs(b.relation()) < 1e-12 * (1 + b.pi1 * b.pi2));
      const ReducedPoint r = reduce(s, p);
      CHECK(reduced_hamiltonian(r) == doctest::Approx(energy(p)).epsilon(1e-12));
      const auto cas = reduced_casimirs(r);
      CHECK(std::abs(cas[0]) < 1e-12);
      CHECK(std::abs(cas[1]) < 1e-12);
      for (double v : singular_relation_residual(s, p)) CHECK(std::abs(v) < 1e-10);
    }
  }
}

TEST_CASE("lift is a section of reduce") {
  std::mt19937_64 rng(59);
  for (auto [c, d] : symmetric_cases()) {
    const auto s = spec(c, d);
    const PhasePoint p = random_point(s, rng);
    const ReducedPoint r = reduce(s, p);
    const PhasePoint q = lift(s, r);
    CHECK(is_constrained(s, q, 1e-12));
    const ReducedPoint r2 = reduce(s, q);
    for (std::size_t k = 0; k < r.xi.size(); ++k) {
      CHECK(r2.xi[k] == doctest::Approx(r.xi[k]).epsilon(1e-13));
      CHECK(r2.eta[k] == doctest::Approx(r.eta[k]).epsilon(1e-13));
    }
    for (std::size_t b = 0; b < r.momenta.size(); ++b) CHECK(r2.momenta[b] == doctest::Approx(r.momenta[b]));
    if (c == Case::c112 || c == Case::c211 || c == Case::c22) {
      const double g = c == Case::c22 ? conserved_set(s, p).values.at("G1") : conserved_set(s, p).values.at("G");
      CHECK(reduced_integral(r) == doctest::Approx(g).epsilon(1e-11));
    }
  }
}

TEST_CASE("reduced flow is the image of the full flow") {
  std::mt19937_64 rng(61);
  for (auto [c, d] : symmetric_cases()) {
    const auto s = spec(c, d);
    const PhasePoint p = random_point(s, rng, 0.5);
    const double dt = 1e-4;
    const PhasePoint fw = integrate(s, p, dt, 1e-13).points.back();
    const PhasePoint bw = integrate(s, p, -dt, 1e-13).points.back();
    const Eigen::VectorXd fd = (reduced_state(reduce(s, fw)) - reduced_state(reduce(s, bw))) / (2 * dt);
    const Eigen::VectorXd rv = reduced_vector_field(reduce(s, p));
    CHECK_MESSAGE((fd - rv).cwiseAbs().maxCoeff() < 1e-6, to_string(c));
  }
}

TEST_CASE("singular stratum is flagged") {
  const auto s = make_spec(Case::c112, {1, 2, 3, 3});
  const ReducedPoint r = reduce(s, {{1, 0, 0, 0}, {0, 0, 0, std::sqrt(2.0)}});
  CHECK(r.singular);
  CHECK(r.momenta[0] == 0.0);
  CHECK(r.xi[2] == 0.0);
  CHECK(r.eta[2] == 0.0);
}

TEST_CASE("c22 chart") {
  auto q = chart_to_cartesian_22(1, 2, {kPi / 4, 0});
  CHECK(q.xi[0] == doctest::Approx(std::sqrt(0.5)));
  CHECK(q.xi[1] == doctest::Approx(1));
  CHECK(q.eta[0] == 0.0);
  CHECK(q.eta[1] == 0.0);
  CHECK(chart_hamiltonian_22(1, 2, 0, 0, {kPi / 4, 1}) == doctest::Approx(1.0 / 3));
  CHECK(chart_hamiltonian_22(1, 2, 0, 0, {0.3, 0}) == 0.0);
  CHECK_THROWS_AS(chart_hamiltonian_22(1, 2, 0, 1, {0, 0}), Error);

  double worst = 0;
  for (int k = 1; k < 100; ++k) {
    const Chart22 c{kPi / 2 * k / 100, std::sin(k * 0.37)};
    const Chart22 b = cartesian_to_chart_22(1, 2, chart_to_cartesian_22(1, 2, c));
    worst = std::max({worst, std::abs(b.phi - c.phi), std::abs(b.pphi - c.pphi)});
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("SO(3) relation at the axis") {
  CHECK(std::abs(so3_residual(spec(Case::c13, {1, 2}), 0, 0, 1, 2)) < 1e-15);
  CHECK(std::abs(so3_residual(spec(Case::c31, {1, 2}), 0, 0, 1, std::sqrt(2.0))) < 1e-15);
}
