#include "doctest.h"
#include "helpers.hpp"

#include "geoflow/conserved.hpp"
#include "geoflow/sections.hpp"

using namespace geoflow;
using testing_support::spec;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr std::array<double, 3> kA{1, 2, 3};
}  // namespace

TEST_CASE("section curve values") {
  CHECK(section_pphi_squared(kA, 1, 0, 0) == doctest::Approx(3));
  for (double j : {0.0, 0.5, 1.2}) CHECK(std::abs(section_pphi_squared(kA, 1, j, kPi / 2)) < 1e-15);
  const auto c = analytic_section_curve(kA, 1, 0.5, 50);
  CHECK(c.samples.size() == 100);
  CHECK(c.g == doctest::Approx(3 - 0.25 / 6));
  CHECK(c.phi_min + c.phi_max == doctest::Approx(kPi));
  CHECK_THROWS_AS(analytic_section_curve(kA, 1, 2.0, 50), Error);
}

TEST_CASE("atoms") {
  CHECK(classify_atom(analytic_section_curve(kA, 1, 0.5), false) == Atom::B);
  CHECK(classify_atom(analytic_section_curve(kA, 1, 0.0), false) == Atom::C2);
  CHECK(classify_atom(analytic_section_curve(kA, 1, 0.0), true) == Atom::B);
  CHECK(classify_atom(analytic_section_curve(kA, 1, std::sqrt(3.0)), false) == Atom::point);
  CHECK(lobe_separation(analytic_section_curve(kA, 1, 0.0)) == 0.0);
  CHECK(lobe_separation(analytic_section_curve(kA, 1, 1.0)) > lobe_separation(analytic_section_curve(kA, 1, 0.5)));
}

TEST_CASE("section seeds lie on the singular level") {
  const auto s = spec(Case::c112, {1, 2, 3});
  const auto seeds = separatrix_seeds(s, 1, 0.5, 8);
  REQUIRE(seeds.size() == 8);
  for (const auto& p : seeds) {
    CHECK(is_constrained(s, p));
    const auto em = energy_momentum(s, p);
    CHECK(em.h == doctest::Approx(1).epsilon(1e-10));
    CHECK(em.j == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(em.g == doctest::Approx(3 - 0.25 / 6).epsilon(1e-9));
    const auto q = section_coordinates(s, p);
    CHECK(q[1] * q[1] == doctest::Approx(section_pphi_squared(kA, 1, 0.5, q[0])).epsilon(1e-9).scale(1));
  }
}

TEST_CASE("numeric crossings follow the analytic curve") {
  const auto s = spec(Case::c112, {1, 2, 3});
  const auto curve = analytic_section_curve(kA, 1, 0.5);
  const auto pts = numeric_section(s, separatrix_seeds(s, 1, 0.5, 6), 20, 1e-11);
  CHECK(pts.size() >= 6);
  for (const auto& p : pts) CHECK(distance_to_curve(curve, p.phi, p.pphi) < 1e-6);
  // A nearby regular level misses the separatrix.
  PhasePoint off = section_seed(s, 1, 0.5, 1.0, 0.9 * std::sqrt(section_pphi_squared(kA, 1, 0.5, 1.0)));
  off = project(s, off);
  const auto reg = numeric_section(s, {off}, 30, 1e-11);
  REQUIRE(!reg.empty());
  double nearest = 1e300;
  for (const auto& p : reg) nearest = std::min(nearest, std::abs(p.phi - kPi / 2) + std::abs(p.pphi));
  CHECK(nearest > 1e-3);
}

TEST_CASE("distance oracle") {
  const auto curve = analytic_section_curve(kA, 1, 0.5);
  const double phi = 1.0, p = std::sqrt(section_pphi_squared(kA, 1, 0.5, phi));
  CHECK(distance_to_curve(curve, phi, p) < 1e-12);
  CHECK(distance_to_curve(curve, phi, -p) < 1e-12);
  CHECK(distance_to_curve(curve, phi, p + 0.01) == doctest::Approx(0.01).epsilon(0.2));
}
