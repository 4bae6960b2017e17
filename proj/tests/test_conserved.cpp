#include "doctest.h"
#include "helpers.hpp"

#include "geoflow/conserved.hpp"

using namespace geoflow;
using testing_support::spec;

TEST_CASE("conserved values at hand-checked points") {
  const auto s22 = make_spec(Case::c22, {1, 1, 2, 2});
  const PhasePoint p22{{1, 0, 0, 0}, {0, 0, 1, 0}};
  auto c = conserved_set(s22, p22);
  CHECK(c.h == doctest::Approx(0.5));
  CHECK(c.values.at("J1") == doctest::Approx(0));
  CHECK(c.values.at("J2") == doctest::Approx(0));
  CHECK(c.values.at("G1") == doctest::Approx(-1));
  CHECK(c.values.at("G2") == doctest::Approx(2));
  const auto em = energy_momentum(s22, p22);
  CHECK(em.h == doctest::Approx(0.5));
  CHECK(em.j1 == 0.0);
  CHECK(em.j2 == 0.0);

  // c112: F0 = L02^2 / (a0 - a2) = 2 / (1 - 3) = -1, F1 = 0, and G closes 2H = F0 + F1 + G.
  c = conserved_set(make_spec(Case::c112, {1, 2, 3, 3}), {{1, 0, 0, 0}, {0, 0, std::sqrt(2.0), 0}});
  CHECK(c.h == doctest::Approx(1));
  CHECK(c.values.at("J") == doctest::Approx(0));
  CHECK(c.values.at("F0") == doctest::Approx(-1));
  CHECK(c.values.at("F1") == doctest::Approx(0));
  CHECK(c.values.at("G") == doctest::Approx(3));

  c = conserved_set(make_spec(Case::c13, {1, 2, 2, 2}), {{0, std::sqrt(2.0), 0, 0}, {0, 0, std::sqrt(2.0), 0}});
  CHECK(c.h == doctest::Approx(1));
  CHECK(c.values.at("L12") == doctest::Approx(2));
  CHECK(c.values.at("L13") == doctest::Approx(0));
  CHECK(c.values.at("L23") == doctest::Approx(0));
  CHECK(c.values.at("J") == doctest::Approx(2));
}

TEST_CASE("relations hold at random points and vanish exactly at rest") {
  std::mt19937_64 rng(17);
  for (auto [cs, d] : testing_support::all_cases()) {
    const auto s = spec(cs, d);
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
      const PhasePoint p = random_point(s, rng);
      for (const auto& [label, r] : relation_residuals(s, p))
        worst = std::max(worst, std::abs(r) / (1 + energy(p)));
    }
    CHECK_MESSAGE(worst < 1e-10, to_string(cs));

    PhasePoint rest = random_point(s, rng);
    rest.y = {};
    for (const auto& [label, r] : relation_residuals(s, rest)) CHECK(r == 0.0);
  }
}

TEST_CASE("integrals commute with H and are Casimir-blind") {
  std::mt19937_64 rng(23);
  for (auto [cs, d] : testing_support::all_cases()) {
    const auto s = spec(cs, d);
    const auto ints = declared_integrals(s);
    const auto H = obs::hamiltonian();
    const auto C1 = obs::c1(s.alphas), C2 = obs::c2(s.alphas);
    double comm = 0, cas = 0, anti = 0;
    for (int t = 0; t < 200; ++t) {
      const State z = to_state(random_point(s, rng));
      for (const auto& f : ints) {
        comm = std::max(comm, std::abs(poisson_bracket(s.alphas, H, f, z)));
        cas = std::max({cas, std::abs(poisson_bracket(s.alphas, C1, f, z)),
                        std::abs(poisson_bracket(s.alphas, C2, f, z))});
        anti = std::max(anti, std::abs(poisson_bracket(s.alphas, f, H, z) + poisson_bracket(s.alphas, H, f, z)));
      }
    }
    CHECK_MESSAGE(comm < 1e-9, to_string(cs));
    CHECK_MESSAGE(cas < 1e-10, to_string(cs));
    CHECK(anti == 0.0);
  }
}

TEST_CASE("SO(3) non-involutivity witness") {
  const auto s = spec(Case::c13, {1, 2});
  const auto L12 = obs::angular_momentum(1, 2), L13 = obs::angular_momentum(1, 3);
  std::mt19937_64 rng(29);
  for (int t = 0; t < 100; ++t) {
    const PhasePoint p = random_point(s, rng);
    const double l23 = p.x[2] * p.y[3] - p.x[3] * p.y[2];
    CHECK(std::abs(poisson_bracket(s, L12, L13, p) - l23) < 1e-10);
  }
}

TEST_CASE("finite-difference gradients agree with analytic ones") {
  std::mt19937_64 rng(31);
  const auto s = spec(Case::c22, {1, 2});
  for (const auto& f : declared_integrals(s)) {
    Observable fd{f.name, f.value, {}};
    const State z = to_state(random_point(s, rng));
    CHECK(testing_support::max_abs(gradient_of(fd, z) - gradient_of(f, z)) < 1e-7);
  }
}

TEST_CASE("SO(3) momentum bound") {
  for (auto [cs, bound] : {std::pair{Case::c13, 4.0}, {Case::c31, 2.0}}) {
    const auto s = cs == Case::c13 ? spec(cs, {1, 2}) : spec(cs, {1, 2});
    CHECK(2 * alpha_rev(s) == doctest::Approx(bound));
    std::mt19937_64 rng(37);
    double top = 0;
    for (int t = 0; t < 100000; ++t) {
      const auto em = energy_momentum(s, random_point(s, rng, 1.0));
      top = std::max(top, em.j * em.j);
    }
    CHECK(top <= bound * (1 + 1e-12));
  }
}

TEST_CASE("generic integrals refuse coinciding axes") {
  CHECK_THROWS_AS(obs::generic_integral({1, 1, 2, 3}, 0), Error);
}
