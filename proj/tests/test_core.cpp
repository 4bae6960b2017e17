#include "doctest.h"
#include "helpers.hpp"

#include "geoflow/core.hpp"

using namespace geoflow;
using testing_support::spec;

TEST_CASE("constraint values at hand-checked points") {
  const auto s22 = make_spec(Case::c22, {1, 1, 2, 2});
  auto v = constraint_values(s22, {{1, 0, 0, 0}, {0, 0, 1, 0}});
  CHECK(v.c1 == doctest::Approx(0));
  CHECK(v.c2 == doctest::Approx(0));
  CHECK(v.d == doctest::Approx(1));

  v = constraint_values(make_spec(Case::c112, {1, 2, 3, 3}), {{1, 0, 0, 0}, {0, 1, 0, 0}});
  CHECK(v.d == doctest::Approx(1));

  v = constraint_values(s22, {{0, 0, std::sqrt(2.0), 0}, {0, 1, 0, 0}});
  CHECK(v.c1 == doctest::Approx(0).epsilon(1e-15));
  CHECK(v.d == doctest::Approx(0.5));
}

TEST_CASE("basis brackets") {
  const auto s = make_spec(Case::c22, {1, 1, 2, 2});
  const PhasePoint p{{1, 0, 0, 0}, {0, 0, 1, 0}};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) CHECK(dirac_bracket_basis(s, p, BracketKind::xx, i, k) == 0.0);
  CHECK(dirac_bracket_basis(s, p, BracketKind::xy, 0, 0) == doctest::Approx(0));
  CHECK(dirac_bracket_basis(s, p, BracketKind::xy, 1, 1) == doctest::Approx(1));
  CHECK_THROWS_AS(dirac_bracket_basis(s, p, BracketKind::yy, 4, 0), Error);
}

TEST_CASE("bracket tensor matches the n-dimensional form and is antisymmetric") {
  std::mt19937_64 rng(3);
  for (auto [c, d] : testing_support::all_cases()) {
    const auto s = spec(c, d);
    for (int t = 0; t < 20; ++t) {
      const State z = to_state(random_point(s, rng));
      const Mat8 P = bracket_tensor(s.alphas, z);
      CHECK((P + P.transpose()).cwiseAbs().maxCoeff() == 0.0);
      const Eigen::MatrixXd Pn = bracket_tensor_n({s.alphas.begin(), s.alphas.end()}, z);
      CHECK((Pn - P).cwiseAbs().maxCoeff() < 1e-14);
      // Casimirs: P grad C = 0.
      CHECK(testing_support::max_abs(P * constraint_gradient_c1(s.alphas, z)) < 1e-12);
      CHECK(testing_support::max_abs(P * constraint_gradient_c2(s.alphas, z)) < 1e-12);
    }
  }
}

TEST_CASE("vector field") {
  const auto s = make_spec(Case::c22, {1, 1, 2, 2});
  const auto v = hamiltonian_vector_field(s, {{1, 0, 0, 0}, {0, 1, 0, 0}});
  CHECK(v.dx[0] == doctest::Approx(0));
  CHECK(v.dx[1] == doctest::Approx(1));
  CHECK(v.dx[2] == doctest::Approx(0));
  CHECK(v.dx[3] == doctest::Approx(0));

  std::mt19937_64 rng(5);
  PhasePoint still = random_point(s, rng);
  still.y = {};
  const auto w = hamiltonian_vector_field(s, still);
  for (int i = 0; i < 4; ++i) {
    CHECK(w.dx[i] == 0.0);
    CHECK(w.dy[i] == 0.0);
  }

  // Tangency to the constraint manifold.
  for (auto [c, d] : testing_support::all_cases()) {
    const auto sp = spec(c, d);
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
      const State z = to_state(random_point(sp, rng));
      const State f = vector_field(sp.alphas, z);
      worst = std::max({worst, std::abs(constraint_gradient_c1(sp.alphas, z).dot(f)),
                        std::abs(constraint_gradient_c2(sp.alphas, z).dot(f))});
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("projection") {
  const auto s = make_spec(Case::c22, {1, 1, 2, 2});
  std::mt19937_64 rng(11);
  const PhasePoint p = random_point(s, rng);
  const PhasePoint q = project(s, p);
  for (int i = 0; i < 4; ++i) {
    CHECK(q.x[i] == doctest::Approx(p.x[i]).epsilon(1e-14));
    CHECK(q.y[i] == doctest::Approx(p.y[i]).epsilon(1e-14));
  }

  const PhasePoint r = project(s, {{1 + 1e-6, 0, 0, 0}, {0, 1, 0, 0}});
  CHECK(std::abs(constraint_values(s, r).c1) < 1e-10);
  CHECK(r.x[0] == doctest::Approx(1).epsilon(1e-12));

  std::normal_distribution<double> n(0, 1e-4);
  for (int t = 0; t < 100; ++t) {
    PhasePoint a = random_point(s, rng), b = a;
    for (int i = 0; i < 4; ++i) {
      b.x[i] += n(rng);
      b.y[i] += n(rng);
    }
    const PhasePoint c = project(s, b);
    const auto cv = constraint_values(s, c);
    CHECK(std::abs(cv.c1) < 1e-10);
    CHECK(std::abs(cv.c2) < 1e-10);
    double dist = 0;
    for (int i = 0; i < 4; ++i) dist = std::max({dist, std::abs(c.x[i] - a.x[i]), std::abs(c.y[i] - a.y[i])});
    CHECK(dist < 1e-3);
  }
  CHECK_THROWS_AS(project(s, {{0, 0, 0, 0}, {0, 0, 0, 0}}), Error);
}

TEST_CASE("spec construction") {
  CHECK(expand_spec(Case::c22, {1, 2}).alphas == Vec4{1, 1, 2, 2});
  CHECK(expand_spec(Case::c112, {1, 2, 3}).alphas == Vec4{1, 2, 3, 3});
  CHECK(expand_spec(Case::c211, {1, 2, 3}).alphas == Vec4{1, 1, 2, 3});
  CHECK(expand_spec(Case::c13, {1, 2}).alphas == Vec4{1, 2, 2, 2});
  CHECK(expand_spec(Case::c31, {1, 2}).alphas == Vec4{1, 1, 1, 2});
  CHECK_THROWS_AS(expand_spec(Case::c22, {2, 1}), Error);
  CHECK_THROWS_AS(expand_spec(Case::c22, {1, 1}), Error);
  CHECK_THROWS_AS(make_spec(Case::c22, {1, 2, 2, 3}), Error);
  CHECK_THROWS_AS(make_spec(Case::generic, {1, 2, 3, -1}), Error);
  for (auto [c, d] : testing_support::all_cases()) CHECK(parse_case(to_string(c)) == c);
  CHECK_THROWS_AS(parse_case("c4"), Error);
}

TEST_CASE("random points sit on the energy level") {
  std::mt19937_64 rng(1);
  const auto s = spec(Case::c112, {1, 2, 3});
  for (int t = 0; t < 50; ++t) {
    const PhasePoint p = random_point(s, rng, 0.7);
    CHECK(energy(p) == doctest::Approx(0.7).epsilon(1e-13));
    CHECK(is_constrained(s, p));
  }
}
