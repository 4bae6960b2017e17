#include "doctest.h"
#include "helpers.hpp"

#include <sstream>

#include "geoflow/integrator.hpp"

using namespace geoflow;
using testing_support::spec;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("stepper reproduces a harmonic oscillator") {
  // Four independent oscillators with frequencies 1..4: z_i' = w_i z_{i+4}, z_{i+4}' = -w_i z_i.
  auto f = [](const State& z) {
    State d;
    for (int i = 0; i < 4; ++i) {
      d[i] = (i + 1) * z[i + 4];
      d[i + 4] = -(i + 1) * z[i];
    }
    return d;
  };
  State y0 = State::Zero();
  for (int i = 0; i < 4; ++i) y0[i] = 1;
  Dop853 s(f, y0, 0, 10, 1e-12);
  double worst_dense = 0;
  while (s.step()) {
    const double tm = 0.5 * (s.t_old() + s.t());
    const State d = s.dense(tm);
    for (int i = 0; i < 4; ++i) worst_dense = std::max(worst_dense, std::abs(d[i] - std::cos((i + 1) * tm)));
  }
  for (int i = 0; i < 4; ++i) {
    CHECK(s.y()[i] == doctest::Approx(std::cos((i + 1) * 10.0)).epsilon(1e-9));
    CHECK(s.y()[i + 4] == doctest::Approx(-std::sin((i + 1) * 10.0)).epsilon(1e-9));
  }
  CHECK(worst_dense < 1e-9);
  CHECK(s.steps() > 10);
}

TEST_CASE("rest points stay put") {
  const auto s = spec(Case::c22, {1, 2});
  const PhasePoint p{{1, 0, 0, 0}, {0, 0, 0, 0}};
  const Trajectory t = integrate(s, p, 5, 1e-10);
  for (const auto& q : t.points)
    for (int i = 0; i < 4; ++i) {
      CHECK(q.x[i] == p.x[i]);
      CHECK(q.y[i] == 0.0);
    }
  for (const auto& [label, v] : t.drift.relative) CHECK(v == 0.0);
}

TEST_CASE("integrals are conserved over long runs") {
  std::mt19937_64 rng(41);
  for (auto [c, d] : testing_support::all_cases()) {
    const auto s = spec(c, d);
    const Trajectory t = integrate(s, random_point(s, rng, 0.5), 100, 1e-10);
    CHECK_MESSAGE(t.drift.max_relative() < 1e-8, to_string(c));
    CHECK(t.drift.max_sample_constraint < 1e-10);
    CHECK(t.times.front() == 0.0);
    CHECK(t.times.back() == doctest::Approx(100));
    // Recomputing the report from the samples gives the same numbers.
    const DriftReport again = drift_report(t);
    CHECK(again.max_relative() == doctest::Approx(t.drift.max_relative()));
  }
}

TEST_CASE("tighter tolerance lowers drift") {
  std::mt19937_64 rng(43);
  const auto s = spec(Case::c112, {1, 2, 3});
  const PhasePoint p = random_point(s, rng, 1.0);
  const double d6 = integrate(s, p, 50, 1e-6).drift.max_relative();
  const double d8 = integrate(s, p, 50, 1e-8).drift.max_relative();
  const double d10 = integrate(s, p, 50, 1e-10).drift.max_relative();
  CHECK(d8 < d6);
  CHECK(d10 < d8);
}

TEST_CASE("time reversal returns to the start") {
  std::mt19937_64 rng(47);
  const auto s = spec(Case::generic, {0.25, 0.5, 1, 2});
  const PhasePoint p = random_point(s, rng, 0.5);
  const Trajectory fw = integrate(s, p, 20, 1e-12);
  PhasePoint back = fw.points.back();
  for (auto& v : back.y) v = -v;
  const Trajectory bw = integrate(s, back, 20, 1e-12);
  for (int i = 0; i < 4; ++i) {
    CHECK(bw.points.back().x[i] == doctest::Approx(p.x[i]).epsilon(1e-7));
    CHECK(-bw.points.back().y[i] == doctest::Approx(p.y[i]).epsilon(1e-7));
  }
}

TEST_CASE("crossings along a great circle") {
  // alpha0 = alpha1 = 1: the unit circle in the (x0, x1) plane is a geodesic with x0 = cos t.
  const auto s = spec(Case::c211, {1, 2, 3});
  const PhasePoint p{{1, 0, 0, 0}, {0, 1, 0, 0}};
  auto ev = [](const State& z) { return z[0]; };
  const auto up = find_crossings(s, p, 20, 1e-12, ev, +1);
  REQUIRE(up.size() == 3);
  for (std::size_t k = 0; k < up.size(); ++k) CHECK(up[k].t == doctest::Approx(1.5 * kPi + 2 * kPi * k).epsilon(1e-10));
  const auto both = find_crossings(s, p, 20, 1e-12, ev, 0);
  CHECK(both.size() == 6);
  CHECK(both.front().t == doctest::Approx(0.5 * kPi).epsilon(1e-10));
  CHECK(find_crossings(s, p, 20, 1e-12, ev, -1, 2).size() == 2);
}

TEST_CASE("trajectory CSV") {
  const auto s = spec(Case::c22, {1, 2});
  IntegrateOptions opt;
  opt.samples = 3;
  std::mt19937_64 rng(1);
  const Trajectory t = integrate(s, random_point(s, rng), 1, opt);
  std::ostringstream os;
  write_trajectory_csv(os, t);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,x0,x1,x2,x3,y0,y1,y2,y3");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("integrator rejects bad input") {
  const auto s = spec(Case::c22, {1, 2});
  std::mt19937_64 rng(1);
  const PhasePoint p = random_point(s, rng);
  CHECK_THROWS_AS(integrate(s, p, 1, -1.0), Error);
  CHECK_THROWS_AS(integrate(s, p, 1, 1e-2), Error);
  PhasePoint off = p;
  off.x[0] += 1e-3;
  CHECK_THROWS_AS(integrate(s, off, 1, 1e-10), Error);
}
