#include "doctest.h"

#include <cmath>

#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/ellint_2.hpp>
#include <boost/math/special_functions/ellint_3.hpp>
#include <boost/math/special_functions/ellint_rd.hpp>
#include <boost/math/special_functions/ellint_rf.hpp>
#include <boost/math/special_functions/ellint_rj.hpp>

#include "geoflow/core.hpp"
#include "geoflow/elliptic.hpp"

using namespace geoflow;

TEST_CASE("Carlson forms against Boost") {
  const double pts[][4] = {{0.5, 1.0, 2.0, 3.0}, {0.0, 0.3, 1.0, 0.7}, {1e-3, 2.0, 5.0, 0.01}, {4.0, 4.0, 4.0, 4.0}};
  for (const auto& v : pts) {
    CHECK(carlson_rf(v[0], v[1], v[2]) == doctest::Approx(boost::math::ellint_rf(v[0], v[1], v[2])).epsilon(1e-14));
    CHECK(carlson_rd(v[0], v[1], v[2]) == doctest::Approx(boost::math::ellint_rd(v[0], v[1], v[2])).epsilon(1e-14));
    CHECK(carlson_rj(v[0], v[1], v[2], v[3]) ==
          doctest::Approx(boost::math::ellint_rj(v[0], v[1], v[2], v[3])).epsilon(1e-13));
  }
  CHECK(carlson_rc(1.0, 2.0) == doctest::Approx(std::acos(-1.0) / 4).epsilon(1e-14));
}

TEST_CASE("complete integrals against Boost") {
  for (double m : {0.0, 0.1, 0.5, 0.9, 0.999}) {
    const double k = std::sqrt(m);
    CHECK(ellint_k(m) == doctest::Approx(boost::math::ellint_1(k)).epsilon(1e-13));
    CHECK(ellint_e(m) == doctest::Approx(boost::math::ellint_2(k)).epsilon(1e-13));
    for (double n : {-3.0, -0.5, 0.0, 0.4, 0.95})
      CHECK(ellint_pi(n, m) == doctest::Approx(boost::math::ellint_3(k, n)).epsilon(1e-12));
  }
  CHECK(elliptic_complete(EllipticKind::Pi, 0.3, 0.2) == ellint_pi(0.2, 0.3));
}

TEST_CASE("near the logarithmic end and above the pole") {
  // Reference values from mpmath at 40 digits. For n > 1 the principal value is the real part of
  // mpmath's continuation.
  const double m = 0.999999;
  CHECK(ellint_k(m) == doctest::Approx(8.2940514636010622019).epsilon(1e-13));
  CHECK(ellint_e(m) == doctest::Approx(1.000003897026172166).epsilon(1e-13));
  CHECK(ellint_pi(-3, m) == doctest::Approx(2.5269620329475179537).epsilon(1e-13));
  CHECK(ellint_pi(-0.5, m) == doctest::Approx(5.8195067902301855236).epsilon(1e-13));
  CHECK(ellint_pi(0.4, m) == doctest::Approx(13.037598727960710593).epsilon(1e-13));
  CHECK(ellint_pi(0.95, m) == doctest::Approx(123.41974301251759348).epsilon(1e-12));

  const double pv[][3] = {{0.2, 1.5, -0.126657489153535276663}, {0.2, 3.0, -0.0599029393648356388276},
                          {0.2, 10.0, -0.0173215494173269328044}, {0.7, 1.5, -0.901995814430225510872},
                          {0.7, 3.0, -0.342011195506718029783}, {0.7, 10.0, -0.0882699247414981751566}};
  for (const auto& r : pv) CHECK(ellint_pi(r[1], r[0]) == doctest::Approx(r[2]).epsilon(1e-13));
}

TEST_CASE("limits and domain") {
  CHECK(ellint_k(0) == doctest::Approx(std::acos(-1.0) / 2));
  CHECK(ellint_e(0) == doctest::Approx(std::acos(-1.0) / 2));
  CHECK(ellint_e(1 - 1e-14) == doctest::Approx(1).epsilon(1e-10));
  CHECK_THROWS_AS(ellint_k(1.0), Error);
  CHECK_THROWS_AS(ellint_k(1.5), Error);
  CHECK_THROWS_AS(carlson_rf(-1, 1, 1), Error);
}
