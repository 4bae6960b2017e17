#include "geoflow/actions.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "geoflow/core.hpp"
#include "geoflow/elliptic.hpp"

namespace geoflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

template <class F>
double integrate_quarter(F f) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, kPi / 2, 15, 1e-14);
}

void check_axes(double a1, double a2) {
  if (!(a1 > 0) || !(a2 > a1)) throw Error(ErrorKind::invalid_spec, "c22 actions need 0 < a1 < a2");
}

// Signed distance of (j1, j2) inside the polygon, in units of sqrt(2h).
double polygon_margin(double a1, double a2, double h, double j1, double j2) {
  return 1.0 - (std::abs(j1) / std::sqrt(a1) + std::abs(j2) / std::sqrt(a2)) / std::sqrt(2 * h);
}

}  // namespace

EllipticArgs branch_roots(double a1, double a2, double h, double j1, double j2) {
  check_axes(a1, a2);
  if (!(h > 0)) throw Error(ErrorKind::domain, "energy must be positive");
  if (polygon_margin(a1, a2, h, j1, j2) < -1e-14) throw Error(ErrorKind::domain, "momenta outside the polygon");
  const double b = (a1 * j2 * j2 - a2 * j1 * j1 - 2 * h * a1 * a2) / (2 * h * a2);
  const double c = j1 * j1 * a1 / (2 * h);
  const double disc = b * b - 4 * c;
  if (disc < -1e-13 * b * b) throw Error(ErrorKind::domain, "complex branch roots");
  const double sq = std::sqrt(std::max(disc, 0.0));
  EllipticArgs e;
  // Stable pair: the larger root from the sum, the smaller from the product.
  e.s2sq = (-b + sq) / 2;
  e.s1sq = e.s2sq > 0 ? c / e.s2sq : 0.0;
  if (j2 == 0) e.s2sq = a1;
  const double d = a2 - a1;
  const double at2 = a1 * a1 + d * e.s2sq;
  e.k2 = d * (e.s2sq - e.s1sq) / at2;
  e.alpha2 = e.s1sq > 0 ? -a1 * a1 * e.k2 / (e.s1sq * d) : -std::numeric_limits<double>::infinity();
  e.beta2 = a1 * a2 * e.k2 / ((a1 - e.s1sq) * d);
  return e;
}

double pphi_squared(double a1, double a2, double h, double j1, double j2, double phi) {
  const double s = std::sin(phi), c = std::cos(phi);
  const double d = a1 * s * s + a2 * c * c;
  return d * (2 * h - j1 * j1 / (a1 * c * c) - j2 * j2 / (a2 * s * s));
}

double action_I(double a1, double a2, double h, double j1, double j2, ActionMethod method) {
  const EllipticArgs e = branch_roots(a1, a2, h, j1, j2);
  const double width = e.s2sq - e.s1sq;
  if (width <= 0 || polygon_margin(a1, a2, h, j1, j2) <= 0) return 0.0;
  const double d = a2 - a1;
  if (method == ActionMethod::quadrature) {
    // s^2 = w = s1^2 + (s2^2 - s1^2) sin^2 u removes the square-root endpoint singularities.
    auto f = [&](double u) {
      const double su = std::sin(u), cu = std::cos(u);
      const double w = e.s1sq + width * su * su;
      const double rest = (a1 - e.s2sq) + width * cu * cu;  // a1 - w without cancellation
      return width * width * su * su * cu * cu * std::sqrt(a1 + w * d / a1) / (w * rest);
    };
    return 2.0 / kPi * std::sqrt(2 * h) * integrate_quarter(f);
  }
  const double at1 = a1 * a1 + d * e.s1sq;
  const double at2 = a1 * a1 + d * e.s2sq;
  double v = std::sqrt(at2) * ellint_e(e.k2);
  if (j1 != 0) v -= at1 * e.s2sq / (a1 * std::sqrt(at2)) * ellint_pi(e.alpha2, e.k2);
  if (j2 != 0) v += (e.s2sq - a1) * at1 / (a1 * std::sqrt(at2)) * ellint_pi(e.beta2, e.k2);
  return 4 * std::sqrt(2 * h) / (2 * kPi * std::sqrt(a1)) * v;
}

double dI_dJ(double a1, double a2, double h, double j1, double j2, int which) {
  if (which != 1 && which != 2) throw Error(ErrorKind::index_range, "which must be 1 or 2");
  if (j1 == 0 || j2 == 0) throw Error(ErrorKind::axis_limit, "derivative on an axis; use the one-sided limits");
  const EllipticArgs e = branch_roots(a1, a2, h, j1, j2);
  const double width = e.s2sq - e.s1sq;
  if (width <= 0) throw Error(ErrorKind::domain, "derivative undefined on the polygon boundary");
  const double d = a2 - a1;
  // Both integrands peak where w meets a pole (w = 0 resp. w = a1). The substitution
  // tan u = kappa tan t with kappa = eps / sqrt(eps^2 + width) turns du / (eps^2 + width sin^2 u)
  // into dt / (eps sqrt(eps^2 + width)), leaving a smooth integrand.
  auto sqrt_d = [&](double w) { return std::sqrt(a1 + w * d / a1); };
  if (which == 1) {
    const double eps2 = e.s1sq, tot = e.s2sq;
    const double kap2 = eps2 / tot;
    auto f = [&](double t) {
      const double c = std::cos(t), s = std::sin(t);
      return sqrt_d(eps2 / (c * c + kap2 * s * s));
    };
    return -2 * j1 / (kPi * std::sqrt(2 * h)) * integrate_quarter(f) / std::sqrt(eps2 * tot);
  }
  const double eps2 = a1 - e.s2sq, tot = a1 - e.s1sq;
  const double kap2 = eps2 / tot;
  auto f = [&](double t) {
    const double c = std::cos(t), s = std::sin(t);
    return sqrt_d(a1 - eps2 / (c * c + kap2 * s * s));
  };
  return -2 * j2 * a1 / (kPi * a2 * std::sqrt(2 * h)) * integrate_quarter(f) / std::sqrt(eps2 * tot);
}

IntMatrix3 int_identity() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

IntMatrix3 int_multiply(const IntMatrix3& a, const IntMatrix3& b) {
  IntMatrix3 r{};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) r[i][k] += a[i][j] * b[j][k];
  return r;
}

long int_determinant(const IntMatrix3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

IntMatrix3 int_inverse(const IntMatrix3& m) {
  const long det = int_determinant(m);
  if (det != 1 && det != -1) throw Error(ErrorKind::domain, "matrix is not unimodular");
  IntMatrix3 r{};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      const int r0 = (k + 1) % 3, r1 = (k + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      r[i][k] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) * det;
    }
  return r;
}

GluingSet transition_matrices(bool as_displayed) {
  GluingSet g;
  g.s1 = {{{-1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  g.s2 = {{{1, 0, 0}, {0, -1, 0}, {0, 0, 1}}};
  const long m1 = as_displayed ? 2 : -2;
  g.m1 = {{{1, 0, 0}, {0, 1, 0}, {m1, 0, 1}}};
  g.m2 = g.m1;
  g.m3 = {{{1, 0, 0}, {0, 1, 0}, {0, -2, 1}}};
  g.m4 = g.m3;
  const auto m4s2 = int_multiply(g.m4, g.s2);
  const auto m2s1 = int_multiply(g.m2, g.s1);
  const auto m3s2 = int_multiply(g.m3, g.s2);
  const auto m1s1 = int_multiply(g.m1, g.s1);
  g.total = int_multiply(int_multiply(int_inverse(m4s2), int_inverse(m2s1)), int_multiply(m3s2, m1s1));
  return g;
}

std::string quadrant_of(double j1, double j2) {
  return std::string(j1 < 0 ? "-" : "+") + (j2 < 0 ? "-" : "+");
}

namespace {

std::array<double, 3> transform(const IntMatrix3& m, const std::array<double, 3>& v) {
  std::array<double, 3> r{};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) r[i] += static_cast<double>(m[i][k]) * v[k];
  return r;
}

}  // namespace

std::array<double, 3> smooth_action(double a1, double a2, double h, double j1, double j2) {
  const GluingSet g = transition_matrices();
  const double I = action_I(a1, a2, h, j1, j2, ActionMethod::legendre);
  // Natural vector of quadrant ++ at the reflected momenta.
  const std::array<double, 3> v{std::abs(j1), std::abs(j2), I};
  const std::string q = quadrant_of(j1, j2);
  const IntMatrix3 m1s1 = int_multiply(g.m1, g.s1);
  const IntMatrix3 m3s2m1s1 = int_multiply(int_multiply(g.m3, g.s2), m1s1);
  if (q == "++") return v;
  if (q == "-+") return transform(m1s1, v);
  if (q == "--") return transform(m3s2m1s1, v);
  return transform(int_multiply(int_inverse(int_multiply(g.m2, g.s1)), m3s2m1s1), v);
}

ActionGrid energy_surface_grid(double a1, double a2, double h, std::size_t n) {
  if (n < 3) throw Error(ErrorKind::invalid_spec, "grid needs n >= 3");
  ActionGrid g;
  g.n = n;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = -0.95 + 1.9 * static_cast<double>(i) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
      const double q = -0.95 + 1.9 * static_cast<double>(k) / static_cast<double>(n - 1);
      double u = 0.5 * (p + q), v = 0.5 * (p - q);
      if (std::abs(u) < 1e-15) u = 0;
      if (std::abs(v) < 1e-15) v = 0;
      const double j1 = std::sqrt(2 * h * a1) * u, j2 = std::sqrt(2 * h * a2) * v;
      const double I = action_I(a1, a2, h, j1, j2, ActionMethod::legendre);
      g.j1.push_back(j1);
      g.j2.push_back(j2);
      g.I.push_back(I);
      g.I_shifted.push_back(I + std::abs(j1) + std::abs(j2));
    }
  }
  return g;
}

Mesh action_mesh(const ActionGrid& g, bool shifted) {
  Mesh m;
  for (std::size_t i = 0; i < g.j1.size(); ++i) m.vertices.push_back({g.j1[i], g.j2[i], shifted ? g.I_shifted[i] : g.I[i]});
  const int n = static_cast<int>(g.n);
  for (int i = 0; i + 1 < n; ++i)
    for (int k = 0; k + 1 < n; ++k) {
      const int a = i * n + k, b = a + 1, c = a + n, d = c + 1;
      m.triangles.push_back({a, b, d});
      m.triangles.push_back({a, d, c});
    }
  return m;
}

}  // namespace geoflow
