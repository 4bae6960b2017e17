#include "geoflow/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geoflow/core.hpp"

namespace geoflow {

namespace {

constexpr double kTol = 1e-16;

}  // namespace

double carlson_rc(double x, double y) {
  if (!(x >= 0) || !(y > 0)) throw Error(ErrorKind::domain, "RC requires x >= 0, y > 0");
  if (x < y) {
    const double t = (y - x) / x;
    if (x > 0 && t < 1e-3) return (1 - t / 3 + t * t / 5 - t * t * t / 7 + t * t * t * t / 9) / std::sqrt(x);
    return std::acos(std::sqrt(x / y)) / std::sqrt(y - x);
  }
  const double u = (x - y) / x;
  if (u < 1e-3) return (1 + u / 3 + u * u / 5 + u * u * u / 7 + u * u * u * u / 9) / std::sqrt(x);
  return std::acosh(std::sqrt(x / y)) / std::sqrt(x - y);
}

double carlson_rf(double x, double y, double z) {
  if (std::min({x, y, z}) < 0 || std::min({x + y, x + z, y + z}) == 0)
    throw Error(ErrorKind::domain, "RF requires nonnegative arguments with at most one zero");
  const double x0 = x, y0 = y;
  const double a0 = (x + y + z) / 3.0;
  double a = a0;
  double q = std::pow(3.0 * kTol, -1.0 / 6.0) * std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
  double f = 1.0;
  while (f * q >= std::abs(a)) {
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const double lam = sx * sy + sx * sz + sy * sz;
    a = (a + lam) / 4;
    x = (x + lam) / 4;
    y = (y + lam) / 4;
    z = (z + lam) / 4;
    f /= 4;
  }
  const double X = (a0 - x0) * f / a, Y = (a0 - y0) * f / a, Z = -X - Y;
  const double e2 = X * Y - Z * Z, e3 = X * Y * Z;
  return (1 - e2 / 10 + e3 / 14 + e2 * e2 / 24 - 3 * e2 * e3 / 44) / std::sqrt(a);
}

double carlson_rd(double x, double y, double z) {
  if (std::min(x, y) < 0 || x + y == 0 || !(z > 0)) throw Error(ErrorKind::domain, "RD argument out of range");
  const double x0 = x, y0 = y;
  const double a0 = (x + y + 3 * z) / 5.0;
  double a = a0;
  double q = std::pow(kTol / 4.0, -1.0 / 6.0) * std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
  double f = 1.0, sum = 0.0;
  while (f * q >= std::abs(a)) {
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const double lam = sx * sy + sx * sz + sy * sz;
    sum += f / (sz * (z + lam));
    a = (a + lam) / 4;
    x = (x + lam) / 4;
    y = (y + lam) / 4;
    z = (z + lam) / 4;
    f /= 4;
  }
  const double X = (a0 - x0) * f / a, Y = (a0 - y0) * f / a, Z = -(X + Y) / 3;
  const double e2 = X * Y - 6 * Z * Z, e3 = (3 * X * Y - 8 * Z * Z) * Z, e4 = 3 * (X * Y - Z * Z) * Z * Z,
               e5 = X * Y * Z * Z * Z;
  const double s = 1 - 3 * e2 / 14 + e3 / 6 + 9 * e2 * e2 / 88 - 3 * e4 / 22 - 9 * e2 * e3 / 52 + 3 * e5 / 26;
  return f * s / (a * std::sqrt(a)) + 3 * sum;
}

double carlson_rj(double x, double y, double z, double p) {
  if (std::min({x, y, z}) < 0 || std::min({x + y, x + z, y + z}) == 0 || !(p > 0))
    throw Error(ErrorKind::domain, "RJ argument out of range");
  const double x0 = x, y0 = y, z0 = z;
  const double a0 = (x + y + z + 2 * p) / 5.0;
  double a = a0;
  const double delta = (p - x) * (p - y) * (p - z);
  double q = std::pow(kTol / 4.0, -1.0 / 6.0) *
             std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z), std::abs(a0 - p)});
  double f = 1.0, f3 = 1.0, sum = 0.0;
  while (f * q >= std::abs(a)) {
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z), sp = std::sqrt(p);
    const double lam = sx * sy + sx * sz + sy * sz;
    const double d = (sp + sx) * (sp + sy) * (sp + sz);
    const double e = f3 * delta / (d * d);
    sum += f * carlson_rc(1.0, 1.0 + e) / d;
    a = (a + lam) / 4;
    x = (x + lam) / 4;
    y = (y + lam) / 4;
    z = (z + lam) / 4;
    p = (p + lam) / 4;
    f /= 4;
    f3 /= 64;
  }
  const double X = (a0 - x0) * f / a, Y = (a0 - y0) * f / a, Z = (a0 - z0) * f / a, P = -(X + Y + Z) / 2;
  const double e2 = X * Y + X * Z + Y * Z - 3 * P * P;
  const double e3 = X * Y * Z + 2 * e2 * P + 4 * P * P * P;
  const double e4 = (2 * X * Y * Z + e2 * P + 3 * P * P * P) * P;
  const double e5 = X * Y * Z * P * P;
  const double s = 1 - 3 * e2 / 14 + e3 / 6 + 9 * e2 * e2 / 88 - 3 * e4 / 22 - 9 * e2 * e3 / 52 + 3 * e5 / 26;
  return f * s / (a * std::sqrt(a)) + 6 * sum;
}

namespace {

void check_parameter(double m) {
  if (!(m < 1.0) || !std::isfinite(m)) throw Error(ErrorKind::domain, "elliptic parameter must satisfy k^2 < 1");
}

}  // namespace

double ellint_k(double m) {
  check_parameter(m);
  return carlson_rf(0.0, 1.0 - m, 1.0);
}

double ellint_e(double m) {
  check_parameter(m);
  return carlson_rf(0.0, 1.0 - m, 1.0) - m / 3.0 * carlson_rd(0.0, 1.0 - m, 1.0);
}

double ellint_pi(double n, double m) {
  check_parameter(m);
  if (n == 1.0) throw Error(ErrorKind::domain, "characteristic n = 1 diverges");
  if (n > 1.0) {
    if (m == 0) return 0.0;  // principal value of 1/(1 - n sin^2) vanishes
    return ellint_k(m) - ellint_pi(m / n, m);
  }
  return carlson_rf(0.0, 1.0 - m, 1.0) + n / 3.0 * carlson_rj(0.0, 1.0 - m, 1.0, 1.0 - n);
}

double elliptic_complete(EllipticKind kind, double m, double n) {
  switch (kind) {
    case EllipticKind::K: return ellint_k(m);
    case EllipticKind::E: return ellint_e(m);
    case EllipticKind::Pi: return ellint_pi(n, m);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace geoflow
