#include "geoflow/separation.hpp"

#include <cmath>

#include <boost/math/tools/roots.hpp>

namespace geoflow {

SeparationAxes separation_axes(const EllipsoidSpec& spec) {
  const auto& a = spec.alphas;
  if (spec.symmetry == Case::c112) return {{a[0], a[1], a[2]}, 2};
  if (spec.symmetry == Case::c211) return {{a[0], a[2], a[3]}, 0};
  throw Error(ErrorKind::invalid_spec, "confocal separation is implemented for c112 and c211");
}

namespace {

double a_three(const SeparationAxes& ax, double z) {
  return (ax.a[0] - z) * (ax.a[1] - z) * (ax.a[2] - z);
}

double others_product(const SeparationAxes& ax, int k) {
  double p = 1;
  for (int i = 0; i < 3; ++i)
    if (i != k) p *= ax.a[k] - ax.a[i];
  return p;
}

// d xi_k / d lambda_i = -xi_k / (2 (a_k - lambda_i)).
std::array<double, 3> dxi_dlambda(const std::array<double, 3>& xi, const std::array<double, 3>& gap) {
  std::array<double, 3> d{};
  for (int k = 0; k < 3; ++k) d[k] = -xi[k] / (2.0 * gap[k]);
  return d;
}

std::array<double, 3> gap_row(const SeparationAxes& ax, const ConfocalPoint& c, int i) {
  const auto& g = c.gap[i];
  if (g[0] != 0 || g[1] != 0 || g[2] != 0) return g;
  const double l = i == 0 ? c.lambda1 : c.lambda2;
  return {ax.a[0] - l, ax.a[1] - l, ax.a[2] - l};
}

double product(const std::array<double, 3>& v) { return v[0] * v[1] * v[2]; }

double root_in(const SeparationAxes& ax, const std::array<double, 3>& xi, double lo, double hi) {
  auto f = [&](double l) {
    double s = 0;
    for (int k = 0; k < 3; ++k) s += xi[k] * xi[k] / (ax.a[k] * (ax.a[k] - l));
    return s;
  };
  // Increasing from -inf at lo to +inf at hi.
  const double w = hi - lo;
  const double a = std::nextafter(lo, hi), b = std::nextafter(hi, lo);
  auto tol = [w](double x, double y) { return std::abs(x - y) <= 4e-16 * (1 + w) * std::max(std::abs(x), 1.0); };
  const auto r = boost::math::tools::bisect(f, a, b, tol);
  return 0.5 * (r.first + r.second);
}

}  // namespace

ConfocalPoint confocal_from_cartesian(const SeparationAxes& ax, const std::array<double, 3>& xi,
                                      const std::array<double, 3>& eta, double ptheta) {
  for (double v : xi)
    if (v == 0) throw Error(ErrorKind::coordinate_singularity, "point lies on a coordinate plane");
  ConfocalPoint c;
  c.lambda1 = root_in(ax, xi, ax.a[0], ax.a[1]);
  c.lambda2 = root_in(ax, xi, ax.a[1], ax.a[2]);
  for (int k = 0; k < 3; ++k) {
    const double g1 = ax.a[k] - c.lambda1, g2 = ax.a[k] - c.lambda2;
    // The smaller gap from xi_k^2 = a_k g1 g2 / prod_{i != k}(a_k - a_i), the larger by subtraction.
    const double q = xi[k] * xi[k] * others_product(ax, k) / ax.a[k];
    if (std::abs(g1) < std::abs(g2)) {
      c.gap[0][k] = q / g2;
      c.gap[1][k] = g2;
    } else {
      c.gap[0][k] = g1;
      c.gap[1][k] = q / g1;
    }
  }
  const auto d1 = dxi_dlambda(xi, c.gap[0]);
  const auto d2 = dxi_dlambda(xi, c.gap[1]);
  for (int k = 0; k < 3; ++k) {
    c.p1 += eta[k] * d1[k];
    c.p2 += eta[k] * d2[k];
    c.signs[k] = xi[k] < 0 ? -1 : 1;
  }
  c.ptheta = ptheta;
  return c;
}

ConfocalPoint confocal_from_reduced(const SeparationAxes& ax, const ReducedPoint& r) {
  if (r.xi.size() != 3) throw Error(ErrorKind::invalid_spec, "expected a reduced 2-ellipsoid point");
  return confocal_from_cartesian(ax, {r.xi[0], r.xi[1], r.xi[2]}, {r.eta[0], r.eta[1], r.eta[2]}, r.momenta.at(0));
}

double confocal_metric(const SeparationAxes& ax, double li, double lj) {
  return -4.0 * a_three(ax, li) / (li * (lj - li));
}

void cartesian_from_confocal(const SeparationAxes& ax, const ConfocalPoint& c, std::array<double, 3>& xi,
                             std::array<double, 3>& eta) {
  const auto g1 = gap_row(ax, c, 0), g2 = gap_row(ax, c, 1);
  for (int k = 0; k < 3; ++k) {
    const double v = ax.a[k] * g1[k] * g2[k] / others_product(ax, k);
    xi[k] = c.signs[k] * std::sqrt(std::max(v, 0.0));
  }
  const auto d1 = dxi_dlambda(xi, g1);
  const auto d2 = dxi_dlambda(xi, g2);
  // confocal_metric with the stored gaps in place of a_k - lambda
  const double m1 = -4.0 * product(g1) / (c.lambda1 * (c.lambda2 - c.lambda1));
  const double m2 = -4.0 * product(g2) / (c.lambda2 * (c.lambda1 - c.lambda2));
  for (int k = 0; k < 3; ++k) eta[k] = m1 * c.p1 * d1[k] + m2 * c.p2 * d2[k];
}

double confocal_hamiltonian(const SeparationAxes& ax, const ConfocalPoint& c) {
  const double ar = ax.a[ax.r];
  const auto g1 = gap_row(ax, c, 0), g2 = gap_row(ax, c, 1);
  const double xr2 = ar * g1[ax.r] * g2[ax.r] / others_product(ax, ax.r);
  const double l1 = c.lambda1, l2 = c.lambda2;
  const double kin = -4.0 * product(g1) / (l1 * (l2 - l1)) * c.p1 * c.p1 - 4.0 * product(g2) / (l2 * (l1 - l2)) * c.p2 * c.p2;
  return 0.5 * kin + c.ptheta * c.ptheta / (2.0 * xr2);
}

double rotation_weight(const SeparationAxes& ax) { return others_product(ax, ax.r) / (2.0 * ax.a[ax.r]); }

double separated_constant(const SeparationAxes& ax, double lambda, double p, double h, double ptheta) {
  const double ar = ax.a[ax.r];
  if (lambda == ar) throw Error(ErrorKind::pole, "separated constant has a pole at the rotation axis");
  return 2.0 * a_three(ax, lambda) * p * p / lambda + rotation_weight(ax) * ptheta * ptheta / (ar - lambda) -
         h * lambda;
}

SeparatedConstants separated_constants(const SeparationAxes& ax, const ConfocalPoint& c, double h) {
  SeparatedConstants s;
  s.h = h;
  s.ptheta = c.ptheta;
  const double cr = rotation_weight(ax) * c.ptheta * c.ptheta;
  double* out[2] = {&s.g1, &s.g2};
  for (int i = 0; i < 2; ++i) {
    const auto g = gap_row(ax, c, i);
    const double l = i == 0 ? c.lambda1 : c.lambda2, p = i == 0 ? c.p1 : c.p2;
    if (g[ax.r] == 0) throw Error(ErrorKind::pole, "separated constant has a pole at the rotation axis");
    *out[i] = 2.0 * product(g) * p * p / l + cr / g[ax.r] - h * l;
  }
  return s;
}

double separation_constant_from_G(const SeparationAxes& ax, double G, double h, double ptheta) {
  const double ar = ax.a[ax.r];
  double inv = 0;
  for (int k = 0; k < 3; ++k)
    if (k != ax.r) inv += 1.0 / (ar - ax.a[k]);
  const double cr = rotation_weight(ax);
  return others_product(ax, ax.r) * G / (2.0 * ar) - h * ar - cr * ptheta * ptheta / ar * (1.0 - ar * inv);
}

double separated_relation_residual(const SeparationAxes& ax, const SeparatedConstants& s, double G) {
  return s.g1 + s.g2 - 2.0 * separation_constant_from_G(ax, G, s.h, s.ptheta);
}

double q_tilde(const SeparationAxes& ax, double h, double g, double ptheta, double z) {
  const double ar = ax.a[ax.r];
  return 2.0 * z * ((g + h * z) * (z - ar) + rotation_weight(ax) * ptheta * ptheta);
}

double a_four(const SeparationAxes& ax, double z) {
  return (z - ax.a[0]) * (z - ax.a[1]) * (z - ax.a[2]) * (z - ax.a[ax.r]);
}

double momentum_polynomial(const SeparationAxes& ax, double h, double g, double ptheta, double lambda) {
  const double den = a_four(ax, lambda);
  if (den == 0) throw Error(ErrorKind::pole, "momentum polynomial evaluated at a semi-axis");
  return -q_tilde(ax, h, g, ptheta, lambda) / (4.0 * den);
}

double partial_fraction_residual(const SeparationAxes& ax, const std::array<double, 2>& f_other, double G, double h,
                                 double g, double ptheta, double z) {
  const double ar = ax.a[ax.r];
  double lhs = G / (z - ar) + ptheta * ptheta / ((z - ar) * (z - ar));
  int u = 0;
  for (int k = 0; k < 3; ++k)
    if (k != ax.r) lhs += f_other[u++] / (z - ax.a[k]);
  return lhs - q_tilde(ax, h, g, ptheta, z) / a_four(ax, z);
}

}  // namespace geoflow
