#pragma once

#include <array>

#include "geoflow/reduction.hpp"

namespace geoflow {

// Reduced 2-ellipsoid of a c112 or c211 system: three semi-axes squared a0 < a1 < a2 and the
// slot r of the rotation block (2 for c112, 0 for c211).
struct SeparationAxes {
  std::array<double, 3> a{};
  int r = 2;
};

SeparationAxes separation_axes(const EllipsoidSpec& spec);

// Confocal coordinates with a0 < lambda1 < a1 < lambda2 < a2, parametrising
//   xi_k^2 = a_k (a_k - lambda1)(a_k - lambda2) / prod_{i != k} (a_k - a_i),
// the ellipsoid itself being the confocal member lambda = 0.
struct ConfocalPoint {
  double lambda1 = 0, lambda2 = 0;
  double p1 = 0, p2 = 0;
  double theta = 0, ptheta = 0;
  std::array<int, 3> signs{1, 1, 1};  // signs of xi_k, needed to invert the chart
  // a_k - lambda_i, rows i = 1, 2. Near a coordinate plane one of them is tiny and the subtraction
  // loses half the digits; confocal_from_cartesian recovers it from xi_k^2 instead. Zero rows mean
  // "subtract".
  std::array<std::array<double, 3>, 2> gap{};
};

ConfocalPoint confocal_from_cartesian(const SeparationAxes& ax, const std::array<double, 3>& xi,
                                      const std::array<double, 3>& eta, double ptheta);
ConfocalPoint confocal_from_reduced(const SeparationAxes& ax, const ReducedPoint& r);
void cartesian_from_confocal(const SeparationAxes& ax, const ConfocalPoint& c, std::array<double, 3>& xi,
                             std::array<double, 3>& eta);

// Inverse metric component g^{ii} and the Hamiltonian in confocal coordinates.
double confocal_metric(const SeparationAxes& ax, double li, double lj);
double confocal_hamiltonian(const SeparationAxes& ax, const ConfocalPoint& c);

struct SeparatedConstants {
  double g1 = 0, g2 = 0;
  double h = 0;
  double ptheta = 0;
};

// prod_{k != r}(a_r - a_k) / (2 a_r): the weight of the rotation term in the separated integrals.
double rotation_weight(const SeparationAxes& ax);

SeparatedConstants separated_constants(const SeparationAxes& ax, const ConfocalPoint& c, double h);
// g~ of one coordinate: 2 A(lambda) p^2 / lambda + c_r J^2 / (a_r - lambda) - h lambda, A = prod (a_k - lambda).
double separated_constant(const SeparationAxes& ax, double lambda, double p, double h, double ptheta);

// g1 + g2 minus its value predicted from G, h and J. Zero on every phase point.
double separated_relation_residual(const SeparationAxes& ax, const SeparatedConstants& s, double G);
// The separation constant predicted from (G, h, J).
double separation_constant_from_G(const SeparationAxes& ax, double G, double h, double ptheta);

// Q~(z) = 2 z [(g + h z)(z - a_r) + c_r J^2] and A(z) = prod_k (z - a_k) (z - a_r).
double q_tilde(const SeparationAxes& ax, double h, double g, double ptheta, double z);
double a_four(const SeparationAxes& ax, double z);
// p^2 = -Q~(lambda) / (4 A(lambda)).
double momentum_polynomial(const SeparationAxes& ax, double h, double g, double ptheta, double lambda);

// sum_{k != r} F_k/(z - a_k) + G/(z - a_r) + J^2/(z - a_r)^2 - Q~(z)/A(z).
double partial_fraction_residual(const SeparationAxes& ax, const std::array<double, 2>& f_other, double G, double h,
                                 double g, double ptheta, double z);

}  // namespace geoflow
