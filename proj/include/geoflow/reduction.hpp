#pragma once

#include <array>
#include <vector>

#include "geoflow/core.hpp"

namespace geoflow {

// Invariants of one rotation block: pi1 = |x_B|^2, pi2 = |y_B|^2, pi3 = x_B.y_B, pi4 = angular momentum.
// For the SO(3) block pi4 is the total angular momentum J >= 0.
struct InvariantBlock {
  double pi1 = 0, pi2 = 0, pi3 = 0, pi4 = 0;
  double relation() const { return pi1 * pi2 - pi3 * pi3 - pi4 * pi4; }
};

// c22: two blocks (01 and 23). c112: block 23. c211: block 01. c13: block 123. c31: block 012.
std::vector<InvariantBlock> invariants(const EllipsoidSpec& spec, const PhasePoint& p);

// Point of the reduced system: a Dirac-bracket system on a lower ellipsoid with semi-axes `axes`,
// plus a centrifugal term j_s^2 / (2 xi_s^2) for every rotation slot s.
struct ReducedPoint {
  Case symmetry = Case::c22;
  std::vector<double> axes;
  std::vector<double> xi, eta;
  std::vector<int> rot_slots;    // indices into xi of the square-rooted invariants
  std::vector<double> momenta;   // one per rotation slot
  bool singular = false;         // some rotation block has pi1 = 0; its (xi, eta) were set to 0
};

// Reduced axes and rotation slots of a symmetric case.
struct ReducedLayout {
  std::vector<double> axes;
  std::vector<int> rot_slots;
};
ReducedLayout reduced_layout(const EllipsoidSpec& spec);

ReducedPoint reduce(const EllipsoidSpec& spec, const PhasePoint& p);
// A phase point over r, with every rotation block at group angle zero.
PhasePoint lift(const EllipsoidSpec& spec, const ReducedPoint& r);

double reduced_hamiltonian(const ReducedPoint& r);
// Reduced form of the extra integral: G for c112/c211, G1 for c22. Not defined for c13/c31.
double reduced_integral(const ReducedPoint& r);

// Reduced Casimirs: sum xi^2/a - 1 and sum xi eta / a.
std::array<double, 2> reduced_casimirs(const ReducedPoint& r);

// Packed reduced coordinates (xi, eta) and the reduced flow under the Dirac bracket of `axes`.
Eigen::VectorXd reduced_state(const ReducedPoint& r);
Eigen::VectorXd reduced_vector_field(const ReducedPoint& r);

// c22 symplectic chart on the quarter 0 < phi < pi/2.
struct Chart22 {
  double phi = 0, pphi = 0;
};
struct Cartesian22 {
  std::array<double, 2> xi{}, eta{};
};
Cartesian22 chart_to_cartesian_22(double a1, double a2, const Chart22& c);
Chart22 cartesian_to_chart_22(double a1, double a2, const Cartesian22& q);
// Reduced Hamiltonian in the chart: p^2 / (2d) + j1^2 / (2 a1 cos^2) + j2^2 / (2 a2 sin^2).
double chart_hamiltonian_22(double a1, double a2, double j1, double j2, const Chart22& c);

// Residuals of the singular reduced-space relations.
// c22: (Q1, Q2) in the block-1 invariants after eliminating the rest with the Casimirs and H = h.
std::array<double, 2> singular_residual_22(double a1, double a2, double pi1, double pi2, double pi3, double h,
                                           double j1, double j2);
// c112 / c211: the block relation pi1 pi2 - pi3^2 = j^2 after eliminating pi1 and pi3 with the Casimirs.
// (u0, u1, v0, v1) are the two untouched coordinate pairs, pi2 the block kinetic invariant.
double casimir_residual_block(const EllipsoidSpec& spec, double u0, double u1, double v0, double v1, double pi2,
                              double j);
// c13 / c31: the SO(3) block relation in the single-axis pair (x_s, y_s) at energy h.
double so3_residual(const EllipsoidSpec& spec, double xs, double ys, double h, double j);
// Dispatches to the relations above using the invariants of p.
std::vector<double> singular_relation_residual(const EllipsoidSpec& spec, const PhasePoint& p);

}  // namespace geoflow
