#pragma once

#include <array>
#include <string>
#include <vector>

#include "geoflow/io.hpp"

namespace geoflow {

// c22 action data. a1 < a2 are the two distinct semi-axes squared.

// Turning points of the reduced libration in s^2 = a1 cos^2(phi), with the Legendre parameters.
struct EllipticArgs {
  double s1sq = 0, s2sq = 0;
  double k2 = 0;
  double alpha2 = 0;  // characteristic of the first Pi term; -inf when s1 = 0
  double beta2 = 0;   // characteristic of the second Pi term; 1 when s2^2 = a1
};

EllipticArgs branch_roots(double a1, double a2, double h, double j1, double j2);

// p_phi^2 on the energy surface h of the reduced chart.
double pphi_squared(double a1, double a2, double h, double j1, double j2, double phi);

enum class ActionMethod { quadrature, legendre };

// Third action I. Normalised so that I = (2/pi) times the integral of p_phi between the turning
// points, which is what the Legendre-form expression evaluates; zero on the polygon boundary.
double action_I(double a1, double a2, double h, double j1, double j2, ActionMethod method);

// dI/dJ1 (which = 1) or dI/dJ2 (which = 2) by quadrature. Throws axis_limit on the axis itself.
double dI_dJ(double a1, double a2, double h, double j1, double j2, int which);

using IntMatrix3 = std::array<std::array<long, 3>, 3>;

IntMatrix3 int_identity();
IntMatrix3 int_multiply(const IntMatrix3& a, const IntMatrix3& b);
// Inverse of a unimodular integer matrix; throws if the determinant is not +-1.
IntMatrix3 int_inverse(const IntMatrix3& m);
long int_determinant(const IntMatrix3& m);

struct GluingSet {
  IntMatrix3 s1, s2, m1, m2, m3, m4, total;
};

// as_displayed = true gives M1 = M2 with bottom-left +2 and M3 = M4 with (3,2) entry -2.
// The default gives the set that actually glues the computed action: the J1 derivative of I jumps
// by -2 across J1 = 0 (it tends to -1 from the right), so M1 = M2 carry -2 there.
GluingSet transition_matrices(bool as_displayed = false);

// Quadrant label of (j1, j2); zeros count as positive.
std::string quadrant_of(double j1, double j2);

// (J1, J2, I~) where I~ is the third component of the quadrant product of gluing matrices applied to
// the natural action vector (j1, j2, I). I~ = I in quadrant ++.
std::array<double, 3> smooth_action(double a1, double a2, double h, double j1, double j2);

struct ActionGrid {
  std::vector<double> j1, j2, I, I_shifted;  // I_shifted = I + |j1| + |j2|
  std::size_t n = 0;
};

// n x n grid over the polygon interior in the rotated coordinates
//   u = (p + q)/2, v = (p - q)/2, p, q in [-0.95, 0.95], j1 = sqrt(2 h a1) u, j2 = sqrt(2 h a2) v.
ActionGrid energy_surface_grid(double a1, double a2, double h, std::size_t n);
// Triangulated mesh of the grid with z = I (shifted = false) or I + |j1| + |j2|.
Mesh action_mesh(const ActionGrid& g, bool shifted);

}  // namespace geoflow
