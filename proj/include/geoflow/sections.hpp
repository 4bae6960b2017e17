#pragma once

#include <array>
#include <string>
#include <vector>

#include "geoflow/core.hpp"

namespace geoflow {

// Section xi0 = 0 of the c112 reduced system, charted by
//   (xi1, xi2) = (sqrt(a1) cos phi, sqrt(a2) sin phi),  (eta1, eta2) = (-sqrt(a1) sin phi, sqrt(a2) cos phi) pphi / d,
// d = a1 sin^2 phi + a2 cos^2 phi, with a = (alpha0, alpha1, alpha2) the distinct semi-axes squared.

enum class Atom { B, C2, point, regular_oval };
std::string to_string(Atom a);

struct SectionCurve {
  std::array<double, 3> alphas{};
  double h = 0, j = 0, g = 0;  // g is the curve-B value at j
  double phi_min = 0, phi_max = 0;
  std::vector<std::array<double, 2>> samples;  // (phi, pphi), both branches
};

// pphi^2 of the singular level through curve B.
double section_pphi_squared(const std::array<double, 3>& alphas, double h, double j, double phi);

// Samples n values of phi per branch over the allowed range of the half plane phi >= 0.
// Throws empty_separatrix above the tangency value of j^2.
SectionCurve analytic_section_curve(const std::array<double, 3>& alphas, double h, double j, std::size_t n = 400);

// Atom of the curve. quotient = true classifies after identifying (phi, pphi) ~ (-phi, -pphi).
Atom classify_atom(const SectionCurve& curve, bool quotient, std::size_t grid = 4000);

// phi gap between the lobe on phi >= 0 and its mirror image.
double lobe_separation(const SectionCurve& curve);

// Euclidean distance in the (phi, pphi) plane from a point to the curve.
double distance_to_curve(const SectionCurve& curve, double phi, double pphi);

// Phase point on the section at (phi, pphi) with total angular momentum j, energy h and eta0 >= 0.
PhasePoint section_seed(const EllipsoidSpec& spec, double h, double j, double phi, double pphi);
// (phi, pphi) of a phase point with x0 = 0.
std::array<double, 2> section_coordinates(const EllipsoidSpec& spec, const PhasePoint& p);

// count seeds on the singular curve at j, spread over the allowed phi range, alternating branches.
std::vector<PhasePoint> separatrix_seeds(const EllipsoidSpec& spec, double h, double j, std::size_t count);

struct SectionPoint {
  double phi = 0, pphi = 0;
  std::size_t trajectory = 0;
};

// Upward crossings of x0 = 0 of every seed's orbit, in seed order.
std::vector<SectionPoint> numeric_section(const EllipsoidSpec& spec, const std::vector<PhasePoint>& seeds,
                                          double t_end, double tol, std::size_t max_crossings = 0);

}  // namespace geoflow
