#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "geoflow/conserved.hpp"
#include "geoflow/core.hpp"

namespace geoflow {

enum class CurveKind { polygon_edge, curveA, curveB, curveC, interval };
std::string to_string(CurveKind k);

// c22 edge:      coef[0] j1 + coef[1] j2 = coef[2]
// c112 / c211:   g = coef[0] + coef[1] |j| + coef[2] j^2
// c13 / c31:     0 <= j^2 <= coef[0]
struct DiagramCurve {
  Case symmetry = Case::c22;
  CurveKind kind = CurveKind::polygon_edge;
  std::array<double, 3> coef{};
  double j_min = 0, j_max = 0;  // j1 for c22 edges
  double g_at(double j) const;   // g for the quadratics, j2 for c22 edges
  double residual(double u, double v) const;
};

std::vector<DiagramCurve> boundary_curves(const EllipsoidSpec& spec, double h);

enum class CriticalType {
  regular,
  elliptic,
  hyperbolic,
  elliptic_elliptic,
  elliptic_hyperbolic,
  hyperbolic_hyperbolic,
  focus_focus,
  degenerate,
};
std::string to_string(CriticalType t);

struct CriticalClassification {
  int corank = 0;
  CriticalType type = CriticalType::regular;
  std::vector<std::complex<double>> eigenvalues;  // nonzero eigenvalues of the combined linearisation
  std::vector<double> lambda_squared;             // one per transverse pair
};

// Eigenvalue pairs of the 8x8 linearisation of X_F at p (central differences, step 1e-6).
Mat8 flow_jacobian(const EllipsoidSpec& spec, const Observable& f, const PhasePoint& p);
// Distinct squared eigenvalues of m, largest magnitude first; each belongs to a +-lambda pair.
std::vector<std::complex<double>> squared_pairs(const Mat8& m, int count);

// Classification from the flows of `integrals` (energy first). The default uses
// independent_integrals(spec). Throws not_critical when the flows are independent.
CriticalClassification classify_critical(const EllipsoidSpec& spec, const PhasePoint& p);
CriticalClassification classify_critical(const EllipsoidSpec& spec, const PhasePoint& p,
                                         const std::vector<Observable>& integrals);

// K = s1 J1/sqrt(a1) + s2 J2/sqrt(a2) - sqrt(2H), vanishing on the c22 edge of quadrant (s1, s2).
Observable polygon_integral(const EllipsoidSpec& spec, int s1, int s2);

struct Equilibrium22 {
  double xi1 = 0, xi2 = 0;
  double phi = 0;
  double h_min = 0;
};
// Minimum of the c22 reduced Hamiltonian at fixed (j1, j2), both nonzero.
Equilibrium22 equilibria_22(double a1, double a2, double j1, double j2);

enum class FiberKind { T3, T2, S1, two_S1, BxT2, S2xS1, SO3, T2_bundle_S2 };
std::string to_string(FiberKind f);

struct FiberLabel {
  FiberKind kind = FiberKind::T3;
  int multiplicity = 1;
};

struct Landmark {
  std::string name;
  double u = 0, v = 0;  // (j1, j2) for c22, (j, g) for c112 / c211, (j, 0) for c13 / c31
  int corank = 1;
  CriticalType type = CriticalType::elliptic;
  FiberLabel fiber;
  PhasePoint seed;  // a preimage point on the critical set
};

std::vector<Landmark> landmarks(const EllipsoidSpec& spec, double h);

// Labels of the energy momentum value. Regular multiplicities are counted from the confocal
// turning-point structure; singular labels follow the curve the value lies on.
FiberLabel fiber_label(const EllipsoidSpec& spec, double h, const EMValue& em);
// Number of connected components of a regular c112 / c211 fiber.
int regular_components(const EllipsoidSpec& spec, double h, double j, double g);

// Largest |j| of the c112 / c211 diagram and the j of the tangency points.
double diagram_j_max(const EllipsoidSpec& spec, double h);
double tangency_j(const EllipsoidSpec& spec, double h);

// Damped Gauss-Newton search for phase points where every flow in `targets` lies in the span of
// the flows in `basis`, with each pinned observable at its value.
struct CriticalProblem {
  std::vector<Observable> targets;
  std::vector<Observable> basis;
  std::vector<std::pair<Observable, double>> pins;
};
struct CriticalSearch {
  PhasePoint p;
  double residual = 0;
  int iterations = 0;
  bool converged = false;
};
CriticalSearch find_critical(const EllipsoidSpec& spec, const PhasePoint& seed, const CriticalProblem& problem,
                             int max_iter = 60);

// Critical family through the tangency: x = sqrt(a) e_s on the deleted sub-ellipsoid, momentum
// split between the two other single-axis slots. Returns the family point at parameter s in (0, 1).
PhasePoint degenerate_family_point(const EllipsoidSpec& spec, double h, double s);
// Parameter of the degenerate point found by bisection on the sign of the transverse lambda^2.
double locate_degenerate(const EllipsoidSpec& spec, double h, double tol = 1e-12);

// SO(3) cases: fiber seed over J^2 = 2 alpha_rev h built from orthonormal u, v in the triple block.
PhasePoint so3_seed(const EllipsoidSpec& spec, double h, const std::array<double, 3>& u,
                    const std::array<double, 3>& v);
// |x_T|^2 - alpha_rev, |y_T|^2 - 2h, x_T . y_T over the triple block T.
std::array<double, 3> so3_defining_residuals(const EllipsoidSpec& spec, double h, const PhasePoint& p);

struct ZeroMomentumCurve {
  std::vector<std::array<double, 2>> points;  // (x_s, y_s) samples of the single-axis pair
  double period = 0;
  double closure_error = 0;   // distance between start and first return
  double relation_error = 0;  // max residual of the J = 0 relation along the curve
};
ZeroMomentumCurve trace_zero_momentum_curve(const EllipsoidSpec& spec, double h, double tol = 1e-12);

}  // namespace geoflow
