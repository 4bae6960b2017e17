#include "geoflow/atlas.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "geoflow/actions.hpp"
#include "geoflow/integrator.hpp"
#include "geoflow/reduction.hpp"
#include "geoflow/separation.hpp"

namespace geoflow {

std::string to_string(CurveKind k) {
  switch (k) {
    case CurveKind::polygon_edge: return "polygon-edge";
    case CurveKind::curveA: return "curveA";
    case CurveKind::curveB: return "curveB";
    case CurveKind::curveC: return "curveC";
    case CurveKind::interval: return "interval";
  }
  return "?";
}

std::string to_string(CriticalType t) {
  switch (t) {
    case CriticalType::regular: return "regular";
    case CriticalType::elliptic: return "elliptic";
    case CriticalType::hyperbolic: return "hyperbolic";
    case CriticalType::elliptic_elliptic: return "elliptic-elliptic";
    case CriticalType::elliptic_hyperbolic: return "elliptic-hyperbolic";
    case CriticalType::hyperbolic_hyperbolic: return "hyperbolic-hyperbolic";
    case CriticalType::focus_focus: return "focus-focus";
    case CriticalType::degenerate: return "degenerate";
  }
  return "?";
}

std::string to_string(FiberKind f) {
  switch (f) {
    case FiberKind::T3: return "T3";
    case FiberKind::T2: return "T2";
    case FiberKind::S1: return "S1";
    case FiberKind::two_S1: return "2S1";
    case FiberKind::BxT2: return "BxT2";
    case FiberKind::S2xS1: return "S2xS1";
    case FiberKind::SO3: return "SO3";
    case FiberKind::T2_bundle_S2: return "T2-bundle-over-S2";
  }
  return "?";
}

double DiagramCurve::g_at(double j) const {
  switch (kind) {
    case CurveKind::polygon_edge: return (coef[2] - coef[0] * j) / coef[1];
    case CurveKind::interval: return 0.0;
    default: return coef[0] + coef[1] * std::abs(j) + coef[2] * j * j;
  }
}

double DiagramCurve::residual(double u, double v) const {
  switch (kind) {
    case CurveKind::polygon_edge: return coef[0] * u + coef[1] * v - coef[2];
    case CurveKind::interval: return std::min(u * u, coef[0] - u * u);
    default: return v - g_at(u);
  }
}

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_symmetric(const EllipsoidSpec& spec) {
  if (spec.symmetry == Case::generic) throw Error(ErrorKind::invalid_spec, "the generic case has no diagram here");
}

void require_positive(double h) {
  if (!(h > 0)) throw Error(ErrorKind::domain, "energy must be positive");
}

// The three quadratics of c112 / c211 as (A, B, C).
std::array<DiagramCurve, 3> quadratics(const EllipsoidSpec& spec, double h) {
  const auto& a = spec.alphas;
  std::array<DiagramCurve, 3> q;
  for (auto& c : q) c.symmetry = spec.symmetry;
  q[0].kind = CurveKind::curveA;
  q[1].kind = CurveKind::curveB;
  q[2].kind = CurveKind::curveC;
  if (spec.symmetry == Case::c112) {
    q[0].coef = {2 * h * a[2] / (a[2] - a[1]), 0, -a[1] / (a[2] * (a[2] - a[1]))};
    q[1].coef = {2 * h * a[2] / (a[2] - a[0]), 0, -a[0] / (a[2] * (a[2] - a[0]))};
    q[2].coef = {0, std::sqrt(8 * a[2] * h / ((a[2] - a[0]) * (a[2] - a[1]))),
                 -(a[2] * a[2] - a[0] * a[1]) / (a[2] * (a[2] - a[0]) * (a[2] - a[1]))};
  } else {
    q[0].coef = {2 * a[0] * h / (a[0] - a[2]), 0, a[2] / (a[0] * (a[2] - a[0]))};
    q[1].coef = {2 * a[0] * h / (a[0] - a[3]), 0, a[3] / (a[0] * (a[3] - a[0]))};
    q[2].coef = {0, -std::sqrt(8 * a[0] * h / ((a[2] - a[0]) * (a[3] - a[0]))),
                 (a[2] * a[3] - a[0] * a[0]) / (a[0] * (a[2] - a[0]) * (a[3] - a[0]))};
  }
  const double jm = diagram_j_max(spec, h), jt = tangency_j(spec, h);
  q[0].j_min = q[1].j_min = -jm;
  q[0].j_max = q[1].j_max = jm;
  q[2].j_min = -jt;
  q[2].j_max = jt;
  return q;
}

}  // namespace

double diagram_j_max(const EllipsoidSpec& spec, double h) {
  if (spec.symmetry == Case::c112) return std::sqrt(2 * h * spec.alphas[2]);
  if (spec.symmetry == Case::c211) return std::sqrt(2 * h * spec.alphas[0]);
  throw Error(ErrorKind::invalid_spec, "diagram_j_max is defined for c112 and c211");
}

double tangency_j(const EllipsoidSpec& spec, double h) {
  const auto& a = spec.alphas;
  if (spec.symmetry == Case::c112) return std::sqrt(2 * h * a[2] * (a[2] - a[1]) / (a[2] - a[0]));
  if (spec.symmetry == Case::c211) return std::sqrt(2 * h * a[0] * (a[2] - a[0]) / (a[3] - a[0]));
  throw Error(ErrorKind::invalid_spec, "tangency_j is defined for c112 and c211");
}

std::vector<DiagramCurve> boundary_curves(const EllipsoidSpec& spec, double h) {
  require_positive(h);
  require_symmetric(spec);
  std::vector<DiagramCurve> out;
  const auto& a = spec.alphas;
  switch (spec.symmetry) {
    case Case::c22: {
      const double a1 = a[0], a2 = a[2], r = std::sqrt(2 * h);
      for (auto [s1, s2] : {std::pair{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}) {
        DiagramCurve c;
        c.symmetry = Case::c22;
        c.kind = CurveKind::polygon_edge;
        c.coef = {s1 / std::sqrt(a1), s2 / std::sqrt(a2), r};
        const double end = s1 * std::sqrt(2 * h * a1);
        c.j_min = std::min(0.0, end);
        c.j_max = std::max(0.0, end);
        out.push_back(c);
      }
      break;
    }
    case Case::c112:
    case Case::c211: {
      const auto q = quadratics(spec, h);
      out.assign(q.begin(), q.end());
      break;
    }
    case Case::c13:
    case Case::c31: {
      DiagramCurve c;
      c.symmetry = spec.symmetry;
      c.kind = CurveKind::interval;
      c.coef = {2 * alpha_rev(spec) * h, 0, 0};
      c.j_max = std::sqrt(c.coef[0]);
      c.j_min = -c.j_max;
      out.push_back(c);
      break;
    }
    case Case::generic: break;
  }
  return out;
}

Mat8 flow_jacobian(const EllipsoidSpec& spec, const Observable& f, const PhasePoint& p) {
  const State z = to_state(p);
  Mat8 m;
  const double step = 1e-6;
  for (int b = 0; b < 8; ++b) {
    State zp = z, zm = z;
    zp[b] += step;
    zm[b] -= step;
    m.col(b) = (flow_of(spec.alphas, f, zp) - flow_of(spec.alphas, f, zm)) / (2 * step);
  }
  return m;
}

std::vector<std::complex<double>> squared_pairs(const Mat8& m, int count) {
  Eigen::EigenSolver<Mat8> es(m * m, false);
  std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + 8);
  std::sort(ev.begin(), ev.end(), [](auto a, auto b) { return std::abs(a) > std::abs(b); });
  std::vector<std::complex<double>> out;
  for (int i = 0; i < count && 2 * i < 8; ++i) out.push_back(ev[2 * i]);
  return out;
}

CriticalClassification classify_critical(const EllipsoidSpec& spec, const PhasePoint& p) {
  return classify_critical(spec, p, independent_integrals(spec));
}

CriticalClassification classify_critical(const EllipsoidSpec& spec, const PhasePoint& p,
                                         const std::vector<Observable>& integrals) {
  if (spec.symmetry == Case::c13 || spec.symmetry == Case::c31)
    throw Error(ErrorKind::invalid_spec, "the SO(3) cases are classified through fiber_label");
  const State z = to_state(p);
  const int m = static_cast<int>(integrals.size());
  Eigen::MatrixXd cols(8, m);
  std::vector<double> norms(m);
  for (int k = 0; k < m; ++k) {
    const double n = gradient_of(integrals[k], z).norm();
    norms[k] = n > 1e-12 ? n : 1.0;
    cols.col(k) = flow_of(spec.alphas, integrals[k], z) / norms[k];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cols, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int k = 0; k < sv.size(); ++k)
    if (sv[k] > 1e-7 * std::max(sv[0], 1e-300)) ++rank;
  CriticalClassification out;
  out.corank = 3 - rank;
  if (out.corank <= 0) throw Error(ErrorKind::not_critical, "the integral flows are independent at this point");

  std::vector<Mat8> jac;
  for (const auto& f : integrals) jac.push_back(flow_jacobian(spec, f, p));
  // Generic weights on the null combinations so that every transverse pair shows up.
  const double weights[] = {1.0, 0.6180339887498949, 0.4142135623730950, 0.7320508075688772};
  Mat8 M = Mat8::Zero();
  for (int j = rank; j < m; ++j) {
    const double w = weights[(j - rank) % 4];
    for (int k = 0; k < m; ++k) M += w * svd.matrixV()(k, j) / norms[k] * jac[k];
  }
  const double h = energy(p);
  const double tol = 1e-8 * (1 + h);
  const auto pairs = squared_pairs(M, out.corank);
  int ell = 0, hyp = 0, foc = 0, zero = 0;
  for (auto l2 : pairs) {
    out.lambda_squared.push_back(l2.real());
    if (std::abs(l2) < tol)
      ++zero;
    else if (std::abs(l2.imag()) > tol)
      ++foc;
    else if (l2.real() < 0)
      ++ell;
    else
      ++hyp;
  }
  Eigen::EigenSolver<Mat8> es(M, false);
  for (int k = 0; k < 8; ++k)
    if (std::norm(es.eigenvalues()[k]) > tol) out.eigenvalues.push_back(es.eigenvalues()[k]);

  if (zero > 0)
    out.type = CriticalType::degenerate;
  else if (foc > 0)
    out.type = CriticalType::focus_focus;
  else if (out.corank == 1)
    out.type = ell ? CriticalType::elliptic : CriticalType::hyperbolic;
  else if (hyp == 0)
    out.type = CriticalType::elliptic_elliptic;
  else if (ell == 0)
    out.type = CriticalType::hyperbolic_hyperbolic;
  else
    out.type = CriticalType::elliptic_hyperbolic;
  return out;
}

Observable polygon_integral(const EllipsoidSpec& spec, int s1, int s2) {
  if (spec.symmetry != Case::c22) throw Error(ErrorKind::invalid_spec, "K is defined for c22");
  const double w1 = s1 / std::sqrt(spec.alphas[0]), w2 = s2 / std::sqrt(spec.alphas[2]);
  const Observable j1 = integral(spec, "J1"), j2 = integral(spec, "J2"), H = obs::hamiltonian();
  Observable k;
  k.name = "K";
  k.value = [=](const State& z) { return w1 * j1.value(z) + w2 * j2.value(z) - std::sqrt(2 * H.value(z)); };
  k.gradient = [=](const State& z) -> State {
    return w1 * gradient_of(j1, z) + w2 * gradient_of(j2, z) - gradient_of(H, z) / std::sqrt(2 * H.value(z));
  };
  return k;
}

Equilibrium22 equilibria_22(double a1, double a2, double j1, double j2) {
  if (j1 == 0 || j2 == 0) throw Error(ErrorKind::domain, "equilibria need both momenta nonzero");
  if (!(a1 > 0) || !(a2 > 0)) throw Error(ErrorKind::invalid_spec, "semi-axes must be positive");
  const double s = std::abs(j1) / std::sqrt(a1) + std::abs(j2) / std::sqrt(a2);
  Equilibrium22 e;
  e.xi1 = std::sqrt(std::sqrt(a1) * std::abs(j1) / s);
  e.xi2 = std::sqrt(std::sqrt(a2) * std::abs(j2) / s);
  e.phi = std::atan2(e.xi2 / std::sqrt(a2), e.xi1 / std::sqrt(a1));
  e.h_min = 0.5 * s * s;
  return e;
}

// ---- landmarks ---------------------------------------------------------------------------------

namespace {

PhasePoint point(Vec4 x, Vec4 y) {
  PhasePoint p;
  p.x = x;
  p.y = y;
  return p;
}

Landmark mark(std::string name, double u, double v, int corank, CriticalType t, FiberKind f, int mult,
              PhasePoint seed) {
  Landmark l;
  l.name = std::move(name);
  l.u = u;
  l.v = v;
  l.corank = corank;
  l.type = t;
  l.fiber = {f, mult};
  l.seed = seed;
  return l;
}

double degenerate_parameter(const EllipsoidSpec& spec) {
  const auto& a = spec.alphas;
  if (spec.symmetry == Case::c112) return std::sqrt((a[1] - a[0]) / (a[2] - a[0]));
  return std::sqrt((a[3] - a[2]) / (a[3] - a[0]));
}

}  // namespace

PhasePoint degenerate_family_point(const EllipsoidSpec& spec, double h, double s) {
  const auto& a = spec.alphas;
  const double r = std::sqrt(2 * h), c = std::sqrt(std::max(0.0, 1 - s * s));
  if (spec.symmetry == Case::c112) return point({0, 0, std::sqrt(a[2]), 0}, {r * s, 0, 0, r * c});
  if (spec.symmetry == Case::c211) return point({std::sqrt(a[0]), 0, 0, 0}, {0, r * c, 0, r * s});
  throw Error(ErrorKind::invalid_spec, "the degenerate family exists for c112 and c211");
}

double locate_degenerate(const EllipsoidSpec& spec, double h, double tol) {
  const Observable f = integral(spec, spec.symmetry == Case::c112 ? "F1" : "F2");
  auto l2 = [&](double s) { return squared_pairs(flow_jacobian(spec, f, degenerate_family_point(spec, h, s)), 1)[0].real(); };
  double lo = 0.01, hi = 0.99;
  double flo = l2(lo);
  if ((flo < 0) == (l2(hi) < 0)) throw Error(ErrorKind::domain, "no sign change of lambda^2 along the family");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = l2(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<Landmark> landmarks(const EllipsoidSpec& spec, double h) {
  require_positive(h);
  require_symmetric(spec);
  const auto& a = spec.alphas;
  const double r = std::sqrt(2 * h);
  std::vector<Landmark> out;
  switch (spec.symmetry) {
    case Case::c22: {
      const double a1 = a[0], a2 = a[2];
      for (int s : {1, -1}) {
        out.push_back(mark(s > 0 ? "corner J1+" : "corner J1-", s * std::sqrt(2 * h * a1), 0, 2,
                           CriticalType::elliptic_elliptic, FiberKind::S1, 1,
                           point({std::sqrt(a1), 0, 0, 0}, {0, s * r, 0, 0})));
        out.push_back(mark(s > 0 ? "corner J2+" : "corner J2-", 0, s * std::sqrt(2 * h * a2), 2,
                           CriticalType::elliptic_elliptic, FiberKind::S1, 1,
                           point({0, 0, std::sqrt(a2), 0}, {0, 0, 0, s * r})));
      }
      const double c = std::cos(kPi / 4), sn = std::sin(kPi / 4);
      for (auto [s1, s2] : {std::pair{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}) {
        const std::string q = std::string(s1 > 0 ? "+" : "-") + (s2 > 0 ? "+" : "-");
        out.push_back(mark("edge midpoint " + q, s1 * std::sqrt(a1) * r * c * c, s2 * std::sqrt(a2) * r * sn * sn, 1,
                           CriticalType::elliptic, FiberKind::T2, 1,
                           point({std::sqrt(a1) * c, 0, std::sqrt(a2) * sn, 0}, {0, s1 * r * c, 0, s2 * r * sn})));
      }
      break;
    }
    case Case::c112:
    case Case::c211: {
      const bool c112 = spec.symmetry == Case::c112;
      const auto q = quadratics(spec, h);
      const double jm = diagram_j_max(spec, h), jt = tangency_j(spec, h);
      const double sd = degenerate_parameter(spec);
      for (int s : {1, -1}) {
        const std::string sg = s > 0 ? "+" : "-";
        const PhasePoint corner = c112 ? point({0, 0, std::sqrt(a[2]), 0}, {0, 0, 0, s * r})
                                       : point({std::sqrt(a[0]), 0, 0, 0}, {0, s * r, 0, 0});
        out.push_back(mark("corner A/B " + sg, s * jm, q[0].g_at(jm), 2, CriticalType::elliptic_elliptic,
                           FiberKind::S1, 1, corner));
        PhasePoint tan = degenerate_family_point(spec, h, sd);
        if (c112)
          tan.y[3] *= s;
        else
          tan.y[1] *= s;
        out.push_back(mark("tangency B/C " + sg, s * jt, q[1].g_at(jt), 1, CriticalType::degenerate, FiberKind::T2, 1,
                           tan));
      }
      const PhasePoint origin = c112 ? point({std::sqrt(a[0]), 0, 0, 0}, {0, r, 0, 0})
                                     : point({0, 0, std::sqrt(a[2]), 0}, {0, 0, 0, r});
      out.push_back(mark("origin", 0, 0, 2, CriticalType::elliptic_elliptic, FiberKind::two_S1, 2, origin));
      // Where curves A and B cross the axis j = 0; B is the chamber wall there.
      const PhasePoint wall = c112 ? point({0, 0, std::sqrt(a[2]), 0}, {r, 0, 0, 0})
                                   : point({std::sqrt(a[0]), 0, 0, 0}, {0, 0, 0, r});
      out.push_back(mark("wall B at j=0", 0, q[1].g_at(0), 1, CriticalType::hyperbolic, FiberKind::BxT2, 1, wall));
      const PhasePoint edge = c112 ? point({0, 0, std::sqrt(a[2]), 0}, {0, r, 0, 0})
                                   : point({std::sqrt(a[0]), 0, 0, 0}, {0, 0, r, 0});
      out.push_back(mark("curve A at j=0", 0, q[0].g_at(0), 1, CriticalType::elliptic, FiberKind::T2, 1, edge));
      break;
    }
    case Case::c13:
    case Case::c31: {
      const double jr = std::sqrt(2 * alpha_rev(spec) * h);
      const PhasePoint top = so3_seed(spec, h, {1, 0, 0}, {0, 1, 0});
      out.push_back(mark("J^2 = 2 alpha_rev h", jr, 0, 1, CriticalType::elliptic, FiberKind::SO3, 1, top));
      PhasePoint zero;
      if (spec.symmetry == Case::c13)
        zero = point({std::sqrt(a[0]), 0, 0, 0}, {0, r, 0, 0});
      else
        zero = point({0, 0, 0, std::sqrt(a[3])}, {r, 0, 0, 0});
      out.push_back(mark("J = 0", 0, 0, 1, CriticalType::elliptic, FiberKind::S2xS1, 1, zero));
      break;
    }
    case Case::generic: break;
  }
  return out;
}

// ---- fibers ------------------------------------------------------------------------------------

int regular_components(const EllipsoidSpec& spec, double h, double j, double g) {
  const SeparationAxes ax = separation_axes(spec);
  const double gt = separation_constant_from_G(ax, g, h, j);
  const double ar = ax.a[ax.r];
  const double cr = rotation_weight(ax);
  // Turning points: roots of (gt + h z)(z - a_r) + c_r j^2.
  const double qb = gt - h * ar, qc = cr * j * j - gt * ar;
  std::vector<double> roots;
  const double disc = qb * qb - 4 * h * qc;
  if (disc >= 0) {
    const double sq = std::sqrt(disc);
    const double z1 = qb >= 0 ? (-qb - sq) / (2 * h) : (-qb + sq) / (2 * h);
    roots.push_back(z1);
    if (z1 != 0) roots.push_back(qc / (h * z1));
  }
  // A loop is one allowed sub-interval of a confocal coordinate. Crossing a semi-axis endpoint flips
  // the sign of that Cartesian slot, so one full loop shifts the signs by the XOR of its endpoint
  // masks. The rotation slot is not a discrete sign in the full space and never contributes.
  std::array<std::vector<unsigned>, 2> shifts;
  for (int c = 0; c < 2; ++c) {
    const double lo = ax.a[c], hi = ax.a[c + 1];
    std::vector<double> cuts{lo};
    // At j = 0 one root sits on the rotation axis itself; rounding must not turn it into a cut.
    for (double z : roots)
      if (z > lo * (1 + 1e-12) && z < hi * (1 - 1e-12)) cuts.push_back(z);
    std::sort(cuts.begin() + 1, cuts.end());
    cuts.push_back(hi);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
      if (!(momentum_polynomial(ax, h, gt, j, mid) > 0)) continue;
      unsigned m = 0;
      if (k == 0 && c != ax.r) m ^= 1u << c;
      if (k + 2 == cuts.size() && c + 1 != ax.r) m ^= 1u << (c + 1);
      shifts[c].push_back(m);
    }
  }
  int total = 0;
  for (unsigned m1 : shifts[0])
    for (unsigned m2 : shifts[1]) {
      // Size of the subgroup of (Z2)^3 generated by m1 and m2.
      int group = 1;
      if (m1) group *= 2;
      if (m2 && m2 != m1) group *= 2;
      const int slots = 2;  // sign slots other than the rotation slot
      total += (1 << slots) / group;
    }
  return total;
}

FiberLabel fiber_label(const EllipsoidSpec& spec, double h, const EMValue& em) {
  require_positive(h);
  const auto& a = spec.alphas;
  switch (spec.symmetry) {
    case Case::generic: throw Error(ErrorKind::invalid_spec, "no fiber labels for the generic case");
    case Case::c22: {
      const double a1 = a[0], a2 = a[2];
      const double m = std::abs(em.j1) / std::sqrt(a1) + std::abs(em.j2) / std::sqrt(a2) - std::sqrt(2 * h);
      const double tol = 1e-9 * (1 + std::sqrt(2 * h));
      if (m > tol) throw Error(ErrorKind::out_of_range, "momenta outside the polygon");
      if (m > -tol) {
        const bool corner = std::abs(em.j1) < tol || std::abs(em.j2) < tol;
        return {corner ? FiberKind::S1 : FiberKind::T2, 1};
      }
      // Count the allowed arcs of the reduced libration on the quarter.
      int arcs = 0;
      bool inside = false;
      const int n = 2000;
      for (int k = 1; k < n; ++k) {
        const double phi = 0.5 * kPi * k / n;
        const bool ok = pphi_squared(a1, a2, h, em.j1, em.j2, phi) > 0;
        if (ok && !inside) ++arcs;
        inside = ok;
      }
      return {FiberKind::T3, std::max(arcs, 1)};
    }
    case Case::c112:
    case Case::c211: {
      const auto q = quadratics(spec, h);
      const double j = em.j, g = em.g, aj = std::abs(j);
      const double jm = diagram_j_max(spec, h), jt = tangency_j(spec, h);
      const double tol = 1e-9 * (1 + std::abs(g) + h);
      if (aj > jm + tol) throw Error(ErrorKind::out_of_range, "|j| beyond the diagram");
      const double gA = q[0].g_at(j), gB = q[1].g_at(j), gC = q[2].g_at(j);
      const bool onA = std::abs(g - gA) < tol, onB = std::abs(g - gB) < tol;
      const bool onC = aj <= jt + tol && std::abs(g - gC) < tol;
      if (onA && onB) return {FiberKind::S1, 1};
      if (onC && aj < tol) return {FiberKind::two_S1, 2};
      if (onB && onC) return {FiberKind::T2, 1};
      if (onA) return {FiberKind::T2, 1};
      if (onC) return {FiberKind::T2, 2};
      if (onB) return {aj < jt ? FiberKind::BxT2 : FiberKind::T2, 1};
      const double other = aj <= jt ? gC : gB;
      if (g < std::min(gA, other) || g > std::max(gA, other))
        throw Error(ErrorKind::out_of_range, "value outside the energy momentum image");
      return {FiberKind::T3, regular_components(spec, h, j, g)};
    }
    case Case::c13:
    case Case::c31: {
      const double bound = 2 * alpha_rev(spec) * h, j2 = em.j * em.j;
      const double tol = 1e-9 * (1 + bound);
      if (j2 > bound + tol) throw Error(ErrorKind::out_of_range, "j^2 beyond 2 alpha_rev h");
      if (j2 < tol) return {FiberKind::S2xS1, 1};
      if (j2 > bound - tol) return {FiberKind::SO3, 1};
      return {FiberKind::T2_bundle_S2, 1};
    }
  }
  return {};
}

// ---- numeric critical search -------------------------------------------------------------------

CriticalSearch find_critical(const EllipsoidSpec& spec, const PhasePoint& seed, const CriticalProblem& problem,
                             int max_iter) {
  const int nt = static_cast<int>(problem.targets.size()), nb = static_cast<int>(problem.basis.size());
  const int nmu = nt * nb;
  const int nres = 8 * nt + 2 + static_cast<int>(problem.pins.size());
  const int nvar = 8 + nmu;
  const auto& alphas = spec.alphas;

  auto residual = [&](const Eigen::VectorXd& v) {
    const State z = v.head<8>();
    Eigen::VectorXd r(nres);
    std::vector<State> xb;
    for (const auto& b : problem.basis) xb.push_back(flow_of(alphas, b, z));
    for (int t = 0; t < nt; ++t) {
      State x = flow_of(alphas, problem.targets[t], z);
      for (int b = 0; b < nb; ++b) x -= v[8 + t * nb + b] * xb[b];
      r.segment<8>(8 * t) = x;
    }
    const auto c = constraint_values(alphas, z);
    r[8 * nt] = c.c1;
    r[8 * nt + 1] = c.c2;
    for (std::size_t k = 0; k < problem.pins.size(); ++k)
      r[8 * nt + 2 + static_cast<int>(k)] = problem.pins[k].first.value(z) - problem.pins[k].second;
    return r;
  };

  Eigen::VectorXd v(nvar);
  v.head<8>() = to_state(seed);
  // Multipliers start at the least-squares fit at the seed.
  {
    const State z = v.head<8>();
    Eigen::MatrixXd B(8, nb);
    for (int b = 0; b < nb; ++b) B.col(b) = flow_of(alphas, problem.basis[b], z);
    for (int t = 0; t < nt; ++t) {
      const State x = flow_of(alphas, problem.targets[t], z);
      const Eigen::VectorXd mu = nb ? Eigen::VectorXd(B.colPivHouseholderQr().solve(x)) : Eigen::VectorXd();
      for (int b = 0; b < nb; ++b) v[8 + t * nb + b] = mu[b];
    }
  }

  CriticalSearch out;
  Eigen::VectorXd r = residual(v);
  double rn = r.norm();
  for (int it = 0; it < max_iter && rn > 1e-13; ++it) {
    out.iterations = it + 1;
    Eigen::MatrixXd J(nres, nvar);
    for (int k = 0; k < nvar; ++k) {
      const double step = 1e-7 * (1 + std::abs(v[k]));
      Eigen::VectorXd vp = v, vm = v;
      vp[k] += step;
      vm[k] -= step;
      J.col(k) = (residual(vp) - residual(vm)) / (2 * step);
    }
    const Eigen::VectorXd dv = J.completeOrthogonalDecomposition().solve(-r);
    double lam = 1;
    bool improved = false;
    for (int ls = 0; ls < 30; ++ls, lam *= 0.5) {
      const Eigen::VectorXd vt = v + lam * dv;
      const Eigen::VectorXd rt = residual(vt);
      if (rt.norm() < rn) {
        v = vt;
        r = rt;
        rn = rt.norm();
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  out.p = from_state(v.head<8>());
  out.residual = rn;
  out.converged = rn < 1e-10;
  return out;
}

// ---- SO(3) cases -------------------------------------------------------------------------------

namespace {

std::array<int, 3> triple_slots(const EllipsoidSpec& spec) {
  if (spec.symmetry == Case::c13) return {1, 2, 3};
  if (spec.symmetry == Case::c31) return {0, 1, 2};
  throw Error(ErrorKind::invalid_spec, "expected an SO(3) case");
}

int single_slot(const EllipsoidSpec& spec) { return spec.symmetry == Case::c13 ? 0 : 3; }

}  // namespace

PhasePoint so3_seed(const EllipsoidSpec& spec, double h, const std::array<double, 3>& u,
                    const std::array<double, 3>& v) {
  const auto t = triple_slots(spec);
  const double ar = alpha_rev(spec);
  double uu = 0, vv = 0, uv = 0;
  for (int k = 0; k < 3; ++k) {
    uu += u[k] * u[k];
    vv += v[k] * v[k];
    uv += u[k] * v[k];
  }
  if (std::abs(uu - 1) > 1e-12 || std::abs(vv - 1) > 1e-12 || std::abs(uv) > 1e-12)
    throw Error(ErrorKind::domain, "u and v must be orthonormal");
  PhasePoint p;
  for (int k = 0; k < 3; ++k) {
    p.x[t[k]] = std::sqrt(ar) * u[k];
    p.y[t[k]] = std::sqrt(2 * h) * v[k];
  }
  return p;
}

std::array<double, 3> so3_defining_residuals(const EllipsoidSpec& spec, double h, const PhasePoint& p) {
  const auto t = triple_slots(spec);
  double xx = 0, yy = 0, xy = 0;
  for (int k : t) {
    xx += p.x[k] * p.x[k];
    yy += p.y[k] * p.y[k];
    xy += p.x[k] * p.y[k];
  }
  return {xx - alpha_rev(spec), yy - 2 * h, xy};
}

ZeroMomentumCurve trace_zero_momentum_curve(const EllipsoidSpec& spec, double h, double tol) {
  const auto t = triple_slots(spec);
  const int s = single_slot(spec);
  PhasePoint p0;
  p0.x[s] = std::sqrt(spec.alphas[s]);
  p0.y[t[0]] = std::sqrt(2 * h);
  auto event = [s](const State& z) { return z[4 + s]; };
  const auto cross = find_crossings(spec, p0, 1e4, tol, event, -1, 1);
  if (cross.empty()) throw Error(ErrorKind::domain, "the J = 0 curve did not return");
  ZeroMomentumCurve out;
  out.period = cross[0].t;
  const auto& q = cross[0].p;
  out.closure_error = std::hypot(q.x[s] - p0.x[s], q.y[s] - p0.y[s]);
  IntegrateOptions opt;
  opt.tol = tol;
  opt.samples = 400;
  const Trajectory tr = integrate(spec, p0, out.period, opt);
  for (const auto& pt : tr.points) {
    out.points.push_back({pt.x[s], pt.y[s]});
    out.relation_error = std::max(out.relation_error, std::abs(so3_residual(spec, pt.x[s], pt.y[s], h, 0.0)));
  }
  return out;
}

}  // namespace geoflow
