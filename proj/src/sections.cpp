#include "geoflow/sections.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "geoflow/integrator.hpp"
#include "geoflow/parallel.hpp"

namespace geoflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::array<double, 3> distinct_axes(const EllipsoidSpec& spec) {
  if (spec.symmetry != Case::c112) throw Error(ErrorKind::invalid_spec, "sections are implemented for c112");
  return {spec.alphas[0], spec.alphas[1], spec.alphas[2]};
}

// sin^2 of the lower edge of the allowed range.
double sin2_min(const std::array<double, 3>& a, double h, double j) {
  return j * j * (a[2] - a[0]) / (2 * h * a[2] * (a[2] - a[1]));
}

}  // namespace

std::string to_string(Atom a) {
  switch (a) {
    case Atom::B: return "B";
    case Atom::C2: return "C2";
    case Atom::point: return "point";
    case Atom::regular_oval: return "regular-oval";
  }
  return "?";
}

double section_pphi_squared(const std::array<double, 3>& a, double h, double j, double phi) {
  const double s = std::sin(phi), c = std::cos(phi);
  const double d = a[1] * s * s + a[2] * c * c;
  const double first = 2 * h * a[2] / (a[2] - a[0]) - (j != 0 ? j * j / ((a[2] - a[1]) * s * s) : 0.0);
  return first * (a[2] - a[0]) * (a[2] - a[1]) * d * c * c / (a[2] * (d - a[0]));
}

SectionCurve analytic_section_curve(const std::array<double, 3>& a, double h, double j, std::size_t n) {
  if (!(a[0] < a[1] && a[1] < a[2])) throw Error(ErrorKind::invalid_spec, "need a0 < a1 < a2");
  if (!(h > 0)) throw Error(ErrorKind::domain, "energy must be positive");
  if (n < 2) throw Error(ErrorKind::resolution, "need at least two samples");
  const double s2 = sin2_min(a, h, j);
  if (s2 > 1 + 1e-12) throw Error(ErrorKind::empty_separatrix, "j^2 above the tangency value");
  SectionCurve c;
  c.alphas = a;
  c.h = h;
  c.j = j;
  c.g = 2 * a[2] * h / (a[2] - a[0]) - a[0] * j * j / (a[2] * (a[2] - a[0]));
  c.phi_min = std::asin(std::sqrt(std::min(s2, 1.0)));
  c.phi_max = kPi - c.phi_min;
  for (int sign : {1, -1})
    for (std::size_t k = 0; k < n; ++k) {
      const double phi = c.phi_min + (c.phi_max - c.phi_min) * static_cast<double>(k) / static_cast<double>(n - 1);
      // Clamp the rounding noise at the turning points.
      const double p2 = std::max(0.0, section_pphi_squared(a, h, j, phi));
      c.samples.push_back({phi, sign * std::sqrt(p2)});
    }
  return c;
}

Atom classify_atom(const SectionCurve& curve, bool quotient, std::size_t grid) {
  if (grid < 64) throw Error(ErrorKind::resolution, "classification grid is too coarse");
  auto f = [&](double phi) { return section_pphi_squared(curve.alphas, curve.h, curve.j, phi); };
  // Sample strictly inside (0, pi): the formula has removable 0/0 points at the ends when j = 0.
  std::vector<double> phi(grid), val(grid);
  double scale = 0;
  for (std::size_t k = 0; k < grid; ++k) {
    phi[k] = kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(grid);
    val[k] = f(phi[k]);
    scale = std::max(scale, val[k]);
  }
  const double tol = 1e-12 * (1 + curve.h * curve.alphas[2]);
  if (scale <= tol) return Atom::point;

  // Vertices: interior double zeros of pphi^2, where the two branches cross transversally.
  int vertices = 0;
  for (std::size_t k = 1; k + 1 < grid; ++k) {
    if (!(val[k] <= val[k - 1] && val[k] <= val[k + 1]) || val[k - 1] <= 0 || val[k + 1] <= 0) continue;
    const auto m = boost::math::tools::brent_find_minima(f, phi[k - 1], phi[k + 1], 50);
    if (std::abs(m.second) < 1e-10 * scale) ++vertices;
  }
  // Lobes: positive runs, split at the vertices.
  int runs = 0;
  std::size_t shortest = grid;
  std::size_t len = 0;
  for (std::size_t k = 0; k <= grid; ++k) {
    if (k < grid && val[k] > 0) {
      ++len;
      continue;
    }
    if (len) {
      ++runs;
      shortest = std::min(shortest, len);
    }
    len = 0;
  }
  if (shortest < 3) throw Error(ErrorKind::resolution, "a lobe spans fewer than three grid points");
  const int lobes = runs + vertices;
  const bool joins_mirror = val.front() > tol;

  if (vertices == 0) return Atom::regular_oval;
  if (joins_mirror) {
    // Together with its mirror image the curve is a circle through two vertices.
    if (vertices == 1) return quotient ? Atom::B : Atom::C2;
  } else if (vertices == 1 && lobes == 2) {
    return Atom::B;
  }
  throw Error(ErrorKind::resolution, "unrecognised section topology");
}

double lobe_separation(const SectionCurve& curve) { return 2 * curve.phi_min; }

double distance_to_curve(const SectionCurve& curve, double phi, double pphi) {
  auto branch = [&](double t) { return std::sqrt(std::max(0.0, section_pphi_squared(curve.alphas, curve.h, curve.j, t))); };
  auto d2 = [&](double t) {
    const double dp = std::abs(pphi) - branch(t);
    return (t - phi) * (t - phi) + dp * dp;
  };
  const double lo = std::max(curve.phi_min, phi - 0.05), hi = std::min(curve.phi_max, phi + 0.05);
  if (!(lo < hi)) return std::sqrt(std::min(d2(curve.phi_min), d2(curve.phi_max)));
  const auto m = boost::math::tools::brent_find_minima(d2, lo, hi, 50);
  double best = std::min({m.second, d2(lo), d2(hi)});
  // Brent only resolves t to about sqrt(eps). Near a turning point the branch is almost vertical and
  // that slack shows up in pphi, so also measure horizontally to curve points of the same |pphi|.
  auto level = [&](double t) { return section_pphi_squared(curve.alphas, curve.h, curve.j, t) - pphi * pphi; };
  const int n = 64;
  for (int k = 0; k < n; ++k) {
    const double a = lo + (hi - lo) * k / n, b = lo + (hi - lo) * (k + 1) / n;
    if ((level(a) < 0) == (level(b) < 0)) continue;
    auto tol = [](double u, double v) { return std::abs(u - v) < 1e-15; };
    const auto r = boost::math::tools::bisect(level, a, b, tol);
    best = std::min(best, d2(0.5 * (r.first + r.second)));
  }
  return std::sqrt(best);
}

PhasePoint section_seed(const EllipsoidSpec& spec, double h, double j, double phi, double pphi) {
  const auto a = distinct_axes(spec);
  const double s = std::sin(phi), c = std::cos(phi);
  const double d = a[1] * s * s + a[2] * c * c;
  const double xi2 = std::sqrt(a[2]) * s;
  if (j != 0 && !(xi2 > 0)) throw Error(ErrorKind::coordinate_singularity, "seed on the rotation axis with j != 0");
  const double rot = j != 0 ? j * j / (xi2 * xi2) : 0.0;
  const double e0 = 2 * h - pphi * pphi / d - rot;
  if (e0 < -1e-12) throw Error(ErrorKind::domain, "no real eta0 at this section point");
  PhasePoint p;
  p.x = {0, std::sqrt(a[1]) * c, xi2, 0};
  p.y = {std::sqrt(std::max(e0, 0.0)), -std::sqrt(a[1]) * s * pphi / d, std::sqrt(a[2]) * c * pphi / d,
         j != 0 ? j / xi2 : 0.0};
  return p;
}

std::array<double, 2> section_coordinates(const EllipsoidSpec& spec, const PhasePoint& p) {
  const auto a = distinct_axes(spec);
  const double xi1 = p.x[1];
  const double xi2 = std::hypot(p.x[2], p.x[3]);
  const double eta1 = p.y[1];
  const double eta2 = xi2 > 0 ? (p.x[2] * p.y[2] + p.x[3] * p.y[3]) / xi2 : p.y[2];
  const double phi = std::atan2(xi2 / std::sqrt(a[2]), xi1 / std::sqrt(a[1]));
  return {phi, -std::sqrt(a[1]) * std::sin(phi) * eta1 + std::sqrt(a[2]) * std::cos(phi) * eta2};
}

std::vector<PhasePoint> separatrix_seeds(const EllipsoidSpec& spec, double h, double j, std::size_t count) {
  const auto curve = analytic_section_curve(distinct_axes(spec), h, j, 2);
  std::vector<PhasePoint> out;
  for (std::size_t k = 0; k < count; ++k) {
    // Offsets avoid the turning points and the vertex at pi/2.
    const double u = (static_cast<double>(k) + 0.5) / static_cast<double>(count);
    double phi = curve.phi_min + (curve.phi_max - curve.phi_min) * u;
    if (std::abs(phi - kPi / 2) < 1e-3) phi += 2e-3;
    const double p = std::sqrt(std::max(0.0, section_pphi_squared(curve.alphas, h, j, phi)));
    out.push_back(project(spec, section_seed(spec, h, j, phi, k % 2 ? -p : p)));
  }
  return out;
}

std::vector<SectionPoint> numeric_section(const EllipsoidSpec& spec, const std::vector<PhasePoint>& seeds,
                                          double t_end, double tol, std::size_t max_crossings) {
  distinct_axes(spec);
  std::vector<std::vector<SectionPoint>> per(seeds.size());
  auto event = [](const State& z) { return z[0]; };
  parallel_for(seeds.size(), [&](std::size_t i) {
    for (const auto& c : find_crossings(spec, seeds[i], t_end, tol, event, +1, max_crossings)) {
      const auto q = section_coordinates(spec, c.p);
      per[i].push_back({q[0], q[1], i});
    }
  });
  std::vector<SectionPoint> out;
  for (auto& v : per) out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace geoflow
