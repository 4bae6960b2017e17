#include "geoflow/reduction.hpp"

#include <algorithm>
#include <cmath>

namespace geoflow {

namespace {

struct BlockDef {
  std::vector<int> idx;
};

std::vector<BlockDef> blocks_of(Case c) {
  switch (c) {
    case Case::c22: return {{{0, 1}}, {{2, 3}}};
    case Case::c112: return {{{2, 3}}};
    case Case::c211: return {{{0, 1}}};
    case Case::c13: return {{{1, 2, 3}}};
    case Case::c31: return {{{0, 1, 2}}};
    case Case::generic: break;
  }
  throw Error(ErrorKind::invalid_spec, "the generic case has no symmetry to reduce");
}

InvariantBlock block_invariants(const PhasePoint& p, const BlockDef& b) {
  InvariantBlock r;
  for (int i : b.idx) {
    r.pi1 += p.x[i] * p.x[i];
    r.pi2 += p.y[i] * p.y[i];
    r.pi3 += p.x[i] * p.y[i];
  }
  if (b.idx.size() == 2) {
    r.pi4 = p.x[b.idx[0]] * p.y[b.idx[1]] - p.x[b.idx[1]] * p.y[b.idx[0]];
  } else {
    double s = 0;
    for (std::size_t u = 0; u < b.idx.size(); ++u)
      for (std::size_t v = u + 1; v < b.idx.size(); ++v) {
        const int i = b.idx[u], k = b.idx[v];
        const double l = p.x[i] * p.y[k] - p.x[k] * p.y[i];
        s += l * l;
      }
    r.pi4 = std::sqrt(s);
  }
  return r;
}

double sq(double v) { return v * v; }

// j^2 / xi^2 with the convention 0/0 = 0 on a collapsed block.
double centrifugal(double j, double xi) {
  if (xi == 0) {
    if (j == 0) return 0.0;
    throw Error(ErrorKind::singular_potential, "rotation-block coordinate vanishes with nonzero momentum");
  }
  return j * j / (xi * xi);
}

}  // namespace

std::vector<InvariantBlock> invariants(const EllipsoidSpec& spec, const PhasePoint& p) {
  std::vector<InvariantBlock> out;
  for (const auto& b : blocks_of(spec.symmetry)) out.push_back(block_invariants(p, b));
  return out;
}

ReducedLayout reduced_layout(const EllipsoidSpec& spec) {
  const auto& a = spec.alphas;
  switch (spec.symmetry) {
    case Case::c22: return {{a[0], a[2]}, {0, 1}};
    case Case::c112: return {{a[0], a[1], a[2]}, {2}};
    case Case::c211: return {{a[0], a[2], a[3]}, {0}};
    case Case::c13: return {{a[0], a[1]}, {1}};
    case Case::c31: return {{a[0], a[3]}, {0}};
    case Case::generic: break;
  }
  throw Error(ErrorKind::invalid_spec, "the generic case has no symmetry to reduce");
}

ReducedPoint reduce(const EllipsoidSpec& spec, const PhasePoint& p) {
  const auto lay = reduced_layout(spec);
  const auto blocks = blocks_of(spec.symmetry);
  ReducedPoint r;
  r.symmetry = spec.symmetry;
  r.axes = lay.axes;
  r.rot_slots = lay.rot_slots;
  const std::size_t n = lay.axes.size();
  r.xi.assign(n, 0.0);
  r.eta.assign(n, 0.0);
  // Untouched coordinates fill the remaining slots in index order.
  std::vector<bool> in_block(4, false);
  for (const auto& b : blocks)
    for (int i : b.idx) in_block[i] = true;
  std::vector<int> free_idx;
  for (int i = 0; i < 4; ++i)
    if (!in_block[i]) free_idx.push_back(i);
  std::size_t fi = 0;
  std::size_t bi = 0;
  for (std::size_t s = 0; s < n; ++s) {
    const bool rot = std::find(r.rot_slots.begin(), r.rot_slots.end(), static_cast<int>(s)) != r.rot_slots.end();
    if (!rot) {
      r.xi[s] = p.x[free_idx[fi]];
      r.eta[s] = p.y[free_idx[fi]];
      ++fi;
      continue;
    }
    const auto inv = block_invariants(p, blocks[bi++]);
    r.momenta.push_back(inv.pi4);
    if (inv.pi1 > 0) {
      r.xi[s] = std::sqrt(inv.pi1);
      r.eta[s] = inv.pi3 / r.xi[s];
    } else {
      r.singular = true;
    }
  }
  for (double j : r.momenta)
    if (j == 0) r.singular = true;
  return r;
}

PhasePoint lift(const EllipsoidSpec& spec, const ReducedPoint& r) {
  const auto blocks = blocks_of(spec.symmetry);
  PhasePoint p;
  std::vector<bool> in_block(4, false);
  for (const auto& b : blocks)
    for (int i : b.idx) in_block[i] = true;
  std::vector<int> free_idx;
  for (int i = 0; i < 4; ++i)
    if (!in_block[i]) free_idx.push_back(i);
  std::size_t fi = 0, bi = 0;
  for (std::size_t s = 0; s < r.xi.size(); ++s) {
    const bool rot = std::find(r.rot_slots.begin(), r.rot_slots.end(), static_cast<int>(s)) != r.rot_slots.end();
    if (!rot) {
      p.x[free_idx[fi]] = r.xi[s];
      p.y[free_idx[fi]] = r.eta[s];
      ++fi;
      continue;
    }
    const auto& b = blocks[bi];
    const double j = r.momenta[bi];
    ++bi;
    p.x[b.idx[0]] = r.xi[s];
    p.y[b.idx[0]] = r.eta[s];
    if (r.xi[s] != 0) p.y[b.idx[1]] = j / r.xi[s];
    else if (j != 0) throw Error(ErrorKind::singular_potential, "cannot lift a collapsed block with nonzero momentum");
  }
  return p;
}

double reduced_hamiltonian(const ReducedPoint& r) {
  double e = 0;
  for (double v : r.eta) e += v * v;
  for (std::size_t b = 0; b < r.rot_slots.size(); ++b) e += centrifugal(r.momenta[b], r.xi[r.rot_slots[b]]);
  return 0.5 * e;
}

double reduced_integral(const ReducedPoint& r) {
  if (r.symmetry == Case::c22) {
    const double a1 = r.axes[0], a2 = r.axes[1];
    const double p11 = sq(r.xi[0]), p21 = sq(r.eta[0]) + centrifugal(r.momenta[0], r.xi[0]), p31 = r.xi[0] * r.eta[0];
    const double p12 = sq(r.xi[1]), p22 = sq(r.eta[1]) + centrifugal(r.momenta[1], r.xi[1]), p32 = r.xi[1] * r.eta[1];
    return p21 + (p11 * p22 + p12 * p21 - 2.0 * p31 * p32) / (a1 - a2);
  }
  if (r.symmetry != Case::c112 && r.symmetry != Case::c211)
    throw Error(ErrorKind::invalid_spec, "no reduced extra integral for this case");
  const int s = r.rot_slots[0];
  const double ar = r.axes[s];
  const double c = centrifugal(r.momenta[0], r.xi[s]);
  double g = sq(r.eta[s]);
  double shape = 1.0;
  for (std::size_t k = 0; k < r.xi.size(); ++k) {
    if (static_cast<int>(k) == s) continue;
    const double den = ar - r.axes[k];
    g += sq(r.xi[s] * r.eta[k] - r.xi[k] * r.eta[s]) / den;
    shape += sq(r.xi[k]) / den;
  }
  return g + c * shape;
}

std::array<double, 2> reduced_casimirs(const ReducedPoint& r) {
  std::array<double, 2> c{-1.0, 0.0};
  for (std::size_t k = 0; k < r.xi.size(); ++k) {
    c[0] += sq(r.xi[k]) / r.axes[k];
    c[1] += r.xi[k] * r.eta[k] / r.axes[k];
  }
  return c;
}

Eigen::VectorXd reduced_state(const ReducedPoint& r) {
  const int n = static_cast<int>(r.xi.size());
  Eigen::VectorXd z(2 * n);
  for (int k = 0; k < n; ++k) {
    z[k] = r.xi[k];
    z[n + k] = r.eta[k];
  }
  return z;
}

Eigen::VectorXd reduced_vector_field(const ReducedPoint& r) {
  const int n = static_cast<int>(r.xi.size());
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(2 * n);
  for (int k = 0; k < n; ++k) grad[n + k] = r.eta[k];
  for (std::size_t b = 0; b < r.rot_slots.size(); ++b) {
    const int s = r.rot_slots[b];
    if (r.xi[s] == 0) {
      if (r.momenta[b] != 0) throw Error(ErrorKind::singular_potential, "reduced flow undefined on a collapsed block");
      continue;
    }
    grad[s] = -sq(r.momenta[b]) / (r.xi[s] * r.xi[s] * r.xi[s]);
  }
  return bracket_tensor_n(r.axes, reduced_state(r)) * grad;
}

Cartesian22 chart_to_cartesian_22(double a1, double a2, const Chart22& c) {
  const double s = std::sin(c.phi), co = std::cos(c.phi);
  const double d = a1 * s * s + a2 * co * co;
  Cartesian22 q;
  q.xi = {std::sqrt(a1) * co, std::sqrt(a2) * s};
  q.eta = {-std::sqrt(a1) * s * c.pphi / d, std::sqrt(a2) * co * c.pphi / d};
  return q;
}

Chart22 cartesian_to_chart_22(double a1, double a2, const Cartesian22& q) {
  Chart22 c;
  c.phi = std::atan2(q.xi[1] / std::sqrt(a2), q.xi[0] / std::sqrt(a1));
  c.pphi = -std::sqrt(a1) * std::sin(c.phi) * q.eta[0] + std::sqrt(a2) * std::cos(c.phi) * q.eta[1];
  return c;
}

double chart_hamiltonian_22(double a1, double a2, double j1, double j2, const Chart22& c) {
  const double s = std::sin(c.phi), co = std::cos(c.phi);
  if ((co == 0 && j1 != 0) || (s == 0 && j2 != 0))
    throw Error(ErrorKind::pole, "chart Hamiltonian has a pole on the quarter boundary");
  const double d = a1 * s * s + a2 * co * co;
  double v = 0.5 * c.pphi * c.pphi / d;
  if (j1 != 0) v += j1 * j1 / (2 * a1 * co * co);
  if (j2 != 0) v += j2 * j2 / (2 * a2 * s * s);
  return v;
}

std::array<double, 2> singular_residual_22(double a1, double a2, double pi1, double pi2, double pi3, double h,
                                           double j1, double j2) {
  const double q1 = pi1 * pi2 - pi3 * pi3 - j1 * j1;
  const double q2 = a2 * (1.0 - pi1 / a1) * (2.0 * h - pi2) - a2 * a2 / (a1 * a1) * pi3 * pi3 - j2 * j2;
  return {q1, q2};
}

double casimir_residual_block(const EllipsoidSpec& spec, double u0, double u1, double v0, double v1, double pi2,
                              double j) {
  const auto& a = spec.alphas;
  double ab, au0, au1;
  if (spec.symmetry == Case::c112) {
    ab = a[2], au0 = a[0], au1 = a[1];
  } else if (spec.symmetry == Case::c211) {
    ab = a[0], au0 = a[2], au1 = a[3];
  } else {
    throw Error(ErrorKind::invalid_spec, "block Casimir relation is defined for c112 and c211");
  }
  const double rest = 1.0 - u0 * u0 / au0 - u1 * u1 / au1;
  const double tang = u0 * v0 / au0 + u1 * v1 / au1;
  return ab * rest * pi2 - ab * ab * tang * tang - j * j;
}

double so3_residual(const EllipsoidSpec& spec, double xs, double ys, double h, double j) {
  const auto& a = spec.alphas;
  double as;
  if (spec.symmetry == Case::c13)
    as = a[0];
  else if (spec.symmetry == Case::c31)
    as = a[3];
  else
    throw Error(ErrorKind::invalid_spec, "SO(3) relation is defined for c13 and c31");
  const double at = spec.symmetry == Case::c13 ? a[1] : a[0];
  return at * (1.0 - xs * xs / as) * (2.0 * h - ys * ys) - at * at * xs * xs * ys * ys / (as * as) - j * j;
}

std::vector<double> singular_relation_residual(const EllipsoidSpec& spec, const PhasePoint& p) {
  const auto inv = invariants(spec, p);
  const double h = energy(p);
  switch (spec.symmetry) {
    case Case::c22: {
      const auto r = singular_residual_22(spec.alphas[0], spec.alphas[2], inv[0].pi1, inv[0].pi2, inv[0].pi3, h,
                                          inv[0].pi4, inv[1].pi4);
      return {r[0], r[1]};
    }
    case Case::c112: return {casimir_residual_block(spec, p.x[0], p.x[1], p.y[0], p.y[1], inv[0].pi2, inv[0].pi4)};
    case Case::c211: return {casimir_residual_block(spec, p.x[2], p.x[3], p.y[2], p.y[3], inv[0].pi2, inv[0].pi4)};
    case Case::c13: return {so3_residual(spec, p.x[0], p.y[0], h, inv[0].pi4)};
    case Case::c31: return {so3_residual(spec, p.x[3], p.y[3], h, inv[0].pi4)};
    case Case::generic: break;
  }
  throw Error(ErrorKind::invalid_spec, "the generic case has no symmetry to reduce");
}

}  // namespace geoflow
