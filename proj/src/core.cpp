#include "geoflow/core.hpp"

#include <algorithm>
#include <cmath>

namespace geoflow {

namespace {

bool nearly_equal(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

Case pattern_of(const Vec4& a) {
  const bool e01 = nearly_equal(a[0], a[1]);
  const bool e12 = nearly_equal(a[1], a[2]);
  const bool e23 = nearly_equal(a[2], a[3]);
  if (!e01 && !e12 && !e23) return Case::generic;
  if (e01 && !e12 && e23) return Case::c22;
  if (!e01 && !e12 && e23) return Case::c112;
  if (e01 && !e12 && !e23) return Case::c211;
  if (!e01 && e12 && e23) return Case::c13;
  if (e01 && e12 && !e23) return Case::c31;
  throw Error(ErrorKind::invalid_spec, "unsupported equality pattern of semi-axes");
}

}  // namespace

std::string to_string(Case c) {
  switch (c) {
    case Case::generic: return "generic";
    case Case::c22: return "c22";
    case Case::c112: return "c112";
    case Case::c211: return "c211";
    case Case::c13: return "c13";
    case Case::c31: return "c31";
  }
  return "?";
}

Case parse_case(const std::string& name) {
  for (Case c : {Case::generic, Case::c22, Case::c112, Case::c211, Case::c13, Case::c31})
    if (to_string(c) == name) return c;
  throw Error(ErrorKind::usage, "unknown case '" + name + "'");
}

EllipsoidSpec make_spec(Case c, const Vec4& alphas) {
  for (int i = 0; i < 4; ++i) {
    if (!(alphas[i] > 0) || !std::isfinite(alphas[i]))
      throw Error(ErrorKind::invalid_spec, "semi-axes must be positive and finite");
    if (i > 0 && alphas[i] < alphas[i - 1]) throw Error(ErrorKind::invalid_spec, "semi-axes must be non-decreasing");
  }
  if (pattern_of(alphas) != c)
    throw Error(ErrorKind::invalid_spec, "semi-axes do not match the equality pattern of case " + to_string(c));
  return {alphas, c};
}

std::size_t distinct_count(Case c) {
  switch (c) {
    case Case::generic: return 4;
    case Case::c112:
    case Case::c211: return 3;
    default: return 2;
  }
}

EllipsoidSpec expand_spec(Case c, const std::vector<double>& v) {
  if (v.size() != distinct_count(c))
    throw Error(ErrorKind::invalid_spec, "case " + to_string(c) + " expects " + std::to_string(distinct_count(c)) +
                                             " distinct semi-axes");
  Vec4 a{};
  switch (c) {
    case Case::generic: a = {v[0], v[1], v[2], v[3]}; break;
    case Case::c22: a = {v[0], v[0], v[1], v[1]}; break;
    case Case::c112: a = {v[0], v[1], v[2], v[2]}; break;
    case Case::c211: a = {v[0], v[0], v[1], v[2]}; break;
    case Case::c13: a = {v[0], v[1], v[1], v[1]}; break;
    case Case::c31: a = {v[0], v[0], v[0], v[1]}; break;
  }
  return make_spec(c, a);
}

State to_state(const PhasePoint& p) {
  State z;
  for (int i = 0; i < 4; ++i) {
    z[i] = p.x[i];
    z[4 + i] = p.y[i];
  }
  return z;
}

PhasePoint from_state(const State& z) {
  PhasePoint p;
  for (int i = 0; i < 4; ++i) {
    p.x[i] = z[i];
    p.y[i] = z[4 + i];
  }
  return p;
}

ConstraintValues constraint_values(const Vec4& a, const State& z) {
  ConstraintValues v;
  v.c1 = -1.0;
  for (int i = 0; i < 4; ++i) {
    v.c1 += z[i] * z[i] / a[i];
    v.c2 += z[i] * z[4 + i] / a[i];
    v.d += z[i] * z[i] / (a[i] * a[i]);
  }
  return v;
}

ConstraintValues constraint_values(const EllipsoidSpec& spec, const PhasePoint& p) {
  return constraint_values(spec.alphas, to_state(p));
}

double dirac_bracket_basis(const EllipsoidSpec& spec, const PhasePoint& p, BracketKind kind, int i, int k) {
  if (i < 0 || i > 3 || k < 0 || k > 3) throw Error(ErrorKind::index_range, "bracket index out of range");
  const auto& a = spec.alphas;
  const double d = constraint_values(spec, p).d;
  switch (kind) {
    case BracketKind::xx: return 0.0;
    case BracketKind::xy: return (i == k ? 1.0 : 0.0) - p.x[i] * p.x[k] / (d * a[i] * a[k]);
    case BracketKind::yy: return -(p.x[i] * p.y[k] - p.x[k] * p.y[i]) / (d * a[i] * a[k]);
  }
  return 0.0;
}

Mat8 bracket_tensor(const Vec4& a, const State& z) {
  double d = 0;
  for (int i = 0; i < 4; ++i) d += z[i] * z[i] / (a[i] * a[i]);
  Mat8 m = Mat8::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) {
      const double w = 1.0 / (d * a[i] * a[k]);
      const double xy = (i == k ? 1.0 : 0.0) - z[i] * z[k] * w;
      m(i, 4 + k) = xy;
      m(4 + k, i) = -xy;
      m(4 + i, 4 + k) = -(z[i] * z[4 + k] - z[k] * z[4 + i]) * w;
    }
  }
  return m;
}

Eigen::MatrixXd bracket_tensor_n(const std::vector<double>& a, const Eigen::VectorXd& z) {
  const int n = static_cast<int>(a.size());
  double d = 0;
  for (int i = 0; i < n; ++i) d += z[i] * z[i] / (a[i] * a[i]);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const double w = 1.0 / (d * a[i] * a[k]);
      const double xy = (i == k ? 1.0 : 0.0) - z[i] * z[k] * w;
      m(i, n + k) = xy;
      m(n + k, i) = -xy;
      m(n + i, n + k) = -(z[i] * z[n + k] - z[k] * z[n + i]) * w;
    }
  }
  return m;
}

State vector_field(const Vec4& a, const State& z) {
  double d = 0, c2 = 0, yy = 0;
  for (int i = 0; i < 4; ++i) {
    d += z[i] * z[i] / (a[i] * a[i]);
    c2 += z[i] * z[4 + i] / a[i];
    yy += z[4 + i] * z[4 + i] / a[i];
  }
  State f;
  for (int i = 0; i < 4; ++i) {
    const double w = 1.0 / (d * a[i]);
    f[i] = z[4 + i] - z[i] * c2 * w;
    f[4 + i] = -z[i] * yy * w + z[4 + i] * c2 * w;
  }
  return f;
}

TangentVector hamiltonian_vector_field(const EllipsoidSpec& spec, const PhasePoint& p) {
  const State f = vector_field(spec.alphas, to_state(p));
  TangentVector t;
  for (int i = 0; i < 4; ++i) {
    t.dx[i] = f[i];
    t.dy[i] = f[4 + i];
  }
  return t;
}

State constraint_gradient_c1(const Vec4& a, const State& z) {
  State g = State::Zero();
  for (int i = 0; i < 4; ++i) g[i] = 2.0 * z[i] / a[i];
  return g;
}

State constraint_gradient_c2(const Vec4& a, const State& z) {
  State g;
  for (int i = 0; i < 4; ++i) {
    g[i] = z[4 + i] / a[i];
    g[4 + i] = z[i] / a[i];
  }
  return g;
}

State project_state(const Vec4& a, const State& raw, double eps) {
  State z = raw;
  double c1 = constraint_values(a, z).c1;
  for (int it = 0; it < 50 && std::abs(c1) > 1e-15; ++it) {
    Eigen::Vector4d g;
    for (int i = 0; i < 4; ++i) g[i] = 2.0 * z[i] / a[i];
    const double gg = g.squaredNorm();
    if (!(gg > 0)) throw Error(ErrorKind::projection_failure, "projection: vanishing constraint gradient");
    for (int i = 0; i < 4; ++i) z[i] -= c1 * g[i] / gg;
    const double next = constraint_values(a, z).c1;
    if (std::abs(next) >= std::abs(c1)) {
      c1 = next;
      break;
    }
    c1 = next;
  }
  if (!(std::abs(c1) <= eps)) throw Error(ErrorKind::projection_failure, "projection did not converge");
  Eigen::Vector4d g;
  double gg = 0;
  for (int i = 0; i < 4; ++i) {
    g[i] = z[i] / a[i];
    gg += g[i] * g[i];
  }
  for (int pass = 0; pass < 2; ++pass) {
    const double c2 = constraint_values(a, z).c2;
    for (int i = 0; i < 4; ++i) z[4 + i] -= c2 * g[i] / gg;
  }
  const double c2 = constraint_values(a, z).c2;
  if (!(std::abs(c2) <= eps)) throw Error(ErrorKind::projection_failure, "tangency projection did not converge");
  return z;
}

PhasePoint project(const EllipsoidSpec& spec, const PhasePoint& raw, double eps) {
  return from_state(project_state(spec.alphas, to_state(raw), eps));
}

bool is_constrained(const EllipsoidSpec& spec, const PhasePoint& p, double eps) {
  const auto c = constraint_values(spec, p);
  return std::abs(c.c1) <= eps && std::abs(c.c2) <= eps;
}

double energy(const PhasePoint& p) {
  double s = 0;
  for (double v : p.y) s += v * v;
  return 0.5 * s;
}

PhasePoint random_point(const EllipsoidSpec& spec, std::mt19937_64& rng, double h) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto& a = spec.alphas;
  PhasePoint p;
  double s = 0;
  for (int i = 0; i < 4; ++i) {
    p.x[i] = normal(rng);
    s += p.x[i] * p.x[i] / a[i];
  }
  for (double& v : p.x) v /= std::sqrt(s);
  for (double& v : p.y) v = normal(rng);
  double c2 = 0, gg = 0;
  for (int i = 0; i < 4; ++i) {
    c2 += p.x[i] * p.y[i] / a[i];
    gg += p.x[i] * p.x[i] / (a[i] * a[i]);
  }
  for (int i = 0; i < 4; ++i) p.y[i] -= c2 * p.x[i] / a[i] / gg;
  if (h > 0) {
    const double scale = std::sqrt(h / energy(p));
    for (double& v : p.y) v *= scale;
  }
  return project(spec, p);
}

}  // namespace geoflow
