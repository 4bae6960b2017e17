#include "geoflow/conserved.hpp"

#include <cmath>

namespace geoflow {

State gradient_of(const Observable& f, const State& z) {
  if (f.gradient) return f.gradient(z);
  State g;
  for (int a = 0; a < 8; ++a) {
    const double step = 1e-6 * (1.0 + std::abs(z[a]));
    State zp = z, zm = z;
    zp[a] += step;
    zm[a] -= step;
    g[a] = (f.value(zp) - f.value(zm)) / (2.0 * step);
  }
  return g;
}

double poisson_bracket(const Vec4& alphas, const Observable& f, const Observable& g, const State& z) {
  const State df = gradient_of(f, z), dg = gradient_of(g, z);
  const Mat8 P = bracket_tensor(alphas, z);
  // Upper triangle only, so that swapping f and g negates every term exactly.
  double s = 0;
  for (int a = 0; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b) s += P(a, b) * (df[a] * dg[b] - df[b] * dg[a]);
  return s;
}

double poisson_bracket(const EllipsoidSpec& spec, const Observable& f, const Observable& g, const PhasePoint& p) {
  return poisson_bracket(spec.alphas, f, g, to_state(p));
}

State flow_of(const Vec4& alphas, const Observable& f, const State& z) {
  return bracket_tensor(alphas, z) * gradient_of(f, z);
}

namespace {

double ang(const State& z, int i, int k) { return z[i] * z[4 + k] - z[k] * z[4 + i]; }

void add_ang_gradient(State& g, const State& z, int i, int k, double w) {
  g[i] += w * z[4 + k];
  g[4 + k] += w * z[i];
  g[k] -= w * z[4 + i];
  g[4 + i] -= w * z[k];
}

}  // namespace

double quad_value(const QuadForm& q, const State& z) {
  double s = 0;
  for (int i = 0; i < 4; ++i) s += q.ycoef[i] * z[4 + i] * z[4 + i];
  for (const auto& t : q.terms) {
    const double l = ang(z, t.i, t.k);
    s += t.c * l * l;
  }
  return s;
}

State quad_gradient(const QuadForm& q, const State& z) {
  State g = State::Zero();
  for (int i = 0; i < 4; ++i) g[4 + i] += 2.0 * q.ycoef[i] * z[4 + i];
  for (const auto& t : q.terms) add_ang_gradient(g, z, t.i, t.k, 2.0 * t.c * ang(z, t.i, t.k));
  return g;
}

namespace obs {

Observable hamiltonian() {
  return {"H", [](const State& z) { return 0.5 * z.tail<4>().squaredNorm(); },
          [](const State& z) {
            State g = State::Zero();
            g.tail<4>() = z.tail<4>();
            return g;
          }};
}

Observable c1(const Vec4& a) {
  return {"C1", [a](const State& z) { return constraint_values(a, z).c1; },
          [a](const State& z) { return constraint_gradient_c1(a, z); }};
}

Observable c2(const Vec4& a) {
  return {"C2", [a](const State& z) { return constraint_values(a, z).c2; },
          [a](const State& z) { return constraint_gradient_c2(a, z); }};
}

Observable angular_momentum(int i, int k) {
  return {"L" + std::to_string(i) + std::to_string(k), [i, k](const State& z) { return ang(z, i, k); },
          [i, k](const State& z) {
            State g = State::Zero();
            add_ang_gradient(g, z, i, k, 1.0);
            return g;
          }};
}

Observable quadratic(std::string name, QuadForm q) {
  return {std::move(name), [q](const State& z) { return quad_value(q, z); },
          [q](const State& z) { return quad_gradient(q, z); }};
}

Observable linear_combination(std::string name, std::vector<std::pair<double, Observable>> parts) {
  Observable o;
  o.name = std::move(name);
  o.value = [parts](const State& z) {
    double s = 0;
    for (const auto& [c, f] : parts) s += c * f.value(z);
    return s;
  };
  o.gradient = [parts](const State& z) {
    State g = State::Zero();
    for (const auto& [c, f] : parts) g += c * gradient_of(f, z);
    return g;
  };
  return o;
}

Observable generic_integral(const Vec4& a, int i) {
  QuadForm q;
  q.ycoef[i] = 1.0;
  for (int k = 0; k < 4; ++k) {
    if (k == i) continue;
    if (std::abs(a[i] - a[k]) < 1e-8)
      throw Error(ErrorKind::degenerate_axes,
                  "F" + std::to_string(i) + " is undefined for coinciding semi-axes; use the case integral");
    q.terms.push_back({i, k, 1.0 / (a[i] - a[k])});
  }
  return quadratic("F" + std::to_string(i), q);
}

}  // namespace obs

namespace {

Observable total_angular(const std::vector<std::pair<int, int>>& planes) {
  QuadForm q;
  for (auto [i, k] : planes) q.terms.push_back({i, k, 1.0});
  return {"J", [q](const State& z) { return std::sqrt(quad_value(q, z)); },
          [q](const State& z) {
            const double j = std::sqrt(quad_value(q, z));
            if (j == 0) return State(State::Zero());
            return State(quad_gradient(q, z) / (2.0 * j));
          }};
}

Observable named(Observable o, std::string name) {
  o.name = std::move(name);
  return o;
}

Observable g22(const Vec4& a, bool first) {
  const double a1 = a[0], a2 = a[2];
  QuadForm q;
  const double c = first ? 1.0 / (a1 - a2) : 1.0 / (a2 - a1);
  for (auto [i, k] : {std::pair{0, 2}, {0, 3}, {1, 2}, {1, 3}}) q.terms.push_back({i, k, c});
  if (first)
    q.ycoef = {1, 1, 0, 0};
  else
    q.ycoef = {0, 0, 1, 1};
  return obs::quadratic(first ? "G1" : "G2", q);
}

Observable g112(const Vec4& a) {
  QuadForm q;
  q.ycoef = {0, 0, 1, 1};
  q.terms = {{0, 2, 1.0 / (a[2] - a[0])}, {0, 3, 1.0 / (a[2] - a[0])}, {1, 2, 1.0 / (a[2] - a[1])},
             {1, 3, 1.0 / (a[2] - a[1])}};
  return obs::quadratic("G", q);
}

Observable g211(const Vec4& a) {
  QuadForm q;
  q.ycoef = {1, 1, 0, 0};
  q.terms = {{0, 2, 1.0 / (a[0] - a[2])}, {1, 2, 1.0 / (a[0] - a[2])}, {0, 3, 1.0 / (a[0] - a[3])},
             {1, 3, 1.0 / (a[0] - a[3])}};
  return obs::quadratic("G", q);
}

}  // namespace

std::vector<Observable> declared_integrals(const EllipsoidSpec& spec) {
  const auto& a = spec.alphas;
  switch (spec.symmetry) {
    case Case::generic:
      return {obs::generic_integral(a, 0), obs::generic_integral(a, 1), obs::generic_integral(a, 2),
              obs::generic_integral(a, 3)};
    case Case::c22:
      return {g22(a, true), g22(a, false), named(obs::angular_momentum(0, 1), "J1"),
              named(obs::angular_momentum(2, 3), "J2")};
    case Case::c112:
      return {obs::generic_integral(a, 0), obs::generic_integral(a, 1), g112(a), named(obs::angular_momentum(2, 3), "J")};
    case Case::c211:
      return {obs::generic_integral(a, 2), obs::generic_integral(a, 3), g211(a), named(obs::angular_momentum(0, 1), "J")};
    case Case::c13:
      return {named(obs::angular_momentum(1, 2), "L12"), named(obs::angular_momentum(1, 3), "L13"),
              named(obs::angular_momentum(2, 3), "L23"), total_angular({{1, 2}, {1, 3}, {2, 3}})};
    case Case::c31:
      return {named(obs::angular_momentum(0, 1), "L01"), named(obs::angular_momentum(0, 2), "L02"),
              named(obs::angular_momentum(1, 2), "L12"), total_angular({{0, 1}, {0, 2}, {1, 2}})};
  }
  return {};
}

Observable integral(const EllipsoidSpec& spec, const std::string& label) {
  if (label == "H") return obs::hamiltonian();
  for (auto& o : declared_integrals(spec))
    if (o.name == label) return o;
  throw Error(ErrorKind::invalid_spec, "no integral '" + label + "' in case " + to_string(spec.symmetry));
}

std::vector<Observable> independent_integrals(const EllipsoidSpec& spec) {
  const auto& a = spec.alphas;
  switch (spec.symmetry) {
    case Case::generic:
      return {obs::hamiltonian(), obs::generic_integral(a, 0), obs::generic_integral(a, 1),
              obs::generic_integral(a, 2)};
    case Case::c22: return {obs::hamiltonian(), integral(spec, "J1"), integral(spec, "J2")};
    case Case::c112:
    case Case::c211: return {obs::hamiltonian(), integral(spec, "J"), integral(spec, "G")};
    case Case::c13: return {obs::hamiltonian(), integral(spec, "J"), integral(spec, "L12")};
    case Case::c31: return {obs::hamiltonian(), integral(spec, "J"), integral(spec, "L01")};
  }
  return {};
}

ConservedSet conserved_set(const EllipsoidSpec& spec, const PhasePoint& p) {
  const State z = to_state(p);
  ConservedSet s;
  s.h = energy(p);
  for (const auto& o : declared_integrals(spec)) s.values[o.name] = o.value(z);
  return s;
}

double alpha_rev(const EllipsoidSpec& spec) {
  if (spec.symmetry == Case::c13) return spec.alphas[1];
  if (spec.symmetry == Case::c31) return spec.alphas[0];
  throw Error(ErrorKind::invalid_spec, "alpha_rev is defined for the SO(3) cases only");
}

std::map<std::string, double> relation_residuals(const EllipsoidSpec& spec, const PhasePoint& p) {
  const auto s = conserved_set(spec, p);
  const auto& v = s.values;
  const auto& a = spec.alphas;
  const double h2 = 2.0 * s.h;
  std::map<std::string, double> r;
  auto sq = [](double t) { return t * t; };
  switch (spec.symmetry) {
    case Case::generic: {
      double sum = 0, wsum = 0;
      for (int i = 0; i < 4; ++i) {
        const double f = v.at("F" + std::to_string(i));
        sum += f;
        wsum += f / a[i];
      }
      r["sum F/alpha"] = wsum;
      r["2H - sum F"] = h2 - sum;
      break;
    }
    case Case::c22: {
      const double a1 = a[0], a2 = a[2];
      r["2H - G1 - G2"] = h2 - v.at("G1") - v.at("G2");
      r["G1/a1 + G2/a2 - J1^2/a1^2 - J2^2/a2^2"] =
          v.at("G1") / a1 + v.at("G2") / a2 - sq(v.at("J1")) / sq(a1) - sq(v.at("J2")) / sq(a2);
      break;
    }
    case Case::c112:
      r["2H - F0 - F1 - G"] = h2 - v.at("F0") - v.at("F1") - v.at("G");
      r["F0/a0 + F1/a1 + G/a2 - J^2/a2^2"] =
          v.at("F0") / a[0] + v.at("F1") / a[1] + v.at("G") / a[2] - sq(v.at("J")) / sq(a[2]);
      break;
    case Case::c211:
      r["2H - G - F2 - F3"] = h2 - v.at("G") - v.at("F2") - v.at("F3");
      r["G/a0 + F2/a2 + F3/a3 - J^2/a0^2"] =
          v.at("G") / a[0] + v.at("F2") / a[2] + v.at("F3") / a[3] - sq(v.at("J")) / sq(a[0]);
      break;
    case Case::c13:
    case Case::c31: {
      const bool c13 = spec.symmetry == Case::c13;
      double lsum = 0;
      for (const auto& [name, val] : v)
        if (name != "J") lsum += val * val;
      r["J^2 - sum L^2"] = sq(v.at("J")) - lsum;
      // single axis s, triple axis t
      const int sidx = c13 ? 0 : 3;
      const double as = a[sidx], at = alpha_rev(spec);
      const double xs = p.x[sidx], ys = p.y[sidx];
      r["so3 relation"] = at * (1.0 - xs * xs / as) * (h2 - ys * ys) - at * at * xs * xs * ys * ys / (as * as) -
                          sq(v.at("J"));
      break;
    }
  }
  return r;
}

EMValue energy_momentum(const EllipsoidSpec& spec, const PhasePoint& p) {
  const auto s = conserved_set(spec, p);
  EMValue e;
  e.symmetry = spec.symmetry;
  e.h = s.h;
  switch (spec.symmetry) {
    case Case::generic: break;
    case Case::c22:
      e.j1 = s.values.at("J1");
      e.j2 = s.values.at("J2");
      break;
    case Case::c112:
    case Case::c211:
      e.j = s.values.at("J");
      e.g = s.values.at("G");
      break;
    case Case::c13:
    case Case::c31: {
      e.j = s.values.at("J");
      const double bound = 2.0 * alpha_rev(spec) * e.h;
      if (e.j * e.j > bound + 1e-9 * (1.0 + e.h))
        throw Error(ErrorKind::domain, "total angular momentum exceeds 2 alpha_rev h");
      break;
    }
  }
  return e;
}

double integral_scale(const EllipsoidSpec& spec, const std::string& label, double h) {
  if (!label.empty() && (label[0] == 'J' || label[0] == 'L')) return std::sqrt(2.0 * h * spec.alphas[3]);
  return 2.0 * h;
}

}  // namespace geoflow
