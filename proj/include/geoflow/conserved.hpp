#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "geoflow/core.hpp"

namespace geoflow {

struct Observable {
  std::string name;
  std::function<double(const State&)> value;
  // Empty means central differences with step 1e-6 * (1 + |z_a|).
  std::function<State(const State&)> gradient;
};

State gradient_of(const Observable& f, const State& z);
double poisson_bracket(const Vec4& alphas, const Observable& f, const Observable& g, const State& z);
double poisson_bracket(const EllipsoidSpec& spec, const Observable& f, const Observable& g, const PhasePoint& p);
// X_f = P grad f.
State flow_of(const Vec4& alphas, const Observable& f, const State& z);

// Sum of c * L_ik^2 terms plus diagonal y_i^2 terms, the shape of every quadratic integral here.
struct QuadForm {
  struct Term {
    int i, k;
    double c;
  };
  std::vector<Term> terms;
  Vec4 ycoef{};
};

double quad_value(const QuadForm& q, const State& z);
State quad_gradient(const QuadForm& q, const State& z);

namespace obs {
Observable hamiltonian();
Observable c1(const Vec4& alphas);
Observable c2(const Vec4& alphas);
Observable angular_momentum(int i, int k);
Observable quadratic(std::string name, QuadForm q);
Observable linear_combination(std::string name, std::vector<std::pair<double, Observable>> parts);
// F_i of the distinct-axes family; refuses near-coinciding axes.
Observable generic_integral(const Vec4& alphas, int i);
}  // namespace obs

// Labelled integrals of the case (energy excluded), in the order of the conserved set.
std::vector<Observable> declared_integrals(const EllipsoidSpec& spec);
Observable integral(const EllipsoidSpec& spec, const std::string& label);
// Integrals whose flows are used for rank tests (energy first, then an independent set).
std::vector<Observable> independent_integrals(const EllipsoidSpec& spec);

struct ConservedSet {
  double h = 0;
  std::map<std::string, double> values;
};

ConservedSet conserved_set(const EllipsoidSpec& spec, const PhasePoint& p);
std::map<std::string, double> relation_residuals(const EllipsoidSpec& spec, const PhasePoint& p);

struct EMValue {
  Case symmetry = Case::generic;
  double h = 0;
  double j1 = 0, j2 = 0;  // c22
  double j = 0, g = 0;    // c112, c211; c13/c31 use j only
};

EMValue energy_momentum(const EllipsoidSpec& spec, const PhasePoint& p);

// Triple-axis value bounding J^2 <= 2 alpha_rev h in the SO(3) cases.
double alpha_rev(const EllipsoidSpec& spec);

// Natural magnitude of an integral at energy h, used to normalise drift:
// 2h for quadratic integrals, sqrt(2 h alpha_max) for angular momenta.
double integral_scale(const EllipsoidSpec& spec, const std::string& label, double h);

}  // namespace geoflow
