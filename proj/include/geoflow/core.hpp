#pragma once

#include <array>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace geoflow {

using Vec4 = std::array<double, 4>;
using State = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;

inline constexpr double kConstraintEps = 1e-10;

enum class Case { generic, c22, c112, c211, c13, c31 };

enum class ErrorKind {
  invalid_spec,
  index_range,
  projection_failure,
  degenerate_axes,
  stiffness,
  singular_potential,
  coordinate_singularity,
  pole,
  domain,
  axis_limit,
  not_critical,
  out_of_range,
  empty_separatrix,
  resolution,
  usage,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

std::string to_string(Case c);
Case parse_case(const std::string& name);

// Semi-axes squared, sorted, with the symmetry tag matching their equality pattern.
struct EllipsoidSpec {
  Vec4 alphas{};
  Case symmetry = Case::generic;
};

EllipsoidSpec make_spec(Case c, const Vec4& alphas);
// Expands the distinct values of a case into four semi-axes, e.g. c22 {a,b} -> (a,a,b,b).
EllipsoidSpec expand_spec(Case c, const std::vector<double>& distinct);
std::size_t distinct_count(Case c);

struct PhasePoint {
  Vec4 x{};
  Vec4 y{};
};

struct TangentVector {
  Vec4 dx{};
  Vec4 dy{};
};

struct ConstraintValues {
  double c1 = 0;
  double c2 = 0;
  double d = 0;
};

State to_state(const PhasePoint& p);
PhasePoint from_state(const State& z);

ConstraintValues constraint_values(const EllipsoidSpec& spec, const PhasePoint& p);
ConstraintValues constraint_values(const Vec4& alphas, const State& z);

enum class BracketKind { xx, xy, yy };

double dirac_bracket_basis(const EllipsoidSpec& spec, const PhasePoint& p, BracketKind kind, int i, int k);

// {z_a, z_b} for z = (x, y); C1 and C2 are Casimirs of this tensor at every point with D > 0.
Mat8 bracket_tensor(const Vec4& alphas, const State& z);
// Same bracket on R^{2n} for an ellipsoid with n semi-axes squared.
Eigen::MatrixXd bracket_tensor_n(const std::vector<double>& alphas, const Eigen::VectorXd& z);

State vector_field(const Vec4& alphas, const State& z);
TangentVector hamiltonian_vector_field(const EllipsoidSpec& spec, const PhasePoint& p);

State constraint_gradient_c1(const Vec4& alphas, const State& z);
State constraint_gradient_c2(const Vec4& alphas, const State& z);

PhasePoint project(const EllipsoidSpec& spec, const PhasePoint& raw, double eps = kConstraintEps);
State project_state(const Vec4& alphas, const State& raw, double eps = kConstraintEps);

bool is_constrained(const EllipsoidSpec& spec, const PhasePoint& p, double eps = kConstraintEps);

double energy(const PhasePoint& p);

// Gaussian direction scaled onto C1 = 0, Gaussian momentum with the C2 component removed.
// With h > 0 the momentum is rescaled to that energy.
PhasePoint random_point(const EllipsoidSpec& spec, std::mt19937_64& rng, double h = -1.0);

}  // namespace geoflow
