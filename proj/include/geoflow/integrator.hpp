#pragma once

#include <array>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "geoflow/core.hpp"
#include "geoflow/dop853_tableau.hpp"

namespace geoflow {

// Adaptive Dormand-Prince 8(5,3) stepper with 7th-order dense output.
// Step-size control mirrors the usual scipy DOP853 logic with rtol = atol = tol.
class Dop853 {
 public:
  using Rhs = std::function<State(const State&)>;
  using Projector = std::function<State(const State&)>;

  Dop853(Rhs f, const State& y0, double t0, double t_bound, double tol, Projector proj = {});

  // Advances one accepted step. Returns false once t_bound has been reached.
  bool step();
  bool done() const { return done_; }

  double t() const { return t_; }
  double t_old() const { return t_old_; }
  const State& y() const { return y_; }
  const State& y_old() const { return y_old_; }
  const State& f() const { return f_; }
  const State& f_old() const { return f_old_; }
  // Constraint-free state at the end of the last step, before projection.
  const State& y_raw() const { return y_raw_; }

  // Dense output on [t_old, t] of the last step.
  State dense(double t);
  // Cubic Hermite interpolant from the endpoint values and slopes of the last step.
  State hermite(double t) const;

  std::size_t steps() const { return n_accepted_; }
  std::size_t rejected() const { return n_rejected_; }

 private:
  double error_norm(double h, const State& scale) const;
  void build_dense();
  double initial_step() const;

  Rhs fun_;
  Projector proj_;
  double tol_;
  double t_, t_old_ = 0, t_bound_, dir_;
  double h_abs_ = 0, h_last_ = 0;
  State y_, y_old_, y_raw_, f_, f_old_, f_raw_;
  std::array<State, 16> k_{};
  std::array<State, 7> dense_f_{};
  bool dense_ready_ = false;
  bool done_ = false;
  std::size_t n_accepted_ = 0, n_rejected_ = 0;
};

struct DriftReport {
  // Max over samples of |f(t) - f(0)| / max(|f(0)|, natural scale), per integral label; "H" included.
  std::map<std::string, double> relative;
  // Max |C1|, |C2| seen at the end of any step before projection.
  double max_constraint_violation = 0;
  // Max |C1|, |C2| over the stored (projected) samples.
  double max_sample_constraint = 0;

  double max_relative() const;
};

struct Trajectory {
  EllipsoidSpec spec;
  std::vector<double> times;
  std::vector<PhasePoint> points;
  DriftReport drift;
};

struct IntegrateOptions {
  double tol = 1e-10;
  std::size_t samples = 1000;
  bool project = true;
};

Trajectory integrate(const EllipsoidSpec& spec, const PhasePoint& p0, double t_end, const IntegrateOptions& opt);
Trajectory integrate(const EllipsoidSpec& spec, const PhasePoint& p0, double t_end, double tol);

// Recomputes the integral drift of a trajectory. The pre-projection violation is kept from the run.
DriftReport drift_report(const Trajectory& traj);

struct Crossing {
  double t = 0;
  PhasePoint p;
};

// Zeros of event(z) along the flow with the given sign of d(event)/dt (+1, -1, or 0 for both).
// Brackets on the cubic Hermite interpolant, bisects to 1e-12 in time, then polishes on the
// dense output and projects.
std::vector<Crossing> find_crossings(const EllipsoidSpec& spec, const PhasePoint& p0, double t_end, double tol,
                                     const std::function<double(const State&)>& event, int direction,
                                     std::size_t max_crossings = 0);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace geoflow
