#include "geoflow/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geoflow/conserved.hpp"
#include "geoflow/io.hpp"

namespace geoflow {

namespace dp = dop853;

namespace {

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;
constexpr double kErrExponent = -1.0 / 8.0;

double rms(const State& v) { return std::sqrt(v.squaredNorm() / 8.0); }

}  // namespace

Dop853::Dop853(Rhs f, const State& y0, double t0, double t_bound, double tol, Projector proj)
    : fun_(std::move(f)), proj_(std::move(proj)), tol_(tol), t_(t0), t_bound_(t_bound) {
  dir_ = t_bound >= t0 ? 1.0 : -1.0;
  y_ = y0;
  y_old_ = y0;
  y_raw_ = y0;
  f_ = fun_(y_);
  f_old_ = f_;
  if (t_bound == t0) {
    done_ = true;
    return;
  }
  h_abs_ = initial_step();
}

double Dop853::initial_step() const {
  const State scale = (tol_ + y_.array().abs() * tol_).matrix();
  const double d0 = rms(y_.cwiseQuotient(scale));
  const double d1 = rms(f_.cwiseQuotient(scale));
  const double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  const State y1 = y_ + h0 * dir_ * f_;
  const State f1 = fun_(y1);
  const double d2 = rms((f1 - f_).cwiseQuotient(scale)) / h0;
  double h1;
  if (d1 <= 1e-15 && d2 <= 1e-15)
    h1 = std::max(1e-6, h0 * 1e-3);
  else
    h1 = std::pow(0.01 / std::max(d1, d2), 1.0 / (dp::kInterpolatorPower + 1));
  return std::min(100 * h0, h1);
}

double Dop853::error_norm(double h, const State& scale) const {
  State e5 = State::Zero(), e3 = State::Zero();
  for (int s = 0; s <= dp::kStages; ++s) {
    e5 += dp::E5[s] * k_[s];
    e3 += dp::E3[s] * k_[s];
  }
  e5 = e5.cwiseQuotient(scale);
  e3 = e3.cwiseQuotient(scale);
  const double n5 = e5.squaredNorm(), n3 = e3.squaredNorm();
  if (n5 == 0 && n3 == 0) return 0.0;
  const double denom = n5 + 0.01 * n3;
  return std::abs(h) * n5 / std::sqrt(denom * 8.0);
}

bool Dop853::step() {
  if (done_) return false;
  const double min_step =
      10.0 * std::abs(std::nextafter(t_, dir_ * std::numeric_limits<double>::infinity()) - t_);
  h_abs_ = std::max(h_abs_, min_step);
  bool rejected = false;
  State y_new, f_new;
  double h = 0, t_new = 0;
  while (true) {
    if (h_abs_ < min_step)
      throw Error(ErrorKind::stiffness, "step size underflow at t = " + std::to_string(t_));
    h = h_abs_ * dir_;
    t_new = t_ + h;
    if (dir_ * (t_new - t_bound_) > 0) t_new = t_bound_;
    h = t_new - t_;
    h_abs_ = std::abs(h);

    k_[0] = f_;
    for (int s = 1; s < dp::kStages; ++s) {
      State dy = State::Zero();
      for (int j = 0; j < s; ++j) dy += dp::A[s][j] * k_[j];
      k_[s] = fun_(y_ + h * dy);
    }
    State acc = State::Zero();
    for (int s = 0; s < dp::kStages; ++s) acc += dp::B[s] * k_[s];
    y_new = y_ + h * acc;
    f_new = fun_(y_new);
    k_[dp::kStages] = f_new;

    const State scale = (tol_ + y_.array().abs().max(y_new.array().abs()) * tol_).matrix();
    const double err = error_norm(h, scale);
    if (err < 1.0) {
      double factor = err == 0 ? kMaxFactor : std::min(kMaxFactor, kSafety * std::pow(err, kErrExponent));
      if (rejected) factor = std::min(1.0, factor);
      h_abs_ *= factor;
      break;
    }
    h_abs_ *= std::max(kMinFactor, kSafety * std::pow(err, kErrExponent));
    rejected = true;
    ++n_rejected_;
  }

  t_old_ = t_;
  y_old_ = y_;
  f_old_ = f_;
  y_raw_ = y_new;
  f_raw_ = f_new;
  h_last_ = h;
  t_ = t_new;
  dense_ready_ = false;
  if (proj_) {
    y_ = proj_(y_new);
    f_ = fun_(y_);
  } else {
    y_ = y_new;
    f_ = f_new;
  }
  ++n_accepted_;
  if (dir_ * (t_ - t_bound_) >= 0) done_ = true;
  return true;
}

void Dop853::build_dense() {
  const double h = h_last_;
  for (int s = dp::kStages + 1; s < dp::kStagesExtended; ++s) {
    State dy = State::Zero();
    for (int j = 0; j < s; ++j) dy += dp::A[s][j] * k_[j];
    k_[s] = fun_(y_old_ + h * dy);
  }
  const State delta = y_raw_ - y_old_;
  dense_f_[0] = delta;
  dense_f_[1] = h * f_old_ - delta;
  dense_f_[2] = 2.0 * delta - h * (f_old_ + f_raw_);
  for (int r = 0; r < 4; ++r) {
    State acc = State::Zero();
    for (int s = 0; s < dp::kStagesExtended; ++s) acc += dp::D[r][s] * k_[s];
    dense_f_[3 + r] = h * acc;
  }
  dense_ready_ = true;
}

State Dop853::dense(double t) {
  if (!dense_ready_) build_dense();
  const double x = (t - t_old_) / h_last_;
  State y = State::Zero();
  for (int i = 0; i < 7; ++i) {
    y += dense_f_[6 - i];
    if (i % 2 == 0)
      y *= x;
    else
      y *= (1.0 - x);
  }
  return y + y_old_;
}

State Dop853::hermite(double t) const {
  const double h = h_last_;
  const double s = (t - t_old_) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return h00 * y_old_ + h10 * h * f_old_ + h01 * y_raw_ + h11 * h * f_raw_;
}

double DriftReport::max_relative() const {
  double m = 0;
  for (const auto& [k, v] : relative) m = std::max(m, v);
  return m;
}

namespace {

Dop853::Rhs rhs_for(const EllipsoidSpec& spec) {
  const Vec4 a = spec.alphas;
  return [a](const State& z) { return vector_field(a, z); };
}

Dop853::Projector projector_for(const EllipsoidSpec& spec) {
  const Vec4 a = spec.alphas;
  return [a](const State& z) { return project_state(a, z); };
}

double constraint_norm(const Vec4& a, const State& z) {
  const auto c = constraint_values(a, z);
  return std::max(std::abs(c.c1), std::abs(c.c2));
}

}  // namespace

Trajectory integrate(const EllipsoidSpec& spec, const PhasePoint& p0, double t_end, const IntegrateOptions& opt) {
  if (!(opt.tol >= 1e-14 && opt.tol <= 1e-4)) throw Error(ErrorKind::invalid_spec, "tol must lie in [1e-14, 1e-4]");
  if (!is_constrained(spec, p0)) throw Error(ErrorKind::invalid_spec, "initial point violates the constraints");
  const std::size_t n = std::max<std::size_t>(opt.samples, 2);
  Trajectory tr;
  tr.spec = spec;
  tr.times.reserve(n);
  tr.points.reserve(n);
  const State z0 = to_state(p0);
  tr.times.push_back(0.0);
  tr.points.push_back(p0);

  Dop853 solver(rhs_for(spec), z0, 0.0, t_end, opt.tol, opt.project ? projector_for(spec) : Dop853::Projector{});
  std::size_t next = 1;
  auto sample_time = [&](std::size_t i) { return t_end * static_cast<double>(i) / static_cast<double>(n - 1); };
  double worst = 0;
  while (next < n && solver.step()) {
    worst = std::max(worst, constraint_norm(spec.alphas, solver.y_raw()));
    while (next < n && (t_end >= 0 ? sample_time(next) <= solver.t() : sample_time(next) >= solver.t())) {
      const double ts = sample_time(next);
      State z = (next == n - 1 || ts == solver.t()) ? solver.y() : solver.dense(ts);
      if (opt.project) z = project_state(spec.alphas, z);
      tr.times.push_back(ts);
      tr.points.push_back(from_state(z));
      ++next;
    }
  }
  tr.drift = drift_report(tr);
  tr.drift.max_constraint_violation = worst;
  return tr;
}

Trajectory integrate(const EllipsoidSpec& spec, const PhasePoint& p0, double t_end, double tol) {
  IntegrateOptions opt;
  opt.tol = tol;
  return integrate(spec, p0, t_end, opt);
}

DriftReport drift_report(const Trajectory& traj) {
  if (traj.points.empty()) throw Error(ErrorKind::invalid_spec, "empty trajectory");
  DriftReport r;
  r.max_constraint_violation = traj.drift.max_constraint_violation;
  std::vector<Observable> obs = declared_integrals(traj.spec);
  obs.insert(obs.begin(), obs::hamiltonian());
  const State z0 = to_state(traj.points.front());
  const double h = energy(traj.points.front());
  for (const auto& o : obs) {
    const double f0 = o.value(z0);
    const double denom = std::max(std::abs(f0), integral_scale(traj.spec, o.name, h));
    double worst = 0;
    for (const auto& p : traj.points) worst = std::max(worst, std::abs(o.value(to_state(p)) - f0));
    r.relative[o.name] = denom > 0 ? worst / denom : worst;
  }
  for (const auto& p : traj.points) r.max_sample_constraint = std::max(r.max_sample_constraint, constraint_norm(traj.spec.alphas, to_state(p)));
  return r;
}

std::vector<Crossing> find_crossings(const EllipsoidSpec& spec, const PhasePoint& p0, double t_end, double tol,
                                     const std::function<double(const State&)>& event, int direction,
                                     std::size_t max_crossings) {
  std::vector<Crossing> out;
  Dop853 solver(rhs_for(spec), to_state(p0), 0.0, t_end, tol, projector_for(spec));
  while (solver.step()) {
    const double g0 = event(solver.y_old());
    const double g1 = event(solver.y_raw());
    const bool up = g0 < 0 && g1 >= 0;
    const bool down = g0 > 0 && g1 <= 0;
    if (!((up && direction >= 0) || (down && direction <= 0))) continue;
    double a = solver.t_old(), b = solver.t();
    double ga = g0;
    while (std::abs(b - a) > 1e-12) {
      const double m = 0.5 * (a + b);
      const double gm = event(solver.hermite(m));
      if ((gm < 0) == (ga < 0)) {
        a = m;
        ga = gm;
      } else {
        b = m;
      }
    }
    double t = 0.5 * (a + b);
    const double dt = 1e-7 * std::abs(solver.t() - solver.t_old());
    for (int it = 0; it < 8; ++it) {
      const double g = event(solver.dense(t));
      const double dg = (event(solver.dense(t + dt)) - event(solver.dense(t - dt))) / (2 * dt);
      if (dg == 0) break;
      const double step = g / dg;
      t -= step;
      if (std::abs(step) < 1e-15 * (1 + std::abs(t))) break;
    }
    t = std::clamp(t, solver.t_old(), solver.t());
    out.push_back({t, from_state(project_state(spec.alphas, solver.dense(t)))});
    if (max_crossings && out.size() >= max_crossings) break;
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,x0,x1,x2,x3,y0,y1,y2,y3\n";
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    os << csv_number(traj.times[i]);
    for (double v : traj.points[i].x) os << ',' << csv_number(v);
    for (double v : traj.points[i].y) os << ',' << csv_number(v);
    os << '\n';
  }
}

}  // namespace geoflow
