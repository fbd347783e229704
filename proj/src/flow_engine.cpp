#include "flow_engine.hpp"

#include <algorithm>
#include <cmath>

namespace qct::detail {
namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0,
                 kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
// 4th-order weights for the embedded error estimate.
constexpr double kE1 = 5179.0 / 57600.0, kE3 = 7571.0 / 16695.0,
                 kE4 = 393.0 / 640.0, kE5 = -92097.0 / 339200.0,
                 kE6 = 187.0 / 2100.0, kE7 = 1.0 / 40.0;

double wrap_diff(double d, double period) {
  if (period <= 0.0) return d;
  d = std::fmod(d, period);
  if (d > 0.5 * period) d -= period;
  if (d < -0.5 * period) d += period;
  return d;
}

bool finite(const Vec& x) { return x.allFinite(); }

// Capture bookkeeping: a point only becomes eligible once the trajectory has
// been clearly outside its ball, so a flow leaving a shallow stationary point
// is not re-captured at its own source.
struct CaptureState {
  std::vector<char> armed;

  void init(const EngineProblem& p, const Vec& start) {
    armed.assign(p.capture_points.size(), 1);
    for (std::size_t i = 0; i < p.capture_points.size(); ++i) {
      if (chart_distance(start, p.capture_points[i], p.period) <= 3.0 * p.capture_radius)
        armed[i] = 0;
    }
  }

  void update(const EngineProblem& p, const Vec& x) {
    for (std::size_t i = 0; i < p.capture_points.size(); ++i) {
      if (!armed[i] &&
          chart_distance(x, p.capture_points[i], p.period) > 3.0 * p.capture_radius)
        armed[i] = 1;
    }
  }

  // Returns the index of a capturing point, or -1.
  int check(const EngineProblem& p, const Vec& x, double speed_here,
            double grad_floor) const {
    for (std::size_t i = 0; i < p.capture_points.size(); ++i) {
      if (!armed[i]) continue;
      if (chart_distance(x, p.capture_points[i], p.period) > p.capture_radius) continue;
      if (speed_here <= p.grad_capture_rel * grad_floor) return static_cast<int>(i);
    }
    return -1;
  }
};

}  // namespace

double chart_distance(const Vec& a, const Vec& b, const Vec& period) {
  double s2 = 0.0;
  for (Index d = 0; d < a.size(); ++d) {
    const double p = period.size() > d ? period[d] : 0.0;
    const double dd = wrap_diff(a[d] - b[d], p);
    s2 += dd * dd;
  }
  return std::sqrt(s2);
}

EngineResult integrate_flow(const EngineProblem& p, const Vec& start) {
  EngineResult res;
  res.last_point = start;

  Vec x = start;
  double tau = 0.0;
  Vec k1 = p.rhs(x);
  if (!finite(k1)) {
    res.status = EngineStatus::Failed;
    return res;
  }
  double speed = p.speed(x, k1);
  double grad_floor = std::max(1.0, speed);

  CaptureState caps;
  caps.init(p, x);

  auto record = [&](double t, const Vec& pt, const Vec& vel) {
    if (!p.record_path) return;
    res.tau.push_back(t);
    res.x.push_back(pt);
    res.v.push_back(vel);
  };
  record(tau, x, k1);

  const double tiny = 1e-300;
  double h = 1e-3 * p.length_scale / std::max(speed, tiny);
  Vec k2(p.dim), k3(p.dim), k4(p.dim), k5(p.dim), k6(p.dim), k7(p.dim);
  Vec xt(p.dim), x5(p.dim), err(p.dim);

  for (long step = 0; step < p.max_steps; ++step) {
    // Keep the displacement per step a small fraction of the run scale and
    // never overshoot past the nearest eligible stationary point in one hop.
    double near = 1e300;
    for (std::size_t i = 0; i < p.capture_points.size(); ++i) {
      if (caps.armed[i])
        near = std::min(near, chart_distance(x, p.capture_points[i], p.period));
    }
    const double dx_cap =
        std::min(0.02 * p.length_scale, 0.5 * near + p.capture_radius);
    h = std::min(h, dx_cap / std::max(k1.norm(), tiny));

    xt = x + h * kA21 * k1;
    k2 = p.rhs(xt);
    xt = x + h * (kA31 * k1 + kA32 * k2);
    k3 = p.rhs(xt);
    xt = x + h * (kA41 * k1 + kA42 * k2 + kA43 * k3);
    k4 = p.rhs(xt);
    xt = x + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4);
    k5 = p.rhs(xt);
    xt = x + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5);
    k6 = p.rhs(xt);
    x5 = x + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
    k7 = p.rhs(x5);
    err = x5 - (x + h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 +
                         kE7 * k7));

    if (!finite(x5) || !finite(err)) {
      h *= 0.25;
      if (h < 1e-300) {
        res.status = EngineStatus::Failed;
        res.last_point = x;
        res.steps = step;
        return res;
      }
      continue;
    }

    double enorm2 = 0.0;
    for (Index d = 0; d < p.dim; ++d) {
      const double sc =
          p.rel_tol * p.length_scale + p.rel_tol * std::max(std::abs(x[d]), std::abs(x5[d]));
      const double e = err[d] / sc;
      enorm2 += e * e;
    }
    const double enorm = std::sqrt(enorm2 / static_cast<double>(p.dim));

    if (enorm > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(enorm, -0.2));
      continue;
    }

    // Accepted.
    res.arc_length += p.speed(0.5 * (x + x5), x5 - x);
    x = x5;
    tau += h;
    k1 = k7;  // FSAL
    speed = p.speed(x, k1);
    grad_floor = std::max(grad_floor, speed);
    record(tau, x, k1);
    res.steps = step + 1;

    if (x[0] <= p.pole_lo) {
      res.status = EngineStatus::CapturedPoleLo;
      res.last_point = x;
      return res;
    }
    if (x[0] >= p.pole_hi) {
      res.status = EngineStatus::CapturedPoleHi;
      res.last_point = x;
      return res;
    }
    caps.update(p, x);
    const int ci = caps.check(p, x, speed, grad_floor);
    if (ci >= 0) {
      res.status = EngineStatus::CapturedPoint;
      res.capture_index = ci;
      res.last_point = x;
      return res;
    }
    if (x.norm() > p.escape_radius * p.length_scale) {
      res.status = EngineStatus::Escaped;
      res.last_point = x;
      return res;
    }

    h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(enorm, 1e-10), -0.2)));
  }

  res.status = EngineStatus::StepBudget;
  res.last_point = x;
  return res;
}

namespace {

// One classical RK4 step of the unit-speed system
//   dx/ds = rhs/|rhs|_g,  dtau/ds = 1/|rhs|_g.
// Returns false when the speed collapses (stationary point reached).
bool rk4_arc_step(const EngineProblem& p, Vec& x, double& tau, double ds) {
  const double tiny = 1e-300;
  auto eval = [&](const Vec& pt, Vec& dxds, double& dtds) -> bool {
    Vec f = p.rhs(pt);
    const double sp = p.speed(pt, f);
    if (!(sp > tiny) || !f.allFinite()) return false;
    dxds = f / sp;
    dtds = 1.0 / sp;
    return true;
  };
  Vec d1(p.dim), d2(p.dim), d3(p.dim), d4(p.dim);
  double t1, t2, t3, t4;
  if (!eval(x, d1, t1)) return false;
  if (!eval(x + 0.5 * ds * d1, d2, t2)) return false;
  if (!eval(x + 0.5 * ds * d2, d3, t3)) return false;
  if (!eval(x + ds * d3, d4, t4)) return false;
  x += (ds / 6.0) * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
  tau += (ds / 6.0) * (t1 + 2.0 * t2 + 2.0 * t3 + t4);
  return true;
}

}  // namespace

ResampledPath resample_arclength(const EngineProblem& p, const Vec& start,
                                 EngineStatus end_status, int capture_index,
                                 double total_arc, int n_uniform) {
  ResampledPath out;
  if (total_arc <= 0.0 || n_uniform < 8) return out;

  const bool to_point = end_status == EngineStatus::CapturedPoint;
  const bool to_lo = end_status == EngineStatus::CapturedPoleLo;
  const bool to_hi = end_status == EngineStatus::CapturedPoleHi;
  if (!to_point && !to_lo && !to_hi) return out;
  Vec target;
  if (to_point) target = p.capture_points[static_cast<std::size_t>(capture_index)];

  // Remaining distance to the terminating capture set.
  auto dist_to_end = [&](const Vec& x) -> double {
    if (to_point) return chart_distance(x, target, p.period);
    if (to_lo) return x[0] - p.pole_lo;
    return p.pole_hi - x[0];
  };
  // The adaptive phase already certified the terminus (including the speed
  // gate); landing inside the ball is all the resampled path needs.
  auto captured = [&](const Vec& x) -> bool {
    if (to_lo) return x[0] <= p.pole_lo;
    if (to_hi) return x[0] >= p.pole_hi;
    return dist_to_end(x) <= p.capture_radius;
  };

  Vec x = start;
  double tau = 0.0;
  const double ds_uniform = total_arc / static_cast<double>(n_uniform - 1);

  Vec f = p.rhs(x);
  out.tau.push_back(tau);
  out.x.push_back(x);
  out.v.push_back(f);

  // Geometric ramp out of the departure region where the speed is small.
  double ds = std::min(ds_uniform, std::max(1e-6 * total_arc, 0.25 * p.capture_radius));
  double s = 0.0;
  const double s_limit = 4.0 * total_arc;
  bool left_start = false;
  const double leave_radius = 3.0 * p.capture_radius;

  while (s < s_limit) {
    if (!left_start && chart_distance(x, start, p.period) > leave_radius)
      left_start = true;

    // Bound the tau advance per node (step / speed) so the exponential
    // crawl out of the source and into the target stays resolved by the
    // finite-difference stencils downstream; the floor keeps the walk from
    // stalling outside the capture ball.
    const double sp = p.speed(x, f);
    const double step =
        std::min(ds, std::max(0.02 * sp, 0.25 * p.capture_radius));

    if (!rk4_arc_step(p, x, tau, step)) {
      // Speed collapse right at the end is success if we are inside the ball.
      out.ok = dist_to_end(x) <= 2.0 * p.capture_radius;
      return out;
    }
    s += step;
    f = p.rhs(x);
    out.tau.push_back(tau);
    out.x.push_back(x);
    out.v.push_back(f);

    if (left_start && captured(x)) {
      out.ok = true;
      return out;
    }
    if (out.x.size() > static_cast<std::size_t>(16) *
                           static_cast<std::size_t>(n_uniform))
      return out;  // runaway tail, keep the adaptive samples instead
    ds = std::min(ds * 1.5, ds_uniform);
  }
  return out;  // ok = false: did not land within the arc budget
}

}  // namespace qct::detail
