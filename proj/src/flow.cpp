#include "qct/flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flow_core.hpp"

namespace qct {
namespace {

// First derivative at t1 from a nonuniform three-point stencil.
Vec fd_velocity(const Vec& x0, const Vec& x1, const Vec& x2, double t0,
                double t1, double t2) {
  const double h1 = t1 - t0, h2 = t2 - t1;
  return (-h2 / (h1 * (h1 + h2))) * x0 + ((h2 - h1) / (h1 * h2)) * x1 +
         (h1 / (h2 * (h1 + h2))) * x2;
}

// Second derivative at t1 from the same stencil.
Vec fd_acceleration(const Vec& x0, const Vec& x1, const Vec& x2, double t0,
                    double t1, double t2) {
  const double h1 = t1 - t0, h2 = t2 - t1;
  return 2.0 * (h2 * x0 - (h1 + h2) * x1 + h1 * x2) / (h1 * h2 * (h1 + h2));
}

// Integral over [a, b] of the parabola through (t0,f0), (t1,f1), (t2,f2).
double parabola_integral(double t0, double f0, double t1, double f1, double t2,
                         double f2, double a, double b) {
  const double u0 = t0 - a, u1 = t1 - a, u2 = t2 - a;
  const double w = b - a;
  const double i0 = w, i1 = 0.5 * w * w, i2 = w * w * w / 3.0;
  auto basis = [&](double ua, double ub, double denom) {
    return (i2 - (ua + ub) * i1 + ua * ub * i0) / denom;
  };
  return f0 * basis(u1, u2, (u0 - u1) * (u0 - u2)) +
         f1 * basis(u0, u2, (u1 - u0) * (u1 - u2)) +
         f2 * basis(u0, u1, (u2 - u0) * (u2 - u1));
}

// Velocities at every node by finite differences (one-sided at the ends).
Mat fd_velocities(const Trajectory& traj) {
  const Index n = traj.size();
  Mat v(traj.dim(), n);
  for (Index k = 0; k < n; ++k) {
    const Index c = std::clamp<Index>(k, 1, n - 2);
    v.col(k) = fd_velocity(traj.points.col(c - 1), traj.points.col(c),
                           traj.points.col(c + 1), traj.tau[c - 1], traj.tau[c],
                           traj.tau[c + 1]);
    if (k != c) {
      // One-sided value at an end node: differentiate the same parabola there.
      const double t0 = traj.tau[c - 1], t1 = traj.tau[c], t2 = traj.tau[c + 1];
      const double t = traj.tau[k];
      const Vec& x0 = traj.points.col(c - 1);
      const Vec& x1 = traj.points.col(c);
      const Vec& x2 = traj.points.col(c + 1);
      const double h1 = t1 - t0, h2 = t2 - t1;
      // d/dt of the Lagrange parabola evaluated at t.
      const double l0 = (2.0 * t - t1 - t2) / (h1 * (h1 + h2));
      const double l1 = -(2.0 * t - t0 - t2) / (h1 * h2);
      const double l2 = (2.0 * t - t0 - t1) / (h2 * (h1 + h2));
      v.col(k) = l0 * x0 + l1 * x1 + l2 * x2;
    }
  }
  return v;
}

// Christoffel symbols by central differences of the metric components.
// gamma[i](j,k) = Gamma^i_{jk}.
std::vector<Mat> christoffels(const Metric& g, const Vec& x) {
  const Index d = x.size();
  std::vector<Mat> dg(static_cast<std::size_t>(d));
  for (Index a = 0; a < d; ++a) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[a]));
    Vec xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    dg[static_cast<std::size_t>(a)] =
        (g.components(xp) - g.components(xm)) / (2.0 * h);
  }
  const Mat ginv = g.inverse(x);
  std::vector<Mat> gamma(static_cast<std::size_t>(d), Mat::Zero(d, d));
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      for (Index k = 0; k < d; ++k) {
        double s = 0.0;
        for (Index l = 0; l < d; ++l)
          s += ginv(i, l) * (dg[static_cast<std::size_t>(j)](l, k) +
                             dg[static_cast<std::size_t>(k)](l, j) -
                             dg[static_cast<std::size_t>(l)](j, k));
        gamma[static_cast<std::size_t>(i)](j, k) = 0.5 * s;
      }
  return gamma;
}

}  // namespace

std::string to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::Converged: return "Converged";
    case FlowStatus::Trapped: return "Trapped";
    case FlowStatus::Escaped: return "Escaped";
    case FlowStatus::StepBudget: return "StepBudget";
  }
  return "Unknown";
}

FlowProblem::FlowProblem(PotentialFromSuperpotential pfs, CriticalPoint source,
                         CriticalPoint target, int direction_sign,
                         std::vector<CriticalPoint> known_points,
                         FlowOptions options)
    : pfs_(std::move(pfs)),
      source_(std::move(source)),
      target_(std::move(target)),
      sign_(direction_sign >= 0 ? +1 : -1),
      known_(std::move(known_points)),
      opts_(options) {
  const Index d = pfs_.superpotential().dim();
  if (source_.location.size() != d || target_.location.size() != d)
    throw Error("FlowProblem: endpoint dimension mismatch");

  scale_ = opts_.length_scale > 0.0
               ? opts_.length_scale
               : std::max(1.0, (source_.location - target_.location).norm());

  Vec eigs = source_.hessian_eigenvalues;
  Mat vecs = source_.hessian_eigenvectors;
  if (eigs.size() != d || vecs.rows() != d) {
    Eigen::SelfAdjointEigenSolver<Mat> es(
        pfs_.superpotential().hessian(source_.location));
    eigs = es.eigenvalues();
    vecs = es.eigenvectors();
  }
  // Descending flows leave along negative-curvature directions of W,
  // ascending ones along positive curvature; eigenvalues come sorted.
  const Index pick = sign_ > 0 ? 0 : d - 1;
  const double lam = eigs[pick];
  const double tol = 1e-10 * eigs.cwiseAbs().maxCoeff();
  if ((sign_ > 0 && lam >= -tol) || (sign_ < 0 && lam <= tol))
    throw Error("FlowProblem: no unstable direction at source " +
                format_point(source_.location));
  unstable_ = vecs.col(pick).normalized();
  for (Index i = 0; i < d; ++i) {
    if (std::abs(unstable_[i]) > 1e-12) {
      if (unstable_[i] < 0.0) unstable_ = -unstable_;
      break;
    }
  }
}

FlowOutcome solve_flow(const FlowProblem& problem) {
  const auto& pfs = problem.pfs();
  const auto& opts = problem.options();
  const Index d = pfs.superpotential().dim();
  const double scale = problem.length_scale();
  const int sign = problem.direction_sign();
  const bool flat = pfs.metric().is_flat();

  detail::PairSetup s;
  s.ep.dim = d;
  s.ep.rhs = [&pfs, sign, flat](const Vec& x) -> Vec {
    const Vec gw = pfs.superpotential().gradient(x);
    if (flat) return Vec(-sign * gw);
    return Vec(-sign * (pfs.metric().inverse(x) * gw));
  };
  s.ep.speed = [&pfs, flat](const Vec& x, const Vec& v) -> double {
    if (flat) return v.norm();
    return std::sqrt(std::max(0.0, pfs.metric().squared_norm(x, v)));
  };
  s.ep.period = Vec::Zero(d);
  s.ep.capture_radius = opts.capture_radius_rel * scale;
  s.ep.grad_capture_rel = opts.grad_capture_rel;
  s.ep.escape_radius = opts.escape_radius_rel;
  s.ep.max_steps = opts.max_steps;
  s.ep.rel_tol = opts.rel_tol;
  s.ep.length_scale = scale;

  s.known.push_back(problem.source());
  if ((problem.target().location - problem.source().location).norm() >
      s.ep.capture_radius)
    s.known.push_back(problem.target());
  for (const auto& cp : problem.known_points()) {
    bool dup = false;
    for (const auto& have : s.known)
      if ((cp.location - have.location).norm() <= s.ep.capture_radius) dup = true;
    if (!dup) s.known.push_back(cp);
  }
  for (const auto& cp : s.known) s.ep.capture_points.push_back(cp.location);

  s.source = problem.source();
  s.target = problem.target();
  s.offset_dir = problem.unstable_direction();
  s.offset = opts.offset_rel * scale;
  s.n_samples = opts.n_samples;
  return detail::run_flow_pair(s);
}

double action_from_trajectory(const Trajectory& traj,
                              const PotentialFromSuperpotential& pfs) {
  const Index n = traj.size();
  if (n == 0) throw Error("action_from_trajectory: empty trajectory");
  double chord = 0.0;
  for (Index k = 0; k + 1 < n; ++k)
    chord += (traj.points.col(k + 1) - traj.points.col(k)).norm();
  if (chord <= 1e-14 * std::max(1.0, traj.points.col(0).norm())) return 0.0;
  if (n < 8)
    throw Error("action_from_trajectory: only " + std::to_string(n) +
                " samples, need at least 8");

  const Metric& g = pfs.metric();
  const Mat vel = fd_velocities(traj);
  Vec f(n);
  for (Index k = 0; k < n; ++k) {
    const Vec x = traj.points.col(k);
    f[k] = 0.5 * g.squared_norm(x, vel.col(k)) + pfs.value(x);
  }

  // Flow trajectories ending at stationary points get their exponential
  // tails analytically; the grid handles only the interior window.
  Index cut = 0;
  double tails = 0.0;
  if (traj.source && traj.target) {
    cut = std::min<Index>(4, (n - 8) / 2);
    const auto& w = pfs.superpotential();
    tails += std::abs(w.value(traj.points.col(cut)) -
                      w.value(traj.source->location));
    tails += std::abs(w.value(traj.points.col(n - 1 - cut)) -
                      w.value(traj.target->location));
  }

  const Index lo = cut, hi = n - 1 - cut;
  double s = 0.0;
  for (Index j = lo; j < hi; ++j) {
    const double a = traj.tau[j], b = traj.tau[j + 1];
    double acc = 0.0;
    int cnt = 0;
    if (j - 1 >= lo) {
      acc += parabola_integral(traj.tau[j - 1], f[j - 1], traj.tau[j], f[j],
                               traj.tau[j + 1], f[j + 1], a, b);
      ++cnt;
    }
    if (j + 2 <= hi) {
      acc += parabola_integral(traj.tau[j], f[j], traj.tau[j + 1], f[j + 1],
                               traj.tau[j + 2], f[j + 2], a, b);
      ++cnt;
    }
    s += acc / cnt;
  }
  s += tails;
  return std::max(s, 0.0);
}

double action_closed_form(const ScalarField& w, const CriticalPoint& a,
                          const CriticalPoint& b) {
  return std::abs(w.value(a.location) - w.value(b.location));
}

double verify_second_order(const Trajectory& traj,
                           const PotentialFromSuperpotential& pfs) {
  const Index n = traj.size();
  if (n < 3) throw Error("verify_second_order: need at least 3 samples");
  const Metric& g = pfs.metric();
  const bool flat = g.is_flat();
  // Differencing the recorded velocities (exact flow rhs values) is one
  // order more accurate than double-differencing the positions.
  const bool have_v = traj.velocities.cols() == n;

  double num = 0.0, den = 0.0;
  for (Index k = 1; k + 1 < n; ++k) {
    const Vec x = traj.points.col(k);
    Vec vel, acc;
    if (have_v) {
      vel = traj.velocities.col(k);
      acc = fd_velocity(traj.velocities.col(k - 1), vel,
                        traj.velocities.col(k + 1), traj.tau[k - 1],
                        traj.tau[k], traj.tau[k + 1]);
    } else {
      vel = fd_velocity(traj.points.col(k - 1), x, traj.points.col(k + 1),
                        traj.tau[k - 1], traj.tau[k], traj.tau[k + 1]);
      acc = fd_acceleration(traj.points.col(k - 1), x, traj.points.col(k + 1),
                            traj.tau[k - 1], traj.tau[k], traj.tau[k + 1]);
    }
    Vec force = pfs.gradient(x);
    Vec r;
    if (flat) {
      r = acc - force;
      den = std::max(den, force.norm());
      num = std::max(num, r.norm());
    } else {
      const Vec raised = g.inverse(x) * force;
      const auto gamma = christoffels(g, x);
      Vec geo = acc;
      for (Index i = 0; i < x.size(); ++i)
        geo[i] += vel.dot(gamma[static_cast<std::size_t>(i)] * vel);
      r = geo - raised;
      den = std::max(den, std::sqrt(std::max(0.0, g.squared_norm(x, raised))));
      num = std::max(num, std::sqrt(std::max(0.0, g.squared_norm(x, r))));
    }
  }
  return num / std::max(den, 1e-4);
}

double kinetic_potential_split(const Trajectory& traj,
                               const PotentialFromSuperpotential& pfs) {
  const Index n = traj.size();
  if (n < 3) throw Error("kinetic_potential_split: need at least 3 samples");
  const Metric& g = pfs.metric();
  const Mat vel = fd_velocities(traj);
  double num = 0.0, vmax = 0.0;
  for (Index k = 1; k + 1 < n; ++k) {
    const Vec x = traj.points.col(k);
    const double kin = 0.5 * g.squared_norm(x, vel.col(k));
    const double pot = pfs.value(x);
    num = std::max(num, std::abs(kin - pot));
    vmax = std::max(vmax, pot);
  }
  return num / std::max(vmax, 1e-12);
}

DecadeValue upper_bound_amplitude(const ScalarField& w, const CriticalPoint& a,
                                  const CriticalPoint& b) {
  return DecadeValue::exp_neg(std::abs(w.value(a.location) - w.value(b.location)));
}

double max_descent_violation(const Trajectory& traj, const ScalarField& w,
                             int direction_sign) {
  const double sign = direction_sign >= 0 ? 1.0 : -1.0;
  double worst = 0.0;
  double prev = sign * w.value(traj.points.col(0));
  for (Index k = 1; k < traj.size(); ++k) {
    const double cur = sign * w.value(traj.points.col(k));
    worst = std::max(worst, cur - prev);
    prev = cur;
  }
  return worst;
}

}  // namespace qct
