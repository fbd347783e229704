#include "qct/instanton.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace qct {
namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Small-oscillation frequency at an endpoint, sqrt(min eig Hess V / m); falls
// back to the spectral radius (then 1) when the bottom curvature degenerates.
double endpoint_omega(const ScalarField& v, double mass, const Vec& x) {
  Eigen::SelfAdjointEigenSolver<Mat> es(v.hessian(x));
  double lam = es.eigenvalues().minCoeff() / mass;
  if (!(lam > 1e-12)) lam = es.eigenvalues().cwiseAbs().maxCoeff() / mass;
  if (!(lam > 1e-12)) lam = 1.0;
  return std::sqrt(lam);
}

// 4th-order first derivative on a uniform grid, one-sided near the ends.
Mat fd4_velocities(const Mat& x, double h) {
  const Index n = x.cols();
  Mat v(x.rows(), n);
  const double s = 1.0 / (12.0 * h);
  for (Index k = 0; k < n; ++k) {
    if (k >= 2 && k + 2 < n) {
      v.col(k) = s * (x.col(k - 2) - 8.0 * x.col(k - 1) + 8.0 * x.col(k + 1) -
                      x.col(k + 2));
    } else if (k < 2) {
      const Index b = 0;
      const double c0 = k == 0 ? -25.0 : -3.0, c1 = k == 0 ? 48.0 : -10.0,
                   c2 = k == 0 ? -36.0 : 18.0, c3 = k == 0 ? 16.0 : -6.0,
                   c4 = k == 0 ? -3.0 : 1.0;
      v.col(k) = s * (c0 * x.col(b) + c1 * x.col(b + 1) + c2 * x.col(b + 2) +
                      c3 * x.col(b + 3) + c4 * x.col(b + 4));
    } else {
      const Index b = n - 1;
      const double c0 = k == n - 1 ? 25.0 : 3.0, c1 = k == n - 1 ? -48.0 : 10.0,
                   c2 = k == n - 1 ? 36.0 : -18.0, c3 = k == n - 1 ? -16.0 : 6.0,
                   c4 = k == n - 1 ? 3.0 : -1.0;
      v.col(k) = s * (c0 * x.col(b) + c1 * x.col(b - 1) + c2 * x.col(b - 2) +
                      c3 * x.col(b - 3) + c4 * x.col(b - 4));
    }
  }
  return v;
}

double simpson(const Vec& f, double h) {
  const Index n = f.size();  // odd count, even interval number
  double s = f[0] + f[n - 1];
  for (Index k = 1; k + 1 < n; ++k) s += (k % 2 == 1 ? 4.0 : 2.0) * f[k];
  return s * h / 3.0;
}

// Block-tridiagonal LU sweep (Thomas algorithm with dense blocks).
// a: sub, b: diag, c: super, rhs modified in place to the solution.
void block_thomas(std::vector<Mat>& a, std::vector<Mat>& b, std::vector<Mat>& c,
                  std::vector<Vec>& rhs) {
  const std::size_t m = b.size();
  std::vector<Eigen::PartialPivLU<Mat>> lu(m);
  lu[0] = Eigen::PartialPivLU<Mat>(b[0]);
  for (std::size_t k = 1; k < m; ++k) {
    b[k].noalias() -= a[k] * lu[k - 1].solve(c[k - 1]);
    rhs[k].noalias() -= a[k] * lu[k - 1].solve(rhs[k - 1]);
    lu[k] = Eigen::PartialPivLU<Mat>(b[k]);
  }
  rhs[m - 1] = lu[m - 1].solve(rhs[m - 1]);
  for (std::size_t k = m - 1; k-- > 0;)
    rhs[k] = lu[k].solve(rhs[k] - c[k] * rhs[k + 1]);
}

struct GridAttempt {
  Mat x;            // dim x (n+1) nodes including fixed ends
  double action = 0.0;
  double drift = 0.0;
  double vmax = 0.0;
  double residual = 0.0;
  int iters = 0;
  bool stagnated = false;  // residual floored by a quasi-zero mode
  bool usable = false;     // hit tolerance, or stagnated at a harmless floor
  // Residual at exit relative to the force scale; distinguishes truncation
  // failures (small, fixable by refinement) from lost basins (order one).
  double force_resid_rel = 0.0;
};

// Geometric resampling of a guess path: node k gets the point at chord
// fraction (1 + tanh(omega tau_k / 2)) / 2 along the guess polyline.
Mat seed_from_path(const Mat& path, const Vec& a, const Vec& b, double omega,
                   double t_half, Index n) {
  const Index m = path.cols();
  Vec u(m);
  u[0] = 0.0;
  for (Index k = 1; k < m; ++k)
    u[k] = u[k - 1] + (path.col(k) - path.col(k - 1)).norm();
  const double total = u[m - 1];
  Mat x(path.rows(), n + 1);
  if (total <= 0.0) {
    for (Index k = 0; k <= n; ++k) x.col(k) = path.col(0);
  } else {
    u /= total;
    const double h = 2.0 * t_half / static_cast<double>(n);
    Index j = 0;
    for (Index k = 0; k <= n; ++k) {
      const double tau = -t_half + h * static_cast<double>(k);
      const double f = 0.5 * (1.0 + std::tanh(0.5 * omega * tau));
      while (j + 2 < m && u[j + 1] < f) ++j;
      const double span = std::max(u[j + 1] - u[j], 1e-300);
      const double w = std::clamp((f - u[j]) / span, 0.0, 1.0);
      x.col(k) = (1.0 - w) * path.col(j) + w * path.col(j + 1);
    }
  }
  x.col(0) = a;
  x.col(n) = b;
  return x;
}

Mat tanh_seed(const Vec& a, const Vec& b, double omega, double t_half, Index n) {
  Mat x(a.size(), n + 1);
  const double h = 2.0 * t_half / static_cast<double>(n);
  const double norm = std::tanh(0.5 * omega * t_half);
  for (Index k = 0; k <= n; ++k) {
    const double tau = -t_half + h * static_cast<double>(k);
    const double f = std::tanh(0.5 * omega * tau) / norm;
    x.col(k) = 0.5 * (a + b) + 0.5 * f * (b - a);
  }
  x.col(0) = a;
  x.col(n) = b;
  return x;
}

// One relaxation attempt on a fixed grid. Reports failure through the
// usable flag instead of throwing, so the caller can decide between grid
// refinement (truncation) and interval continuation (lost basin).
GridAttempt relax(const BvpProblem& p, double t_half, Index n, const Mat& seed) {
  const Index d = p.endpoint_a.size();
  const double h = 2.0 * t_half / static_cast<double>(n);
  const double h2 = h * h;
  const Index m = n - 1;  // interior nodes

  GridAttempt at;
  at.x = seed;

  std::vector<Vec> g(static_cast<std::size_t>(n) + 1);
  auto eval_forces = [&](const Mat& x) {
    for (Index k = 0; k <= n; ++k)
      g[static_cast<std::size_t>(k)] = p.potential.gradient(x.col(k)) / p.mass;
  };

  // Compact 4th-order residual of xddot = grad V / m.
  auto residual = [&](const Mat& x, std::vector<Vec>& f) {
    f.assign(static_cast<std::size_t>(m), Vec(d));
    for (Index k = 1; k < n; ++k) {
      const std::size_t j = static_cast<std::size_t>(k - 1);
      f[j] = x.col(k + 1) - 2.0 * x.col(k) + x.col(k - 1) -
             (h2 / 12.0) *
                 (g[static_cast<std::size_t>(k + 1)] +
                  10.0 * g[static_cast<std::size_t>(k)] +
                  g[static_cast<std::size_t>(k - 1)]);
    }
  };

  auto max_norm = [](const std::vector<Vec>& f) {
    double r = 0.0;
    for (const auto& fk : f) r = std::max(r, fk.cwiseAbs().maxCoeff());
    return r;
  };

  // Trapezoid discrete action: the merit function for shifted steps.
  auto disc_action = [&](const Mat& x) {
    double s = 0.0;
    double v0 = p.potential.value(x.col(0));
    for (Index k = 0; k < n; ++k) {
      const double v1 = p.potential.value(x.col(k + 1));
      s += h * (0.5 * p.mass * (x.col(k + 1) - x.col(k)).squaredNorm() / h2 +
                0.5 * (v0 + v1));
      v0 = v1;
    }
    return s;
  };

  std::vector<Vec> f, f_try;
  eval_forces(at.x);
  residual(at.x, f);
  double rn = max_norm(f);
  double rn_window = rn;
  double s_cur = disc_action(at.x);
  double s_window = s_cur;

  double fscale = 1.0;
  for (Index k = 0; k <= n; ++k)
    fscale = std::max(fscale, p.mass * g[static_cast<std::size_t>(k)]
                                   .cwiseAbs()
                                   .maxCoeff());
  // The stencil cancels O(|x|) terms down to O(h^2), so fine grids bottom
  // out in rounding noise; floor the target there instead of chasing it.
  const double noise =
      32.0 * std::numeric_limits<double>::epsilon() *
      std::max(1.0, at.x.cwiseAbs().maxCoeff());
  const double tol_f =
      std::max(p.newton.residual_tol_rel * fscale * h2 / p.mass, noise);

  std::vector<Mat> ja(static_cast<std::size_t>(m)), jb(static_cast<std::size_t>(m)),
      jc(static_cast<std::size_t>(m));
  std::vector<Vec> rhs(static_cast<std::size_t>(m));
  Mat xt(d, n + 1);

  // Newton with a pseudo-transient diagonal shift. A shifted solve is one
  // implicit Euler step of size 1/mu along the action descent flow, so while
  // the shift is active, progress is judged by the discrete action: the
  // connecting orbit is the action minimizer, and descent reaches its basin
  // from seeds where plain Newton creeps or diverges (the Jacobi operator is
  // indefinite off the solution, so no shift makes the step a residual
  // descent direction). Marquardt schedule: an accepted step shrinks mu,
  // fading back to plain Newton and its quadratic tail; a rejected trial
  // grows it, shortening the implicit step until it must succeed.
  const double mu_seed = 1e-6;
  int it = 0;
  int rejects = 0, trials = 0;
  const int trial_budget = 4 * p.newton.max_iters + 80;
  double mu = 0.0;
  for (; it < p.newton.max_iters && rn > tol_f; ++it) {
    for (Index k = 1; k < n; ++k) {
      const std::size_t j = static_cast<std::size_t>(k - 1);
      const Mat gk = p.potential.hessian(at.x.col(k)) / p.mass;
      const Mat gkm = p.potential.hessian(at.x.col(k - 1)) / p.mass;
      const Mat gkp = p.potential.hessian(at.x.col(k + 1)) / p.mass;
      ja[j] = Mat::Identity(d, d) - (h2 / 12.0) * gkm;
      jb[j] = -2.0 * Mat::Identity(d, d) - (10.0 * h2 / 12.0) * gk;
      jc[j] = Mat::Identity(d, d) - (h2 / 12.0) * gkp;
      if (mu > 0.0) jb[j].diagonal().array() -= mu;
      rhs[j] = -f[j];
    }
    ja[0].setZero();
    jc[static_cast<std::size_t>(m - 1)].setZero();
    block_thomas(ja, jb, jc, rhs);

    auto try_step = [&](double t) {
      ++trials;
      xt = at.x;
      for (Index k = 1; k < n; ++k)
        xt.col(k) += t * rhs[static_cast<std::size_t>(k - 1)];
      if (!xt.allFinite()) return false;
      eval_forces(xt);
      residual(xt, f_try);
      return true;
    };
    double rn_try = 0.0;
    double s_try = s_cur;
    bool accepted = false;
    if (mu == 0.0) {
      // Armijo backtracking along the Newton direction. Halving stops early:
      // a step that needs more than two halvings is not making Newton
      // progress, and creeping along it would starve the shifted phase.
      double t = std::min(1.0, p.newton.damping);
      for (int bt = 0; bt < 3; ++bt, t *= 0.5) {
        if (!try_step(t)) continue;
        rn_try = max_norm(f_try);
        if (rn_try <= (1.0 - 0.25 * t) * rn || rn_try <= tol_f) {
          accepted = true;
          s_try = disc_action(xt);
          break;
        }
      }
    } else if (try_step(std::min(1.0, p.newton.damping))) {
      // Shifted step: accept residual progress, or action descent while the
      // iterate is still in transit toward the minimizer's basin.
      rn_try = max_norm(f_try);
      if (rn_try <= (1.0 - 1e-4) * rn || rn_try <= tol_f) {
        accepted = true;
        s_try = disc_action(xt);
      } else {
        s_try = disc_action(xt);
        accepted =
            s_try < s_cur - 1e-14 * std::max(1.0, std::abs(s_cur));
      }
    }
    if (!accepted) {
      mu = std::max(5.0 * mu, mu_seed);
      eval_forces(at.x);  // g holds the rejected trial state, restore
      if (++rejects > 30 || trials > trial_budget) break;
      --it;
      continue;
    }
    rejects = 0;
    at.x = xt;
    f.swap(f_try);
    rn = rn_try;
    s_cur = s_try;
    mu = mu > 1e-10 ? 0.2 * mu : 0.0;

    // Progress watchdog: cut the attempt short once neither the residual nor
    // the action improves meaningfully per sweep of iterations; creep below
    // a fraction of a percent never reaches tolerance within any budget.
    if (it % 20 == 19) {
      const bool rn_stalled = rn > 0.98 * rn_window;
      const bool s_stalled =
          s_cur > s_window - 1e-10 * std::max(1.0, std::abs(s_window));
      if (rn_stalled && s_stalled) break;
      rn_window = rn;
      s_window = s_cur;
    }
    if (trials > trial_budget) break;
  }
  // Quasi-zero modes (kink chains, near-degenerate valleys) amplify rounding
  // noise and floor the reachable residual above tol_f. A floor well under
  // the h^2 truncation scale of the stencil is harmless: accept the path and
  // report the floor instead of failing the grid.
  at.stagnated =
      rn > tol_f && rn * p.mass <= 1e-4 * fscale * h2;
  at.usable = rn <= tol_f || at.stagnated;
  at.force_resid_rel = rn * p.mass / (h2 * fscale);
  at.iters = it;
  if (!at.usable) return at;

  at.residual = rn * p.mass / (h2 * fscale);

  const Mat v = fd4_velocities(at.x, h);
  Vec fint(n + 1), energy(n + 1);
  for (Index k = 0; k <= n; ++k) {
    const double kin = 0.5 * p.mass * v.col(k).squaredNorm();
    const double pot = p.potential.value(at.x.col(k));
    fint[k] = kin + pot;
    energy[k] = kin - pot;
    at.vmax = std::max(at.vmax, pot);
  }
  at.action = simpson(fint, h);
  double elo = energy[2], ehi = energy[2];
  for (Index k = 2; k + 2 <= n; ++k) {
    elo = std::min(elo, energy[k]);
    ehi = std::max(ehi, energy[k]);
  }
  at.drift = ehi - elo;
  return at;
}

}  // namespace

BvpProblem BvpProblem::between(const PotentialFromSuperpotential& pfs,
                               const CriticalPoint& a, const CriticalPoint& b) {
  return BvpProblem{pfs.as_field(), 1.0, a.location, b.location,
                    0.0, 2049, {}, {}};
}

BvpProblem BvpProblem::between(ScalarField v, double mass, Vec a, Vec b) {
  return BvpProblem{std::move(v), mass, std::move(a), std::move(b),
                    0.0, 2049, {}, {}};
}

InstantonResult solve_instanton(const BvpProblem& problem) {
  const Index d = problem.potential.dim();
  if (problem.endpoint_a.size() != d || problem.endpoint_b.size() != d)
    throw Error("solve_instanton: endpoint dimension mismatch");
  if (!(problem.mass > 0.0)) throw Error("solve_instanton: mass must be positive");

  InstantonResult res;
  const double sep = (problem.endpoint_b - problem.endpoint_a).norm();
  const double scale = std::max(1.0, std::max(problem.endpoint_a.norm(),
                                              problem.endpoint_b.norm()));

  const double wa = endpoint_omega(problem.potential, problem.mass, problem.endpoint_a);
  const double wb = endpoint_omega(problem.potential, problem.mass, problem.endpoint_b);
  const double omega = std::min(wa, wb);
  // Auto half-interval: omega*T = 14 buries the endpoint tails below every
  // tolerance in use (exp(-2*omega*T) ~ 7e-13 relative action error) while
  // keeping the translation quasi-zero mode ~ exp(-omega*T) ~ 8e-7, i.e.
  // small but still resolvable by the linear solver. Larger T makes the
  // Jacobi operator numerically singular and buys nothing.
  const double t_half =
      problem.half_interval > 0.0 ? problem.half_interval : 14.0 / omega;
  res.half_interval = t_half;
  if (omega * t_half < 10.0)
    res.warnings.push_back("omega*T = " + std::to_string(omega * t_half) +
                           " < 10: endpoint approach underresolved");

  Index n = std::max<Index>(16, problem.n_nodes - 1);
  if (n % 2 == 1) ++n;

  if (sep <= 1e-14 * scale) {
    // Coincident endpoints: the constant path solves the problem exactly.
    const double h = 2.0 * t_half / static_cast<double>(n);
    res.trajectory.tau = Vec(n + 1);
    res.trajectory.points = Mat(d, n + 1);
    res.trajectory.velocities = Mat::Zero(d, n + 1);
    for (Index k = 0; k <= n; ++k) {
      res.trajectory.tau[k] = -t_half + h * static_cast<double>(k);
      res.trajectory.points.col(k) = problem.endpoint_a;
    }
    res.action = 2.0 * t_half * problem.potential.value(problem.endpoint_a);
    res.n_nodes = static_cast<int>(n) + 1;
    return res;
  }

  GridAttempt at;
  bool solved = false;
  double worst_rel = 0.0;
  Index n_fail = n;
  for (; n <= 16384; n *= 2) {
    n_fail = n;
    Mat seed;
    if (problem.guess && problem.guess->size() >= 2)
      seed = seed_from_path(problem.guess->points, problem.endpoint_a,
                            problem.endpoint_b, omega, t_half, n);
    else
      seed = tanh_seed(problem.endpoint_a, problem.endpoint_b, omega, t_half, n);
    at = relax(problem, t_half, n, seed);
    if (at.usable) {
      solved = true;
      break;
    }
    double best_rel = at.force_resid_rel;

    // Paths through intermediate vacua (kink chains) sit in an exponentially
    // flat valley at full T where Newton only creeps, and ridge transits can
    // strand the straight-line seed outside every basin. Continuation: solve
    // on a short interval where the pieces still interact strongly, then
    // double T reusing the solution. Both grids are uniform with the same
    // node count, so carrying the columns over rescales the profile for free.
    Mat x = tanh_seed(problem.endpoint_a, problem.endpoint_b, omega,
                      t_half / 8.0, n);
    bool chain_ok = true;
    for (double tc = t_half / 8.0;; tc *= 2.0) {
      GridAttempt stage = relax(problem, tc, n, x);
      if (!stage.usable) {
        chain_ok = false;
        best_rel = std::min(best_rel, stage.force_resid_rel);
        break;
      }
      x = stage.x;
      if (tc >= t_half) {
        at = stage;
        break;
      }
    }
    if (chain_ok) {
      solved = true;
      break;
    }
    worst_rel = best_rel;
    // A residual still at force scale is a lost basin, not truncation;
    // finer grids only repeat the failure more expensively.
    if (best_rel > 1e-3) break;
  }
  if (!solved)
    throw Error("solve_instanton: Newton did not converge, residual " +
                sci(worst_rel) + " of the force scale at " +
                std::to_string(n_fail + 1) + " nodes");

  // A path glued to one endpoint cannot beat the kinetic lower bound of any
  // genuine connection; treat that as a collapse onto the trivial solution.
  const double s_min = problem.mass * sep * sep / (4.0 * t_half);
  if (at.action < 0.5 * s_min)
    throw Error("solve_instanton: collapsed to trivial solution, enlarge T or "
                "improve guess (action " + std::to_string(at.action) + ")");

  if (at.stagnated)
    res.warnings.push_back(
        "Newton residual stagnated at " + sci(at.residual) +
        " of the force scale (quasi-zero mode); result kept with the "
        "residual recorded");

  const double h = 2.0 * t_half / static_cast<double>(n);
  res.trajectory.tau = Vec(n + 1);
  for (Index k = 0; k <= n; ++k)
    res.trajectory.tau[k] = -t_half + h * static_cast<double>(k);
  res.trajectory.points = at.x;
  res.trajectory.velocities = fd4_velocities(at.x, h);
  res.action = at.action;
  res.energy_drift = at.drift;
  res.potential_max = at.vmax;
  res.final_residual = at.residual;
  res.newton_iters = at.iters;
  res.n_nodes = static_cast<int>(n) + 1;
  return res;
}

ActionReport compare_routes(const PotentialFromSuperpotential& pfs,
                            const CriticalPoint& a, const CriticalPoint& b,
                            const CompareOptions& options) {
  ActionReport rep;
  const auto& w = pfs.superpotential();
  rep.s_closed_form = std::abs(w.value(a.location) - w.value(b.location));
  rep.bound_amplitude = DecadeValue::exp_neg(rep.s_closed_form);
  rep.thin_barrier = rep.s_closed_form < 3.0;

  // Flow route: descend from the higher-W endpoint; a construction failure
  // (no unstable direction) is a reportable configuration, not an error.
  const int sign = w.value(a.location) >= w.value(b.location) ? +1 : -1;
  std::optional<Trajectory> flow_path;
  try {
    FlowProblem fp(pfs, a, b, sign, options.known_points, options.flow);
    FlowOutcome out = solve_flow(fp);
    rep.flow_status = out.status;
    rep.flow_note = out.note;
    if (out.status == FlowStatus::Converged) {
      rep.s_quadrature = action_from_trajectory(out.trajectory, pfs);
      rep.residual_second_order = verify_second_order(out.trajectory, pfs);
      flow_path = std::move(out.trajectory);
    }
  } catch (const Error& e) {
    rep.flow_note = e.what();
  }

  BvpProblem bvp = BvpProblem::between(pfs, a, b);
  bvp.newton = options.newton;
  bvp.n_nodes = options.n_nodes;
  bvp.half_interval = options.half_interval;
  if (flow_path) bvp.guess = flow_path;
  InstantonResult inst = solve_instanton(bvp);
  rep.s_second_order = inst.action;
  rep.energy_drift = inst.energy_drift;
  rep.flow_trajectory = std::move(flow_path);
  rep.bvp_trajectory = std::move(inst.trajectory);

  rep.bound_ok =
      inst.action >= rep.s_closed_form * (1.0 - 1e-4) - 1e-12;
  rep.agreement_applicable =
      rep.flow_status && *rep.flow_status == FlowStatus::Converged;
  if (rep.agreement_applicable)
    rep.agreement_ok = std::abs(inst.action - rep.s_closed_form) <=
                       1e-3 * std::max(rep.s_closed_form, 1e-12);
  return rep;
}

}  // namespace qct
