#include "qct/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "flow_core.hpp"
#include "qct/potential.hpp"

namespace qct {
namespace {

constexpr double kPi = std::numbers::pi;

double wrap_phi(double phi) {
  phi = std::fmod(phi, 2.0 * kPi);
  if (phi < 0.0) phi += 2.0 * kPi;
  return phi;
}

Vec chart_point(double theta, double phi) {
  Vec x(2);
  x[0] = theta;
  x[1] = phi;
  return x;
}

bool is_north(const ChartedSurface& s, const Vec& x) {
  return x[0] <= 2.0 * s.theta_min;
}
bool is_south(const ChartedSurface& s, const Vec& x) {
  return x[0] >= kPi - 2.0 * s.theta_min;
}

// Classifies a pole by sampling W on a small ring around it; degenerate rings
// (constant W) have no isolated extremum to anchor the Morse structure.
CriticalPoint classify_pole(const ScalarField& w, bool north) {
  const double theta_pole = north ? 0.0 : kPi;
  const double ring = 0.02;
  const double theta_ring = north ? ring : kPi - ring;
  const Vec pole = chart_point(theta_pole, 0.0);
  const double wp = w.value(pole);

  const int n = 64;
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d =
        w.value(chart_point(theta_ring, 2.0 * kPi * i / n)) - wp;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  const double tol = 1e-12 * std::max(1.0, std::abs(wp));
  if (hi - lo <= tol)
    throw Error("surface_critical_points: degenerate field near the " +
                std::string(north ? "north" : "south") +
                " pole, no isolated extrema");
  CriticalPoint cp;
  cp.location = pole;
  cp.w_value = wp;
  if (hi <= tol)
    cp.morse_index = 2;  // strict local maximum
  else if (lo >= -tol)
    cp.morse_index = 0;
  else
    cp.morse_index = 1;
  cp.degenerate = false;
  return cp;
}

struct ChartEngine {
  detail::EngineProblem ep;
};

ChartEngine chart_engine(const ChartedSurface& s, const ScalarField& w,
                         int sign) {
  ChartEngine e;
  e.ep.dim = 2;
  const Metric* g = &s.metric;
  e.ep.rhs = [g, &w, sign](const Vec& x) -> Vec {
    return Vec(-sign * (g->inverse(x) * w.gradient(x)));
  };
  e.ep.speed = [g](const Vec& x, const Vec& v) -> double {
    return std::sqrt(std::max(0.0, g->squared_norm(x, v)));
  };
  e.ep.period = Vec::Zero(2);
  e.ep.period[1] = 2.0 * kPi;
  e.ep.pole_lo = s.theta_min;
  e.ep.pole_hi = kPi - s.theta_min;
  e.ep.length_scale = kPi;
  return e;
}

}  // namespace

ChartedSurface make_sphere() {
  return ChartedSurface{"sphere", Metric::from_components(2, [](const Vec& x) {
                          Mat g = Mat::Zero(2, 2);
                          g(0, 0) = 1.0;
                          g(1, 1) = std::sin(x[0]) * std::sin(x[0]);
                          return g;
                        })};
}

ChartedSurface make_spheroid(double a, double c) {
  if (!(a > 0.0) || !(c > 0.0))
    throw Error("make_spheroid: semi-axes must be positive");
  return ChartedSurface{"spheroid",
                        Metric::from_components(2, [a, c](const Vec& x) {
                          const double st = std::sin(x[0]), ct = std::cos(x[0]);
                          Mat g = Mat::Zero(2, 2);
                          g(0, 0) = a * a * ct * ct + c * c * st * st;
                          g(1, 1) = a * a * st * st;
                          return g;
                        })};
}

std::vector<CriticalPoint> SurfaceCriticalPoints::all() const {
  std::vector<CriticalPoint> out;
  out.push_back(north);
  out.push_back(south);
  out.insert(out.end(), interior.begin(), interior.end());
  return out;
}

std::string SurfaceCriticalPoints::id(std::size_t index_in_all) {
  if (index_in_all == 0) return "north";
  if (index_in_all == 1) return "south";
  return "cp" + std::to_string(index_in_all - 2);
}

SurfaceCriticalPoints surface_critical_points(const ChartedSurface& surface,
                                              const ScalarField& w,
                                              const FindOptions& opts) {
  if (w.dim() != 2)
    throw Error("surface_critical_points: chart field must be 2-D");
  SurfaceCriticalPoints out{classify_pole(w, true), classify_pole(w, false), {}};

  const double margin = std::max(4.0 * surface.theta_min, 1e-3);
  Box box;
  box.lo = chart_point(margin, 0.0);
  box.hi = chart_point(kPi - margin, 2.0 * kPi);
  std::vector<CriticalPoint> found = find_critical_points(w, box, opts);

  // The phi seam duplicates critical points at 0 and 2 pi; wrap and dedup.
  const double dedup = 1e-6 * kPi;
  for (auto& cp : found) {
    cp.location[1] = wrap_phi(cp.location[1]);
    bool dup = false;
    for (const auto& have : out.interior) {
      if (detail::chart_distance(cp.location, have.location,
                                 chart_point(0.0, 2.0 * kPi)) <= dedup)
        dup = true;
    }
    if (!dup) out.interior.push_back(std::move(cp));
  }
  return out;
}

FlowOutcome manifold_flow(const ChartedSurface& surface, const ScalarField& w,
                          const CriticalPoint& source,
                          const CriticalPoint& target, int direction_sign,
                          std::vector<CriticalPoint> known_points,
                          FlowOptions options, double pole_phi) {
  if (w.dim() != 2) throw Error("manifold_flow: chart field must be 2-D");
  const int sign = direction_sign >= 0 ? +1 : -1;

  detail::PairSetup s;
  s.ep = chart_engine(surface, w, sign).ep;
  const double scale =
      options.length_scale > 0.0 ? options.length_scale : kPi;
  s.ep.length_scale = scale;
  s.ep.capture_radius = options.capture_radius_rel * scale;
  s.ep.grad_capture_rel = options.grad_capture_rel;
  s.ep.escape_radius = options.escape_radius_rel;
  s.ep.max_steps = options.max_steps;
  s.ep.rel_tol = options.rel_tol;
  s.n_samples = options.n_samples;
  s.source = source;
  s.target = target;

  // Split the known set into interior capture points and pole payloads.
  auto add_known = [&](const CriticalPoint& cp) {
    if (is_north(surface, cp.location)) {
      if (!s.pole_lo_cp) s.pole_lo_cp = cp;
      return;
    }
    if (is_south(surface, cp.location)) {
      if (!s.pole_hi_cp) s.pole_hi_cp = cp;
      return;
    }
    for (const auto& have : s.known)
      if (detail::chart_distance(cp.location, have.location, s.ep.period) <=
          s.ep.capture_radius)
        return;
    s.known.push_back(cp);
    s.ep.capture_points.push_back(cp.location);
  };
  add_known(source);
  add_known(target);
  for (const auto& cp : known_points) add_known(cp);
  s.target_is_pole_lo = is_north(surface, target.location);
  s.target_is_pole_hi = is_south(surface, target.location);

  const bool src_north = is_north(surface, source.location);
  const bool src_south = is_south(surface, source.location);
  if (src_north || src_south) {
    // Pole start: pick the steepest meridian on the theta_min ring (or the
    // caller's phi), and fail if the pole is a sink for this sign.
    const double theta0 =
        src_north ? surface.theta_min : kPi - surface.theta_min;
    const double wp = w.value(source.location);
    double best_phi = 0.0, best = 0.0;
    const int n = 256;
    for (int i = 0; i < n; ++i) {
      const double phi = 2.0 * kPi * i / n;
      const double gain = sign * (wp - w.value(chart_point(theta0, phi)));
      if (i == 0 || gain > best) {
        best = gain;
        best_phi = phi;
      }
    }
    if (!(best > 0.0))
      throw Error("manifold_flow: no unstable direction at the " +
                  std::string(src_north ? "north" : "south") +
                  " pole for this sign");
    if (std::isfinite(pole_phi)) {
      best_phi = wrap_phi(pole_phi);
      const double gain =
          sign * (wp - w.value(chart_point(theta0, best_phi)));
      if (!(gain > 0.0))
        throw Error("manifold_flow: requested meridian does not descend");
    }
    Vec start = chart_point(theta0, best_phi);
    s.offset_dir = (start - source.location).normalized();
    s.offset = (start - source.location).norm();
  } else {
    // Interior start: reuse the flat-problem validation for the unstable
    // chart direction (the metric preserves the Hessian signature).
    PotentialFromSuperpotential pfs(w, surface.metric);
    FlowOptions fo = options;
    fo.length_scale = scale;
    FlowProblem fp(pfs, source, target, sign, {}, fo);
    s.offset_dir = fp.unstable_direction();
    s.offset = options.offset_rel * scale;
  }

  return detail::run_flow_pair(s);
}

double manifold_action(const Trajectory& traj, const ChartedSurface& surface,
                       const ScalarField& w) {
  PotentialFromSuperpotential pfs(w, surface.metric);
  return action_from_trajectory(traj, pfs);
}

MorseCellReport morse_cells(const ChartedSurface& surface, const ScalarField& w,
                            const SurfaceCriticalPoints& cps, Index n_theta,
                            Index n_phi, const MorseOptions& options) {
  if (n_theta < 1 || n_phi < 1)
    throw Error("morse_cells: seed grid must be nonempty");
  const std::vector<CriticalPoint> all = cps.all();

  detail::EngineProblem fwd = chart_engine(surface, w, +1).ep;
  fwd.capture_radius = options.capture_radius;
  fwd.grad_capture_rel = options.grad_capture_rel;
  fwd.max_steps = options.max_steps;
  fwd.rel_tol = options.rel_tol;
  fwd.escape_radius = 1e3;
  fwd.record_path = false;
  for (const auto& cp : cps.interior) fwd.capture_points.push_back(cp.location);
  detail::EngineProblem rev = chart_engine(surface, w, -1).ep;
  rev.capture_radius = fwd.capture_radius;
  rev.grad_capture_rel = fwd.grad_capture_rel;
  rev.max_steps = fwd.max_steps;
  rev.rel_tol = fwd.rel_tol;
  rev.escape_radius = fwd.escape_radius;
  rev.record_path = false;
  rev.capture_points = fwd.capture_points;

  // Terminus in all()-index space, or -1 when unusable for classification.
  auto terminus = [&](const detail::EngineProblem& ep, const Vec& seed) -> int {
    const detail::EngineResult r = detail::integrate_flow(ep, seed);
    int idx = -1;
    if (r.status == detail::EngineStatus::CapturedPoleLo) idx = 0;
    else if (r.status == detail::EngineStatus::CapturedPoleHi) idx = 1;
    else if (r.status == detail::EngineStatus::CapturedPoint)
      idx = 2 + r.capture_index;
    if (idx < 0) return -1;
    if (all[static_cast<std::size_t>(idx)].morse_index == 1) return -1;
    for (const auto& cp : all)
      if (cp.morse_index == 1 &&
          detail::chart_distance(r.last_point, cp.location, ep.period) <=
              options.separatrix_tol)
        return -1;
    return idx;
  };

  MorseCellReport rep;
  std::map<std::pair<int, int>, std::vector<Vec>> groups;
  const double lo = 2.0 * surface.theta_min;
  const double hi = kPi - 2.0 * surface.theta_min;
  for (Index j = 0; j < n_theta; ++j) {
    const double theta = lo + (j + 0.5) * (hi - lo) / static_cast<double>(n_theta);
    for (Index i = 0; i < n_phi; ++i) {
      const double phi = (i + 0.5) * 2.0 * kPi / static_cast<double>(n_phi);
      const Vec seed = chart_point(theta, phi);
      ++rep.n_seeds;
      const int sink = terminus(fwd, seed);
      const int src = sink < 0 ? -1 : terminus(rev, seed);
      if (src < 0 || sink < 0) {
        rep.unclassified.push_back(seed);
        continue;
      }
      groups[{src, sink}].push_back(seed);
    }
  }

  for (auto& [key, members] : groups) {
    MorseCell cell;
    cell.source = all[static_cast<std::size_t>(key.first)];
    cell.sink = all[static_cast<std::size_t>(key.second)];
    cell.source_id = SurfaceCriticalPoints::id(static_cast<std::size_t>(key.first));
    cell.sink_id = SurfaceCriticalPoints::id(static_cast<std::size_t>(key.second));
    cell.members = std::move(members);
    rep.cells.push_back(std::move(cell));
  }
  rep.classified_fraction =
      rep.n_seeds == 0
          ? 0.0
          : 1.0 - static_cast<double>(rep.unclassified.size()) /
                      static_cast<double>(rep.n_seeds);
  return rep;
}

}  // namespace qct
