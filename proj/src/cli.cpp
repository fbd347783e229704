#include "qct/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "qct/alpha.hpp"
#include "qct/catalog.hpp"
#include "qct/critical_points.hpp"
#include "qct/flow.hpp"
#include "qct/instanton.hpp"
#include "qct/manifold.hpp"
#include "qct/metric.hpp"
#include "qct/potential.hpp"
#include "qct/wkb.hpp"

namespace qct::cli {
namespace {

std::string f17(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

std::string fdec(const DecadeValue& d) {
  char b[64];
  std::snprintf(b, sizeof b, "%.6ge%+d", d.mantissa, d.exponent);
  return b;
}

// Accumulates the report.txt lines; checks decide the exit code.
struct Report {
  std::vector<std::string> lines;
  int n_checks = 0;
  int n_passed = 0;

  explicit Report(const std::string& scenario) {
    lines.push_back("scenario: " + scenario);
  }
  void kv(const std::string& key, const std::string& value) {
    lines.push_back(key + ": " + value);
  }
  void kv(const std::string& key, double v) { kv(key, f17(v)); }
  void kvi(const std::string& key, long long v) { kv(key, std::to_string(v)); }
  void check(const std::string& name, bool pass, const std::string& detail = "") {
    ++n_checks;
    n_passed += pass ? 1 : 0;
    std::string l = "check " + name + ": " + (pass ? "PASS" : "FAIL");
    if (!detail.empty()) l += " (" + detail + ")";
    lines.push_back(l);
  }
  bool all_pass() const { return n_passed == n_checks; }
  std::string text() const {
    std::string out;
    for (const auto& l : lines) {
      out += l;
      out += '\n';
    }
    out += "overall: ";
    out += all_pass() ? "PASS" : "FAIL";
    out += " (" + std::to_string(n_passed) + "/" + std::to_string(n_checks) +
           " checks)\n";
    return out;
  }
};

using Files = std::map<std::string, std::string>;

std::string trajectory_csv(const Trajectory& t,
                           const std::vector<std::string>& names = {}) {
  std::string out = "tau";
  for (Index i = 0; i < t.dim(); ++i) {
    out += ',';
    out += static_cast<std::size_t>(i) < names.size()
               ? names[static_cast<std::size_t>(i)]
               : "x" + std::to_string(i + 1);
  }
  out += '\n';
  for (Index k = 0; k < t.size(); ++k) {
    out += f17(t.tau[k]);
    for (Index i = 0; i < t.dim(); ++i) out += "," + f17(t.points(i, k));
    out += '\n';
  }
  return out;
}

// [field] section -> catalog entry; box_lo/box_hi override the search box,
// every other key is a numeric field parameter. --seed wins over field.seed.
CatalogField load_field(Config& cfg,
                        const std::optional<unsigned long long>& seed) {
  if (!cfg.has_section("field"))
    throw Error("config needs a [field] section naming a catalog id");
  const std::string id = cfg.str("field", "id", "");
  if (id.empty()) throw Error("field.id is required");
  std::optional<Vec> box_lo, box_hi;
  if (cfg.has("field", "box_lo")) box_lo = cfg.vec("field", "box_lo");
  if (cfg.has("field", "box_hi")) box_hi = cfg.vec("field", "box_hi");
  auto params = cfg.numbers("field");
  if (seed) params["seed"] = static_cast<double>(*seed);
  CatalogField cf = make_field(id, params);
  if (box_lo) {
    if (box_lo->size() != cf.field.dim())
      throw Error("field.box_lo has wrong dimension");
    cf.default_box.lo = *box_lo;
  }
  if (box_hi) {
    if (box_hi->size() != cf.field.dim())
      throw Error("field.box_hi has wrong dimension");
    cf.default_box.hi = *box_hi;
  }
  return cf;
}

ChartedSurface load_surface(Config& cfg) {
  const std::string id = cfg.str("surface", "id", "sphere");
  ChartedSurface s = [&] {
    if (id == "sphere") return make_sphere();
    if (id == "spheroid")
      return make_spheroid(cfg.num("surface", "a", 1.0),
                           cfg.num("surface", "c", 2.0));
    throw Error("unknown surface '" + id + "' (have: sphere, spheroid)");
  }();
  s.theta_min = cfg.num("surface", "theta_min", s.theta_min);
  return s;
}

AlphaDecayModel load_alpha_model(Config& cfg) {
  AlphaDecayModel m;
  m.z1 = static_cast<int>(cfg.integer("alpha", "z1", m.z1));
  m.z2 = static_cast<int>(cfg.integer("alpha", "z2", m.z2));
  m.a_daughter = cfg.num("alpha", "a_daughter", m.a_daughter);
  m.energy_mev = cfg.num("alpha", "energy_mev", m.energy_mev);
  m.well_depth_mev = cfg.num("alpha", "well_depth_mev", m.well_depth_mev);
  m.use_reduced_mass = cfg.flag("alpha", "reduced_mass", m.use_reduced_mass);
  return m;
}

void run_alpha(Config& cfg, Report& rep) {
  const AlphaDecayModel m = load_alpha_model(cfg);
  const AlphaResult r = evaluate_alpha_decay(m);
  rep.kvi("z1", m.z1);
  rep.kvi("z2", m.z2);
  rep.kv("a_daughter", m.a_daughter);
  rep.kv("energy_mev", m.energy_mev);
  rep.kv("nuclear_radius_fm", m.nuclear_radius());
  rep.kv("barrier_top_mev", m.barrier_top());
  rep.kv("r_in_fm", r.r_in);
  rep.kv("r_out_fm", r.r_out);
  rep.kv("inner_is_step", r.inner_is_step ? "yes" : "no");
  rep.kv("two_s", r.two_s);
  rep.kv("probability", fdec(r.probability));
  rep.kv("log10_probability", r.probability.log10_value);
  rep.kv("assault_frequency_hz", r.assault_frequency_hz);
  rep.kv("log10_lifetime_s", r.log10_tau_s);
  rep.check("turning_points_ordered", r.r_in < r.r_out,
            "r_in = " + f17(r.r_in) + ", r_out = " + f17(r.r_out));
  rep.check("exponent_nonnegative", r.two_s >= 0.0);
  rep.check("probability_unit_interval", r.probability.log10_value <= 0.0);
}

void run_sweep(Config& cfg, Report& rep, Files& files) {
  const AlphaDecayModel tmpl = load_alpha_model(cfg);
  const double e_lo = cfg.num("sweep", "e_min_mev", 2.0);
  const double e_hi = cfg.num("sweep", "e_max_mev", 8.0);
  const long n = cfg.integer("sweep", "n_energies", 61);
  if (n < 2) throw Error("sweep.n_energies must be at least 2");
  if (!(e_lo > 0.0) || !(e_hi > e_lo))
    throw Error("sweep energies must satisfy 0 < e_min_mev < e_max_mev");
  std::vector<double> energies(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i)
    energies[static_cast<std::size_t>(i)] =
        e_lo + (e_hi - e_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  const auto rows = lifetime_sweep(tmpl, energies);

  std::string csv = "E_MeV,two_S,log10_P,log10_tau_s\n";
  long written = 0, skipped = 0;
  bool monotone = true;
  double prev_two_s = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    if (row.no_barrier) {
      ++skipped;
      continue;
    }
    csv += f17(row.energy_mev) + "," + f17(row.two_s) + "," +
           f17(row.log10_p) + "," + f17(row.log10_tau_s) + "\n";
    ++written;
    if (!(row.two_s < prev_two_s)) monotone = false;
    prev_two_s = row.two_s;
  }
  files["sweep.csv"] = csv;

  rep.kv("barrier_top_mev", tmpl.barrier_top());
  rep.kv("e_min_mev", e_lo);
  rep.kv("e_max_mev", e_hi);
  rep.kvi("n_rows", written);
  rep.kvi("n_above_barrier", skipped);
  rep.kv("span_decades", sweep_span_decades(rows));
  rep.check("rows_below_barrier", written > 0);
  rep.check("exponent_decreasing_in_energy", monotone);
}

void run_wkb(Config& cfg, Report& rep,
             const std::optional<unsigned long long>& seed) {
  const CatalogField cf = load_field(cfg, seed);
  if (cf.field.dim() != 1)
    throw Error("wkb needs a one-dimensional field, '" + cf.id + "' has dim " +
                std::to_string(cf.field.dim()));
  const PotentialFromSuperpotential pfs(cf.field, Metric::flat(1));
  BarrierModel1D model;
  model.potential = [pfs](double r) {
    Vec x(1);
    x[0] = r;
    return pfs.value(x);
  };
  model.mass = cfg.num("wkb", "mass", 1.0);
  model.energy = cfg.num("wkb", "energy", 0.0);
  model.bracket_lo = cfg.num("wkb", "bracket_lo", cf.default_box.lo[0]);
  model.bracket_hi = cfg.num("wkb", "bracket_hi", cf.default_box.hi[0]);

  const bool explicit_tp = cfg.has("wkb", "r_in") || cfg.has("wkb", "r_out");
  double r_in = 0.0, r_out = 0.0;
  bool inner_is_step = false;
  if (explicit_tp) {
    if (!cfg.has("wkb", "r_in") || !cfg.has("wkb", "r_out"))
      throw Error("wkb.r_in and wkb.r_out must be given together");
    r_in = cfg.num("wkb", "r_in", 0.0);
    r_out = cfg.num("wkb", "r_out", 0.0);
    if (!(r_out > r_in)) throw Error("wkb.r_out must exceed wkb.r_in");
  } else {
    const TurningPoints tp = turning_points(model);
    r_in = tp.r_in;
    r_out = tp.r_out;
    inner_is_step = tp.inner_is_step;
  }
  const double s = wkb_exponent(model, r_in, r_out);
  const DecadeValue p = tunneling_probability(s);

  rep.kv("field", cf.id);
  rep.kv("mass", model.mass);
  rep.kv("energy", model.energy);
  rep.kv("r_in", r_in);
  rep.kv("r_out", r_out);
  rep.kv("inner_is_step", inner_is_step ? "yes" : "no");
  rep.kv("s_wkb", s);
  rep.kv("probability", fdec(p));
  rep.kv("log10_probability", p.log10_value);
  rep.check("exponent_nonnegative", s >= 0.0);
  if (model.energy == 0.0 && explicit_tp) {
    Vec xa(1), xb(1);
    xa[0] = r_in;
    xb[0] = r_out;
    const double dw =
        std::sqrt(model.mass) * std::abs(cf.field.value(xb) - cf.field.value(xa));
    const double tol = 1e-6 * std::max(dw, 1e-12);
    rep.kv("superpotential_drop", dw);
    rep.check("matches_superpotential_drop", std::abs(s - dw) <= tol,
              "|s - drop| = " + f17(std::abs(s - dw)) + ", tol = " + f17(tol));
  }
}

// Shared core of the flow and compare scenarios; the flow scenario insists
// on a converged first-order path, compare also accepts bound-only reports.
void run_flow_like(Config& cfg, Report& rep, Files& files,
                   const std::optional<unsigned long long>& seed,
                   bool require_flow) {
  const std::string sec = require_flow ? "flow" : "compare";
  const CatalogField cf = load_field(cfg, seed);
  const auto cps = find_critical_points(cf.field, cf.default_box);
  if (cps.size() < 2)
    throw Error("'" + cf.id + "' has " + std::to_string(cps.size()) +
                " critical points in the box, need at least 2");
  const long ia = cfg.integer(sec, "source_index", 0);
  const long ib = cfg.integer(sec, "target_index",
                              static_cast<long>(cps.size()) - 1);
  const long ncp = static_cast<long>(cps.size());
  if (ia < 0 || ia >= ncp || ib < 0 || ib >= ncp || ia == ib)
    throw Error(sec + ".source_index/target_index must be distinct indices in "
                "0.." + std::to_string(ncp - 1) +
                " (points are sorted by descending W)");

  CompareOptions copts;
  copts.flow.rel_tol = cfg.num(sec, "rel_tol", copts.flow.rel_tol);
  copts.flow.n_samples =
      static_cast<int>(cfg.integer(sec, "n_samples", copts.flow.n_samples));
  copts.n_nodes = static_cast<int>(cfg.integer(sec, "n_nodes", copts.n_nodes));
  copts.half_interval = cfg.num(sec, "half_interval", copts.half_interval);
  copts.newton.residual_tol_rel =
      cfg.num(sec, "residual_tol", copts.newton.residual_tol_rel);
  copts.newton.max_iters =
      static_cast<int>(cfg.integer(sec, "max_iters", copts.newton.max_iters));
  copts.known_points = cps;

  const PotentialFromSuperpotential pfs(cf.field, Metric::flat(cf.field.dim()));
  const CriticalPoint& a = cps[static_cast<std::size_t>(ia)];
  const CriticalPoint& b = cps[static_cast<std::size_t>(ib)];
  const ActionReport ar = compare_routes(pfs, a, b, copts);

  rep.kv("field", cf.id);
  rep.kvi("n_critical_points", ncp);
  rep.kv("source", format_point(a.location));
  rep.kv("target", format_point(b.location));
  rep.kv("s_closed_form", ar.s_closed_form);
  rep.kv("flow_status",
         ar.flow_status ? to_string(*ar.flow_status) : "construction failed");
  if (!ar.flow_note.empty()) rep.kv("flow_note", ar.flow_note);
  if (ar.s_quadrature) rep.kv("s_flow_quadrature", *ar.s_quadrature);
  if (ar.residual_second_order)
    rep.kv("flow_second_order_residual", *ar.residual_second_order);
  if (ar.s_second_order) rep.kv("s_relaxation", *ar.s_second_order);
  if (ar.s_second_order) rep.kv("energy_drift", ar.energy_drift);
  rep.kv("bound_amplitude", fdec(ar.bound_amplitude));
  if (ar.thin_barrier)
    rep.kv("note", "action below 3, exponent-only estimates are crude here");

  const bool converged =
      ar.flow_status && *ar.flow_status == FlowStatus::Converged;
  if (require_flow) {
    rep.check("flow_converged", converged,
              ar.flow_status ? to_string(*ar.flow_status) : ar.flow_note);
    if (ar.flow_trajectory) {
      const int sign = a.w_value >= b.w_value ? +1 : -1;
      const double viol =
          max_descent_violation(*ar.flow_trajectory, cf.field, sign);
      const double tol = 1e-10 * std::max(1.0, ar.s_closed_form);
      rep.check("descent_monotone", viol <= tol,
                "max W increase = " + f17(viol));
    }
    if (ar.s_quadrature) {
      const double diff = std::abs(*ar.s_quadrature - ar.s_closed_form);
      const double tol = 1e-4 * std::max(ar.s_closed_form, 1e-12);
      rep.check("flow_action_matches_closed_form", diff <= tol,
                "|diff| = " + f17(diff) + ", tol = " + f17(tol));
    }
    if (ar.residual_second_order)
      rep.check("flow_obeys_second_order_equation",
                *ar.residual_second_order <= 1e-3,
                "residual = " + f17(*ar.residual_second_order));
  }
  if (ar.s_second_order) {
    rep.check("relaxation_bounds_closed_form", ar.bound_ok,
              "s_relaxation = " + f17(*ar.s_second_order) +
                  ", s_closed_form = " + f17(ar.s_closed_form));
    if (ar.agreement_applicable)
      rep.check("relaxation_matches_closed_form", ar.agreement_ok,
                "|diff| = " +
                    f17(std::abs(*ar.s_second_order - ar.s_closed_form)));
  }

  if (ar.flow_trajectory)
    files["flow_path.csv"] = trajectory_csv(*ar.flow_trajectory);
  if (ar.bvp_trajectory)
    files["relaxation_path.csv"] = trajectory_csv(*ar.bvp_trajectory);
}

void run_instanton(Config& cfg, Report& rep, Files& files,
                   const std::optional<unsigned long long>& seed) {
  const CatalogField cf = load_field(cfg, seed);
  const bool raw = cfg.flag("instanton", "raw_potential", false);
  const double mass = cfg.num("instanton", "mass", 1.0);

  BvpProblem bp = [&] {
    if (raw) {
      if (!cfg.has("instanton", "endpoint_a") ||
          !cfg.has("instanton", "endpoint_b"))
        throw Error("raw_potential mode needs instanton.endpoint_a and "
                    "instanton.endpoint_b");
      return BvpProblem::between(cf.field, mass,
                                 cfg.vec("instanton", "endpoint_a"),
                                 cfg.vec("instanton", "endpoint_b"));
    }
    const auto cps = find_critical_points(cf.field, cf.default_box);
    if (cps.size() < 2)
      throw Error("'" + cf.id + "' has " + std::to_string(cps.size()) +
                  " critical points in the box, need at least 2");
    const long ncp = static_cast<long>(cps.size());
    const long ia = cfg.integer("instanton", "source_index", 0);
    const long ib = cfg.integer("instanton", "target_index", ncp - 1);
    if (ia < 0 || ia >= ncp || ib < 0 || ib >= ncp)
      throw Error("instanton.source_index/target_index out of range 0.." +
                  std::to_string(ncp - 1));
    const PotentialFromSuperpotential pfs(cf.field,
                                          Metric::flat(cf.field.dim()));
    return BvpProblem::between(pfs, cps[static_cast<std::size_t>(ia)],
                               cps[static_cast<std::size_t>(ib)]);
  }();
  bp.mass = mass;
  bp.n_nodes = static_cast<int>(cfg.integer("instanton", "n_nodes", bp.n_nodes));
  bp.half_interval = cfg.num("instanton", "half_interval", bp.half_interval);
  bp.newton.max_iters =
      static_cast<int>(cfg.integer("instanton", "max_iters", bp.newton.max_iters));
  bp.newton.residual_tol_rel =
      cfg.num("instanton", "residual_tol", bp.newton.residual_tol_rel);
  bp.newton.damping = cfg.num("instanton", "damping", bp.newton.damping);

  const InstantonResult ir = solve_instanton(bp);

  rep.kv("field", cf.id);
  rep.kv("mass", bp.mass);
  rep.kv("endpoint_a", format_point(bp.endpoint_a));
  rep.kv("endpoint_b", format_point(bp.endpoint_b));
  rep.kvi("n_nodes", ir.n_nodes);
  rep.kv("half_interval", ir.half_interval);
  rep.kvi("newton_iters", ir.newton_iters);
  rep.kv("action", ir.action);
  rep.kv("energy_drift", ir.energy_drift);
  rep.kv("potential_max", ir.potential_max);
  rep.kv("final_residual", ir.final_residual);
  for (const auto& w : ir.warnings) rep.kv("warning", w);

  rep.check("relaxation_converged", true,
            std::to_string(ir.newton_iters) + " Newton iterations");
  const double drift_tol = 1e-6 * std::max(ir.potential_max, 1e-30);
  rep.check("energy_conserved", ir.energy_drift <= drift_tol,
            "drift = " + f17(ir.energy_drift) + ", tol = " + f17(drift_tol));

  files["instanton_path.csv"] = trajectory_csv(ir.trajectory);
}

void run_manifold(Config& cfg, Report& rep, Files& files,
                  const std::optional<unsigned long long>& seed) {
  const CatalogField cf = load_field(cfg, seed);
  if (cf.field.dim() != 2)
    throw Error("manifold needs a 2-d chart field, '" + cf.id + "' has dim " +
                std::to_string(cf.field.dim()));
  const ChartedSurface surf = load_surface(cfg);
  const SurfaceCriticalPoints scps = surface_critical_points(surf, cf.field);
  const auto all = scps.all();

  const std::string sid = cfg.str("manifold", "source", "north");
  const std::string tid = cfg.str("manifold", "target", "south");
  auto resolve = [&](const std::string& want) -> const CriticalPoint& {
    for (std::size_t i = 0; i < all.size(); ++i)
      if (SurfaceCriticalPoints::id(i) == want) return all[i];
    std::string have = "north, south";
    for (std::size_t i = 2; i < all.size(); ++i)
      have += ", " + SurfaceCriticalPoints::id(i);
    throw Error("unknown stationary point '" + want + "' (have: " + have + ")");
  };
  const CriticalPoint& a = resolve(sid);
  const CriticalPoint& b = resolve(tid);
  const int sign = static_cast<int>(
      cfg.integer("manifold", "direction_sign",
                  a.w_value >= b.w_value ? +1 : -1));
  if (sign != 1 && sign != -1)
    throw Error("manifold.direction_sign must be +1 or -1");
  const double pole_phi = cfg.num(
      "manifold", "pole_phi", std::numeric_limits<double>::quiet_NaN());

  FlowOptions fop;
  fop.rel_tol = cfg.num("manifold", "rel_tol", fop.rel_tol);
  fop.n_samples =
      static_cast<int>(cfg.integer("manifold", "n_samples", fop.n_samples));

  const FlowOutcome out =
      manifold_flow(surf, cf.field, a, b, sign, all, fop, pole_phi);

  rep.kv("surface", surf.id);
  rep.kv("field", cf.id);
  rep.kv("source", sid + " " + format_point(a.location));
  rep.kv("target", tid + " " + format_point(b.location));
  rep.kvi("direction_sign", sign);
  rep.kv("flow_status", to_string(out.status));
  if (!out.note.empty()) rep.kv("flow_note", out.note);

  const bool converged = out.status == FlowStatus::Converged;
  rep.check("flow_converged", converged, to_string(out.status));
  if (converged) {
    const double s_q = manifold_action(out.trajectory, surf, cf.field);
    const double s_cf = action_closed_form(cf.field, a, b);
    rep.kv("s_quadrature", s_q);
    rep.kv("s_closed_form", s_cf);
    const double tol = 1e-5 * std::max(1.0, s_cf);
    rep.check("action_matches_closed_form", std::abs(s_q - s_cf) <= tol,
              "|diff| = " + f17(std::abs(s_q - s_cf)) + ", tol = " + f17(tol));
    const double viol = max_descent_violation(out.trajectory, cf.field, sign);
    rep.check("descent_monotone", viol <= 1e-10 * std::max(1.0, s_cf),
              "max W increase = " + f17(viol));

    // Axisymmetric fields must flow along a meridian; detect dW/dphi = 0 by
    // sampling along the path rather than trusting the field id.
    double max_dphi = 0.0;
    for (Index k = 0; k < out.trajectory.size(); k += 16)
      max_dphi = std::max(
          max_dphi, std::abs(cf.field.gradient(out.trajectory.points.col(k))[1]));
    if (max_dphi <= 1e-12) {
      const double phi_span = out.trajectory.points.row(1).maxCoeff() -
                              out.trajectory.points.row(1).minCoeff();
      rep.check("meridian_phi_constant", phi_span <= 1e-8,
                "phi span = " + f17(phi_span));
    }
    files["manifold_path.csv"] =
        trajectory_csv(out.trajectory, {"theta", "phi"});
  }
}

void run_morse(Config& cfg, Report& rep, Files& files,
               const std::optional<unsigned long long>& seed) {
  const CatalogField cf = load_field(cfg, seed);
  if (cf.field.dim() != 2)
    throw Error("morse needs a 2-d chart field, '" + cf.id + "' has dim " +
                std::to_string(cf.field.dim()));
  const ChartedSurface surf = load_surface(cfg);
  const SurfaceCriticalPoints scps = surface_critical_points(surf, cf.field);

  const long n_theta = cfg.integer("morse", "n_theta", 32);
  const long n_phi = cfg.integer("morse", "n_phi", 64);
  if (n_theta < 1 || n_phi < 1)
    throw Error("morse.n_theta and morse.n_phi must be positive");
  MorseOptions mo;
  mo.separatrix_tol = cfg.num("morse", "separatrix_tol", mo.separatrix_tol);
  mo.rel_tol = cfg.num("morse", "rel_tol", mo.rel_tol);
  mo.capture_radius = cfg.num("morse", "capture_radius", mo.capture_radius);
  mo.max_steps = cfg.integer("morse", "max_steps", mo.max_steps);
  const double min_classified = cfg.num("morse", "min_classified", 0.95);

  const MorseCellReport mr =
      morse_cells(surf, cf.field, scps, n_theta, n_phi, mo);

  rep.kv("surface", surf.id);
  rep.kv("field", cf.id);
  rep.kvi("n_interior_critical_points",
          static_cast<long long>(scps.interior.size()));
  rep.kvi("n_seeds", mr.n_seeds);
  rep.kvi("n_cells", static_cast<long long>(mr.cells.size()));
  rep.kvi("n_unclassified", static_cast<long long>(mr.unclassified.size()));
  rep.kv("classified_fraction", mr.classified_fraction);

  std::string csv = "theta,phi,source_id,sink_id\n";
  long long members = 0;
  for (const auto& cell : mr.cells) {
    rep.kv("cell " + cell.source_id + " -> " + cell.sink_id,
           std::to_string(cell.members.size()) + " seeds");
    members += static_cast<long long>(cell.members.size());
    for (const auto& x : cell.members)
      csv += f17(x[0]) + "," + f17(x[1]) + "," + cell.source_id + "," +
             cell.sink_id + "\n";
  }
  for (const auto& x : mr.unclassified)
    csv += f17(x[0]) + "," + f17(x[1]) + ",unclassified,unclassified\n";
  files["cells.csv"] = csv;

  rep.check("partition_exact",
            members + static_cast<long long>(mr.unclassified.size()) ==
                mr.n_seeds,
            std::to_string(members) + " classified + " +
                std::to_string(mr.unclassified.size()) + " unclassified of " +
                std::to_string(mr.n_seeds));
  rep.check("classified_fraction_min",
            mr.classified_fraction >= min_classified,
            f17(mr.classified_fraction) + " >= " + f17(min_classified));
}

ScenarioResult flush(const Report& rep, Files& files,
                     const std::string& out_dir) {
  files["report.txt"] = rep.text();
  ScenarioResult res;
  res.exit_code = rep.all_pass() ? 0 : 1;
  res.report = rep.text();
  namespace fs = std::filesystem;
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  fs::create_directories(dir);
  for (const auto& [name, content] : files) {
    const fs::path p = dir / name;
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open for writing: " + p.string());
    f << content;
    f.flush();
    if (!f) throw Error("write failed: " + p.string());
    res.files_written.push_back(p.string());
  }
  return res;
}

}  // namespace

ScenarioResult run_scenario(const std::string& command, Config cfg,
                            const std::string& out_dir,
                            std::optional<unsigned long long> seed) {
  static const std::vector<std::string> known = {
      "alpha", "wkb", "flow", "instanton", "compare", "manifold", "morse",
      "sweep"};
  if (std::find(known.begin(), known.end(), command) == known.end()) {
    std::string list;
    for (const auto& k : known) list += (list.empty() ? "" : ", ") + k;
    throw Error("unknown subcommand '" + command + "' (have: " + list + ")");
  }
  if (!cfg.has_section(command))
    throw Error("config has no [" + command + "] section; each subcommand "
                "reads its own section (an empty one selects all defaults)");

  Report rep(command);
  Files files;
  if (command == "alpha")
    run_alpha(cfg, rep);
  else if (command == "sweep")
    run_sweep(cfg, rep, files);
  else if (command == "wkb")
    run_wkb(cfg, rep, seed);
  else if (command == "flow")
    run_flow_like(cfg, rep, files, seed, true);
  else if (command == "compare")
    run_flow_like(cfg, rep, files, seed, false);
  else if (command == "instanton")
    run_instanton(cfg, rep, files, seed);
  else if (command == "manifold")
    run_manifold(cfg, rep, files, seed);
  else
    run_morse(cfg, rep, files, seed);

  cfg.ensure_consumed();
  return flush(rep, files, out_dir);
}

}  // namespace qct::cli
