#include "qct/alpha.hpp"

#include <cmath>
#include <limits>

namespace qct {

double AlphaDecayModel::nuclear_radius() const {
  return 1.2 * std::cbrt(a_daughter);
}

double AlphaDecayModel::coulomb_coupling() const {
  return z1 * z2 * constants.e_sq;
}

double AlphaDecayModel::barrier_top() const {
  return coulomb_coupling() / nuclear_radius();
}

double AlphaDecayModel::mass() const {
  if (!use_reduced_mass) return constants.m_alpha;
  const double m_d = constants.amu * a_daughter;
  return constants.m_alpha * m_d / (constants.m_alpha + m_d);
}

double AlphaDecayModel::potential(double r) const {
  if (r <= 0.0) throw Error("AlphaDecayModel: potential sampled at r <= 0");
  return r < nuclear_radius() ? well_depth_mev : coulomb_coupling() / r;
}

BarrierModel1D AlphaDecayModel::barrier() const {
  if (!(energy_mev > well_depth_mev))
    throw Error("AlphaDecayModel: energy must exceed the well depth");
  BarrierModel1D b;
  const AlphaDecayModel self = *this;
  b.potential = [self](double r) { return self.potential(r); };
  // hbar = 1 bookkeeping: masses in MeV become 1/fm^2 through (hbar c)^2,
  // so sqrt(2 m (V-E)) dr is dimensionless.
  b.mass = mass() / (constants.hbar_c * constants.hbar_c);
  b.energy = energy_mev;
  b.bracket_lo = 0.5 * nuclear_radius();
  b.bracket_hi = 2.0 * coulomb_coupling() / energy_mev;
  b.quad = quad;
  return b;
}

AlphaResult evaluate_alpha_decay(const AlphaDecayModel& model) {
  const BarrierModel1D b = model.barrier();
  const TurningPoints tp = turning_points(b);

  AlphaResult res;
  res.r_in = tp.r_in;
  res.r_out = tp.r_out;
  res.inner_is_step = tp.inner_is_step;
  res.two_s = 2.0 * wkb_exponent(b, tp.r_in, tp.r_out);
  res.probability = DecadeValue::exp_neg(res.two_s);

  // Assault frequency v / (2 R_n) with v from the kinetic energy E.
  const double v = std::sqrt(2.0 * model.energy_mev / model.mass()) *
                   model.constants.c_fm_per_s;
  res.assault_frequency_hz = v / (2.0 * model.nuclear_radius());
  res.log10_tau_s = -res.probability.log10_value - std::log10(res.assault_frequency_hz);
  return res;
}

std::vector<SweepRow> lifetime_sweep(const AlphaDecayModel& tmpl,
                                     const std::vector<double>& energies) {
  std::vector<SweepRow> rows;
  rows.reserve(energies.size());
  for (double e : energies) {
    SweepRow row;
    row.energy_mev = e;
    AlphaDecayModel m = tmpl;
    m.energy_mev = e;
    if (e >= m.barrier_top()) {
      row.no_barrier = true;
      row.two_s = std::numeric_limits<double>::quiet_NaN();
      row.log10_p = std::numeric_limits<double>::quiet_NaN();
      row.log10_tau_s = std::numeric_limits<double>::quiet_NaN();
    } else {
      const AlphaResult r = evaluate_alpha_decay(m);
      row.two_s = r.two_s;
      row.log10_p = r.probability.log10_value;
      row.log10_tau_s = r.log10_tau_s;
    }
    rows.push_back(row);
  }
  return rows;
}

double sweep_span_decades(const std::vector<SweepRow>& rows) {
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto& r : rows) {
    if (r.no_barrier) continue;
    if (!any || r.log10_tau_s < lo) lo = r.log10_tau_s;
    if (!any || r.log10_tau_s > hi) hi = r.log10_tau_s;
    any = true;
  }
  if (!any) throw Error("sweep_span_decades: no rows below the barrier top");
  return hi - lo;
}

}  // namespace qct
