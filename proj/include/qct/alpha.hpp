#pragma once

#include <string>
#include <vector>

#include "qct/wkb.hpp"

namespace qct {

// MeV / fm units with hbar = 1. e_sq is the Coulomb coupling e^2 chosen so
// that 2 * 90 * e_sq = 260 MeV fm exactly.
struct PhysicalConstants {
  double hbar_c = 197.327;            // MeV fm
  double e_sq = 260.0 / 180.0;        // MeV fm
  double m_alpha = 3727.38;           // MeV
  double amu = 931.49;                // MeV per nucleon of the daughter
  double c_fm_per_s = 2.99792458e23;  // fm / s
};

// Square nuclear well plus Coulomb tail; the barrier's inner edge is the
// step at the nuclear radius R_n = 1.2 A^{1/3}.
struct AlphaDecayModel {
  int z1 = 2;
  int z2 = 90;
  double a_daughter = 234.0;
  double energy_mev = 4.7;
  double well_depth_mev = 0.0;  // V inside the well, must stay below E
  bool use_reduced_mass = true;
  PhysicalConstants constants;
  QuadOptions quad;

  double nuclear_radius() const;       // fm
  double coulomb_coupling() const;     // Z1 Z2 e^2, MeV fm
  double barrier_top() const;          // V at R_n+, MeV
  double mass() const;                 // reduced or bare alpha mass, MeV
  double potential(double r) const;    // MeV
  BarrierModel1D barrier() const;      // mass expressed in 1/fm^2 units via hbar c
};

struct AlphaResult {
  double r_in = 0.0;
  double r_out = 0.0;
  bool inner_is_step = false;
  double two_s = 0.0;
  DecadeValue probability;
  double assault_frequency_hz = 0.0;
  double log10_tau_s = 0.0;
};

AlphaResult evaluate_alpha_decay(const AlphaDecayModel& model);

struct SweepRow {
  double energy_mev = 0.0;
  double two_s = 0.0;
  double log10_p = 0.0;
  double log10_tau_s = 0.0;
  bool no_barrier = false;  // E at or above the barrier top
};

// Same template evaluated at each energy; rows keep the input order.
std::vector<SweepRow> lifetime_sweep(const AlphaDecayModel& tmpl,
                                     const std::vector<double>& energies);

// log10(tau_max / tau_min) over the rows that still see a barrier.
double sweep_span_decades(const std::vector<SweepRow>& rows);

}  // namespace qct
