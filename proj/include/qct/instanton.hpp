#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qct/flow.hpp"
#include "qct/potential.hpp"
#include "qct/trajectory.hpp"

namespace qct {

struct NewtonOptions {
  double damping = 1.0;          // initial Newton step scale, halved on backtracking
  int max_iters = 80;
  double residual_tol_rel = 1e-10;  // on m*xddot - grad V, x force scale
};

// Two-point boundary value problem for the Euclidean equation m xddot = grad V
// on tau in [-T, T], Dirichlet endpoints, uniform grid of n_nodes samples.
struct BvpProblem {
  ScalarField potential;
  double mass = 1.0;
  Vec endpoint_a;
  Vec endpoint_b;
  double half_interval = 0.0;  // 0 = auto so that omega*T = 14
  int n_nodes = 2049;          // rounded up to even intervals
  std::optional<Trajectory> guess;  // default: straight line with tanh profile
  NewtonOptions newton;

  static BvpProblem between(const PotentialFromSuperpotential& pfs,
                            const CriticalPoint& a, const CriticalPoint& b);
  static BvpProblem between(ScalarField v, double mass, Vec a, Vec b);
};

struct InstantonResult {
  Trajectory trajectory;
  double action = 0.0;
  double energy_drift = 0.0;    // max - min of 1/2 m |xdot|^2 - V over the path
  double potential_max = 0.0;   // max V along the path (drift scale)
  double final_residual = 0.0;  // relative to the force scale
  int newton_iters = 0;
  int n_nodes = 0;              // grid actually used (retries double it)
  double half_interval = 0.0;
  std::vector<std::string> warnings;
};

InstantonResult solve_instanton(const BvpProblem& problem);

struct CompareOptions {
  FlowOptions flow;
  NewtonOptions newton;
  int n_nodes = 2049;
  double half_interval = 0.0;
  // Other stationary points of W; flows straying into one stop early as
  // Trapped instead of exhausting their step budget.
  std::vector<CriticalPoint> known_points;
};

// Cross-validation of the three action routes between two stationary points.
struct ActionReport {
  double s_closed_form = 0.0;                  // |W(a) - W(b)|
  std::optional<double> s_quadrature;          // flow route, when Converged
  std::optional<double> s_second_order;        // relaxation route
  std::optional<double> residual_second_order; // flow trajectory vs 2nd-order eq
  DecadeValue bound_amplitude;                 // exp(-|W(a) - W(b)|)
  std::optional<FlowStatus> flow_status;       // absent: construction failed
  std::string flow_note;
  std::optional<Trajectory> flow_trajectory;   // when Converged
  std::optional<Trajectory> bvp_trajectory;
  double energy_drift = 0.0;
  bool bound_ok = false;        // s_second_order >= s_closed_form (1 - 1e-4)
  bool agreement_applicable = false;  // flow converged
  bool agreement_ok = true;     // |s_second_order - s_closed_form| <= 1e-3 rel
  bool thin_barrier = false;    // action < 3: exponent-only estimate is crude
};

ActionReport compare_routes(const PotentialFromSuperpotential& pfs,
                            const CriticalPoint& a, const CriticalPoint& b,
                            const CompareOptions& options = {});

}  // namespace qct
