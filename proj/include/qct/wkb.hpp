#pragma once

#include <functional>
#include <utility>

#include "qct/quadrature.hpp"
#include "qct/types.hpp"

namespace qct {

// One-dimensional barrier V(r) at fixed energy E; the bracket must contain
// the classically forbidden region.
struct BarrierModel1D {
  std::function<double(double)> potential;
  double mass = 1.0;
  double energy = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 1.0;
  QuadOptions quad;
};

struct TurningPoints {
  double r_in = 0.0;
  double r_out = 0.0;
  // True when the inner edge is a potential step (V jumps across E there);
  // |V - E| <= tol cannot hold at a jump, the location itself is exact.
  bool inner_is_step = false;
};

// Locates the two crossings of V(r) = E by scan + bisection. Errors if the
// scan finds zero or more than two crossings (the message lists them).
TurningPoints turning_points(const BarrierModel1D& model, int n_scan = 4096);

// S = int_{r_in}^{r_out} sqrt(2 m (V - E)) dr via the sin^2 endpoint
// substitution and adaptive Gauss-Kronrod. Negative excursions of V - E
// inside the interval are clipped to zero.
double wkb_exponent(const BarrierModel1D& model, double r_in, double r_out);
double wkb_exponent(const BarrierModel1D& model);  // finds turning points first

// P = exp(-2 S), reported in decades so S ~ 100 stays representable.
DecadeValue tunneling_probability(double wkb_exponent_value);

}  // namespace qct
