#pragma once

#include <map>
#include <string>
#include <vector>

#include "qct/scalar_field.hpp"
#include "qct/types.hpp"

namespace qct {

// Built-in superpotentials addressable by id. Signs are fixed so that the
// descending flow of the two-well entries starts at the W-maximum.
//
//   double-well        W = sqrt(2 lambda m) (eta^2 x - x^3/3), params m, lambda, eta
//   saddle-to-min      W = x^3/3 - x + y^2/2
//   quartic            W = x^4/4 - x^2/2
//   sphere-height      W = cos(theta) on the (theta, phi) chart
//   sphere-height-perturbed   W = cos(theta) + amplitude sin^2(theta) cos(phi)
//   sphere-biaxial     W = cos(theta) + b sin^2(theta) cos^2(phi)
//   random-poly-2d     seeded degree-4 polynomial, params seed, draw
struct CatalogField {
  std::string id;
  ScalarField field;
  Box default_box;
  std::map<std::string, double> params;  // resolved values incl. defaults
};

CatalogField make_field(const std::string& id,
                        const std::map<std::string, double>& params = {});

std::vector<std::string> field_ids();

}  // namespace qct
