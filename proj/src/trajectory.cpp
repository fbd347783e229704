#include "qct/trajectory.hpp"

#include <cmath>

namespace qct {

double Trajectory::arc_length() const {
  double s = 0.0;
  for (Index k = 0; k + 1 < points.cols(); ++k)
    s += (points.col(k + 1) - points.col(k)).norm();
  return s;
}

}  // namespace qct
