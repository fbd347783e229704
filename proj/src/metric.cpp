#include "qct/metric.hpp"

#include <utility>

namespace qct {

Metric Metric::flat(Index dim) {
  if (dim < 1) throw Error("Metric::flat: dimension must be >= 1");
  return Metric(dim, nullptr);
}

Metric Metric::from_components(Index dim, ComponentsFn g) {
  if (dim < 1) throw Error("Metric::from_components: dimension must be >= 1");
  if (!g) throw Error("Metric::from_components: components function required");
  return Metric(dim, std::move(g));
}

Mat Metric::components(const Vec& x) const {
  if (is_flat()) return Mat::Identity(dim_, dim_);
  Mat g = components_(x);
  if (g.rows() != dim_ || g.cols() != dim_)
    throw Error("Metric: components have wrong shape at " + format_point(x));
  return 0.5 * (g + g.transpose());
}

Mat Metric::inverse(const Vec& x) const {
  if (is_flat()) return Mat::Identity(dim_, dim_);
  const Mat g = components(x);
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success)
    throw Error("Metric: components not positive definite at " + format_point(x));
  return llt.solve(Mat::Identity(dim_, dim_));
}

double Metric::squared_norm(const Vec& x, const Vec& v) const {
  if (is_flat()) return v.squaredNorm();
  return v.dot(components(x) * v);
}

double Metric::cosquared_norm(const Vec& x, const Vec& p) const {
  if (is_flat()) return p.squaredNorm();
  return p.dot(inverse(x) * p);
}

}  // namespace qct
