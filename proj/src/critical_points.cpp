#include "qct/critical_points.hpp"

#include <algorithm>
#include <cmath>

namespace qct {

namespace {

// Grid of n^dim seed points, uniform per box side (endpoints included).
void for_each_seed(const Box& box, int n, const std::function<void(const Vec&)>& fn) {
  const Index dim = box.dim();
  std::vector<int> idx(dim, 0);
  Vec x(dim);
  while (true) {
    for (Index d = 0; d < dim; ++d) {
      const double t = (n == 1) ? 0.5 : static_cast<double>(idx[d]) / (n - 1);
      x[d] = box.lo[d] + t * (box.hi[d] - box.lo[d]);
    }
    fn(x);
    Index d = 0;
    for (; d < dim; ++d) {
      if (++idx[d] < n) break;
      idx[d] = 0;
    }
    if (d == dim) return;
  }
}

}  // namespace

std::vector<CriticalPoint> find_critical_points(const ScalarField& w,
                                                const Box& search_box,
                                                const FindOptions& opts) {
  if (search_box.dim() != w.dim())
    throw Error("find_critical_points: box dimension does not match field");
  if (opts.n_seeds_per_side < 1)
    throw Error("find_critical_points: need at least one seed per side");
  const Index dim = w.dim();
  const double n_total = std::pow(static_cast<double>(opts.n_seeds_per_side),
                                  static_cast<double>(dim));
  if (n_total > 2e7)
    throw Error("find_critical_points: seed grid too large");

  // Field scale for the convergence test: largest gradient seen on the grid.
  double grad_scale = 1.0;
  for_each_seed(search_box, opts.n_seeds_per_side, [&](const Vec& s) {
    const double g = w.gradient(s).norm();
    if (std::isfinite(g)) grad_scale = std::max(grad_scale, g);
  });
  const double grad_tol = opts.grad_tol_rel * grad_scale;
  const double diam = std::max(search_box.diameter(), 1e-300);
  const double dedup_radius = opts.dedup_radius_rel * diam;
  const double margin = opts.box_margin_rel * diam;

  std::vector<Vec> roots;
  for_each_seed(search_box, opts.n_seeds_per_side, [&](const Vec& seed) {
    Vec x = seed;
    bool converged = false;
    for (int it = 0; it < opts.max_newton_iters; ++it) {
      const Vec g = w.gradient(x);
      if (!g.allFinite()) return;
      if (g.norm() <= grad_tol) {
        converged = true;
        break;
      }
      const Mat h = w.hessian(x);
      if (!h.allFinite()) return;
      Eigen::PartialPivLU<Mat> lu(h);
      const Vec step = lu.solve(g);
      if (!step.allFinite()) return;
      // Singular or near-singular Hessians produce huge steps; drop those seeds.
      if (step.norm() > 10.0 * diam) return;
      x -= step;
    }
    if (!converged || !search_box.contains(x, margin)) return;
    for (const Vec& r : roots)
      if ((r - x).norm() <= dedup_radius) return;
    roots.push_back(x);
  });

  // Plateau merge. Around a degenerate zero the gradient sits below
  // tolerance over a wide patch, so Newton lands scattered across it and the
  // radius dedup above keeps the scatter as separate "roots". Roots whose
  // connecting segment never lifts the gradient above tolerance are
  // numerically the same zero; a merged cluster wider than the dedup radius
  // is a flat plateau that no Hessian evaluation can classify.
  const std::size_t nr = roots.size();
  std::vector<std::size_t> parent(nr);
  for (std::size_t i = 0; i < nr; ++i) parent[i] = i;
  auto find_rep = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = i + 1; j < nr; ++j) {
      if (find_rep(i) == find_rep(j)) continue;
      if ((roots[i] - roots[j]).norm() > 0.5 * diam) continue;
      bool flat = true;
      for (double t : {0.25, 0.5, 0.75}) {
        if (w.gradient(roots[i] + t * (roots[j] - roots[i])).norm() > grad_tol) {
          flat = false;
          break;
        }
      }
      if (flat) parent[find_rep(j)] = find_rep(i);
    }
  }
  std::vector<std::vector<std::size_t>> clusters;
  {
    std::vector<std::size_t> label(nr, nr);
    for (std::size_t i = 0; i < nr; ++i) {
      const std::size_t rep = find_rep(i);
      if (label[rep] == nr) {
        label[rep] = clusters.size();
        clusters.emplace_back();
      }
      clusters[label[rep]].push_back(i);
    }
  }

  std::vector<CriticalPoint> out;
  out.reserve(clusters.size());
  for (const auto& members : clusters) {
    std::size_t best = members.front();
    double best_g = w.gradient(roots[best]).norm();
    for (const std::size_t i : members) {
      const double gi = w.gradient(roots[i]).norm();
      if (gi < best_g) {
        best = i;
        best_g = gi;
      }
    }
    double spread = 0.0;
    for (const std::size_t i : members)
      spread = std::max(spread, (roots[i] - roots[best]).norm());

    CriticalPoint cp;
    cp.location = roots[best];
    cp.w_value = w.value(cp.location);
    const Mat h = w.hessian(cp.location);
    Eigen::SelfAdjointEigenSolver<Mat> eig(h);
    cp.hessian_eigenvalues = eig.eigenvalues();
    cp.hessian_eigenvectors = eig.eigenvectors();
    const double eig_scale = cp.hessian_eigenvalues.cwiseAbs().maxCoeff();
    const double deg_tol = opts.degeneracy_tol_rel * eig_scale;
    cp.degenerate = spread > dedup_radius || eig_scale == 0.0 ||
                    (cp.hessian_eigenvalues.cwiseAbs().array() < deg_tol).any();
    if (cp.degenerate) {
      cp.morse_index = -1;
    } else {
      cp.morse_index =
          static_cast<int>((cp.hessian_eigenvalues.array() < 0.0).count());
    }
    out.push_back(std::move(cp));
  }

  std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.w_value != b.w_value) return a.w_value > b.w_value;
    for (Index i = 0; i < a.location.size(); ++i)
      if (a.location[i] != b.location[i]) return a.location[i] < b.location[i];
    return false;
  });
  return out;
}

CriticalPoint negate_critical_point(const CriticalPoint& cp, Index dim) {
  CriticalPoint out = cp;
  out.w_value = -cp.w_value;
  out.hessian_eigenvalues = -cp.hessian_eigenvalues;
  std::reverse(out.hessian_eigenvalues.begin(), out.hessian_eigenvalues.end());
  out.hessian_eigenvectors = cp.hessian_eigenvectors.rowwise().reverse();
  if (!cp.degenerate) out.morse_index = static_cast<int>(dim) - cp.morse_index;
  return out;
}

}  // namespace qct
