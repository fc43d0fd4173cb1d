#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace omplab::detail {

template <typename Scalar>
struct SimplexResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  Scalar value;
  std::size_t evaluations;
};

// Nelder-Mead downhill simplex with the standard coefficients (1, 2, 0.5, 0.5).
// Stops when the spread of simplex values and the simplex diameter both fall
// below the tolerances or when the evaluation budget is exhausted.
template <typename Scalar, typename Objective>
SimplexResult<Scalar> nelder_mead(Objective&& f, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& start, Scalar step,
                                  Scalar f_tol, Scalar x_tol, std::size_t max_evaluations) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = start.size();
  std::vector<Vec> pts(n + 1, start);
  std::vector<Scalar> vals(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) pts[i + 1](i) += step;
  std::size_t evals = 0;
  auto eval = [&](const Vec& x) {
    ++evals;
    return f(x);
  };
  for (Eigen::Index i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(n + 1);
  while (evals < max_evaluations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    Scalar diameter = 0;
    for (Eigen::Index i = 0; i <= n; ++i) diameter = std::max(diameter, (pts[i] - pts[best]).cwiseAbs().maxCoeff());
    if (vals[worst] - vals[best] <= f_tol && diameter <= x_tol) break;

    Vec centroid = Vec::Zero(n);
    for (Eigen::Index i = 0; i <= n; ++i)
      if (static_cast<std::size_t>(i) != worst) centroid += pts[i];
    centroid /= Scalar(n);

    const Vec reflected = centroid + (centroid - pts[worst]);
    const Scalar f_r = eval(reflected);
    if (f_r < vals[best]) {
      const Vec expanded = centroid + Scalar(2) * (centroid - pts[worst]);
      const Scalar f_e = eval(expanded);
      if (f_e < f_r) {
        pts[worst] = expanded;
        vals[worst] = f_e;
      } else {
        pts[worst] = reflected;
        vals[worst] = f_r;
      }
      continue;
    }
    if (f_r < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = f_r;
      continue;
    }
    const bool outside = f_r < vals[worst];
    const Vec contracted = outside ? Vec(centroid + Scalar(0.5) * (reflected - centroid))
                                   : Vec(centroid + Scalar(0.5) * (pts[worst] - centroid));
    const Scalar f_c = eval(contracted);
    if (f_c < (outside ? f_r : vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = f_c;
      continue;
    }
    for (Eigen::Index i = 0; i <= n; ++i) {
      if (static_cast<std::size_t>(i) == best) continue;
      pts[i] = pts[best] + Scalar(0.5) * (pts[i] - pts[best]);
      vals[i] = eval(pts[i]);
    }
  }
  const auto best_it = std::min_element(vals.begin(), vals.end());
  const std::size_t best = static_cast<std::size_t>(best_it - vals.begin());
  return {pts[best], vals[best], evals};
}

}  // namespace omplab::detail
