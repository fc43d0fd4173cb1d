#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace omplab::detail {

template <typename Scalar>
struct NnlsResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  Scalar residual;  // ||A x - b||_2
  bool converged;
};

// Lawson-Hanson active-set solver for min ||A x - b|| subject to x >= 0.
template <typename Scalar>
NnlsResult<Scalar> nnls(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
                        const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b, std::size_t max_iter = 0) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = a.cols();
  if (max_iter == 0) max_iter = 3 * static_cast<std::size_t>(n) + 10;
  const Scalar eps = Scalar(10) * std::numeric_limits<Scalar>::epsilon() * std::max<Scalar>(Scalar(1), a.norm());

  Vec x = Vec::Zero(n);
  std::vector<bool> passive(n, false);

  auto solve_passive = [&](Vec& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[j]) idx.push_back(j);
    z = Vec::Zero(n);
    if (idx.empty()) return;
    Mat sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const Vec zp = sub.completeOrthogonalDecomposition().solve(b);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zp(static_cast<Eigen::Index>(k));
  };

  bool converged = false;
  for (std::size_t outer = 0; outer < max_iter; ++outer) {
    const Vec w = a.transpose() * (b - a * x);
    Eigen::Index pick = -1;
    Scalar best = eps;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && w(j) > best) {
        best = w(j);
        pick = j;
      }
    }
    if (pick < 0) {
      converged = true;
      break;
    }
    passive[pick] = true;

    Vec z;
    for (std::size_t inner = 0; inner < max_iter; ++inner) {
      solve_passive(z);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[j] && z(j) <= Scalar(0)) feasible = false;
      if (feasible) break;
      Scalar alpha = Scalar(1);
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[j] && z(j) <= Scalar(0)) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && x(j) <= eps) {
          passive[j] = false;
          x(j) = Scalar(0);
        }
      }
    }
    x = z.cwiseMax(Scalar(0));
  }
  return {x, (a * x - b).norm(), converged};
}

}  // namespace omplab::detail
