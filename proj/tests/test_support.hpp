#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "omplab/channels.hpp"
#include "omplab/core.hpp"
#include "omplab/ensemble.hpp"

namespace omplab::testing {

using Rng = std::mt19937_64;

inline CMatrixd ginibre(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g;
  CMatrixd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = {g(rng), g(rng)};
  return m;
}

inline Bloch3d random_bloch(Rng& rng, double max_norm = 1.0) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, max_norm);
  Bloch3d d(g(rng), g(rng), g(rng));
  return u(rng) * d.normalized();
}

inline Bloch3d random_unit_bloch(Rng& rng) {
  std::normal_distribution<double> g;
  return Bloch3d(g(rng), g(rng), g(rng)).normalized();
}

inline DensityMatrixd random_state(Rng& rng, Eigen::Index dim) {
  const CMatrixd g = ginibre(rng, dim, dim);
  return DensityMatrixd::normalized(g * g.adjoint());
}

inline CMatrixd random_hermitian(Rng& rng, Eigen::Index dim) { return hermitian_part<double>(ginibre(rng, dim, dim)); }

inline CMatrixd random_unitary(Rng& rng, Eigen::Index dim) {
  Eigen::HouseholderQR<CMatrixd> qr(ginibre(rng, dim, dim));
  return qr.householderQ() * CMatrixd::Identity(dim, dim);
}

// Kraus operators G_k S^{-1/2} with S = sum G_k^dagger G_k.
inline KrausChanneld random_channel(Rng& rng, Eigen::Index dim, int n_kraus = 3) {
  std::vector<CMatrixd> g;
  CMatrixd s = CMatrixd::Zero(dim, dim);
  for (int k = 0; k < n_kraus; ++k) {
    g.push_back(ginibre(rng, dim, dim));
    s += g.back().adjoint() * g.back();
  }
  const auto eig = hermitian_eigen<double>(hermitian_part<double>(s));
  const CMatrixd inv_sqrt =
      eig.vectors * eig.values.cwiseSqrt().cwiseInverse().cast<std::complex<double>>().asDiagonal() *
      eig.vectors.adjoint();
  for (auto& a : g) a = a * inv_sqrt;
  return KrausChanneld(std::move(g));
}

inline KrausChanneld random_unitary_channel(Rng& rng, Eigen::Index dim) {
  return KrausChanneld({random_unitary(rng, dim)});
}

inline Ensembled random_qubit_ensemble(Rng& rng, std::size_t n, bool equal_priors) {
  std::vector<EnsembleMember<double>> members;
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(n);
  double total = 0;
  for (auto& v : w) total += (v = equal_priors ? 1.0 : u(rng));
  for (std::size_t x = 0; x < n; ++x) members.push_back({w[x] / total, bloch_to_density<double>(random_bloch(rng))});
  // Absorb rounding so priors sum to 1 within 1e-12.
  double s = 0;
  for (std::size_t x = 0; x + 1 < n; ++x) s += members[x].prior;
  members.back().prior = 1.0 - s;
  return Ensembled(std::move(members));
}

inline Ensembled reference_pair() {
  return Ensembled({{0.5, bloch_to_density<double>(Bloch3d(1.0, 1.0, 0.0) / std::sqrt(2.0))},
                    {0.5, bloch_to_density<double>(Bloch3d(-3.0, 3.0 * std::sqrt(3.0), 0.0) / 8.0)}});
}

inline Ensembled trine() {
  std::vector<DensityMatrixd> states;
  for (int k = 0; k < 3; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 3.0;
    states.push_back(bloch_to_density<double>(Bloch3d(std::cos(a), std::sin(a), 0.0)));
  }
  return Ensembled::equal_priors(states);
}

}  // namespace omplab::testing
