#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <utility>
#include <variant>
#include <vector>

#include "omplab/core.hpp"
#include "omplab/ensemble.hpp"

namespace omplab {

namespace tol {
inline constexpr double kTracePreserving = 1e-10;
inline constexpr double kChoiFloor = -1e-8;
}  // namespace tol

template <typename Scalar>
CMatrix<Scalar> kron(const CMatrix<Scalar>& a, const CMatrix<Scalar>& b) {
  CMatrix<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Column-stacking vectorization: vec(A X B) = (B^T kron A) vec(X).
template <typename Scalar>
CVector<Scalar> vec(const CMatrix<Scalar>& m) {
  return Eigen::Map<const CVector<Scalar>>(m.data(), m.size());
}

template <typename Scalar>
CMatrix<Scalar> unvec(const CVector<Scalar>& v, Eigen::Index dim) {
  return Eigen::Map<const CMatrix<Scalar>>(v.data(), dim, dim);
}

/// CPTP map given by Kraus operators, rho -> sum_k A_k rho A_k^dagger.
template <typename Scalar>
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<CMatrix<Scalar>> ops) : ops_(std::move(ops)) {
    if (ops_.empty()) throw InvalidArgument("KrausChannel: at least one Kraus operator required");
    const Eigen::Index d = ops_.front().rows();
    CMatrix<Scalar> sum = CMatrix<Scalar>::Zero(d, d);
    for (const auto& a : ops_) {
      if (a.rows() != d || a.cols() != d) throw InvalidArgument("KrausChannel: Kraus operators must be dim x dim");
      sum += a.adjoint() * a;
    }
    if (max_abs(sum - identity<Scalar>(d)) > Scalar(tol::kTracePreserving))
      throw InvalidArgument("KrausChannel: not trace preserving");
  }

  static KrausChannel identity_channel(Eigen::Index dim) { return KrausChannel({omplab::identity<Scalar>(dim)}); }

  Eigen::Index dim() const { return ops_.front().rows(); }
  const std::vector<CMatrix<Scalar>>& kraus_ops() const { return ops_; }

 private:
  std::vector<CMatrix<Scalar>> ops_;
};

/// Linear map on column-stacked operators, d^2 x d^2.
template <typename Scalar>
class SuperOperator {
 public:
  SuperOperator(Eigen::Index dim, CMatrix<Scalar> matrix) : dim_(dim), m_(std::move(matrix)) {
    if (m_.rows() != dim * dim || m_.cols() != dim * dim)
      throw InvalidArgument("SuperOperator: matrix must be d^2 x d^2");
    check_invariants();
  }

  static SuperOperator from_kraus(const KrausChannel<Scalar>& channel) {
    const Eigen::Index d = channel.dim();
    CMatrix<Scalar> m = CMatrix<Scalar>::Zero(d * d, d * d);
    for (const auto& a : channel.kraus_ops()) m += kron<Scalar>(a.conjugate(), a);
    return SuperOperator(d, std::move(m));
  }

  static SuperOperator from_unitary(const CMatrix<Scalar>& u) {
    return SuperOperator(u.rows(), kron<Scalar>(u.conjugate(), u));
  }

  /// rho -> (1 - eta) rho + eta tr(rho) I/d
  static SuperOperator depolarizing(Scalar eta, Eigen::Index dim) {
    const CVector<Scalar> id = vec<Scalar>(omplab::identity<Scalar>(dim));
    CMatrix<Scalar> m = (Scalar(1) - eta) * omplab::identity<Scalar>(dim * dim);
    m += (eta / Scalar(dim)) * (id * id.transpose());
    return SuperOperator(dim, std::move(m));
  }

  Eigen::Index dim() const { return dim_; }
  const CMatrix<Scalar>& matrix() const { return m_; }

  CMatrix<Scalar> act(const CMatrix<Scalar>& x) const { return unvec<Scalar>(m_ * vec<Scalar>(x), dim_); }

  /// Choi matrix sum_ij |i><j| kron N(|i><j|).
  CMatrix<Scalar> choi() const {
    CMatrix<Scalar> j(dim_ * dim_, dim_ * dim_);
    for (Eigen::Index r = 0; r < dim_; ++r)
      for (Eigen::Index c = 0; c < dim_; ++c)
        j.block(r * dim_, c * dim_, dim_, dim_) = unvec<Scalar>(m_.col(r + c * dim_), dim_);
    return j;
  }

  friend SuperOperator operator*(const SuperOperator& a, const SuperOperator& b) {
    return SuperOperator(a.dim_, a.m_ * b.m_);
  }

 private:
  void check_invariants() const {
    const Scalar tp_tol(tol::kTracePreserving);
    for (Eigen::Index r = 0; r < dim_; ++r) {
      for (Eigen::Index c = 0; c < dim_; ++c) {
        CMatrix<Scalar> e = CMatrix<Scalar>::Zero(dim_, dim_);
        e(r, c) = Scalar(1);
        const CMatrix<Scalar> out = act(e);
        const Complex<Scalar> expected = r == c ? Scalar(1) : Scalar(0);
        if (std::abs(out.trace() - expected) > tp_tol) throw InvalidArgument("SuperOperator: not trace preserving");
        // N(E_rc)^dagger must equal N(E_cr) for a Hermiticity-preserving map.
        CMatrix<Scalar> et = CMatrix<Scalar>::Zero(dim_, dim_);
        et(c, r) = Scalar(1);
        if (max_abs(out.adjoint() - act(et)) > tp_tol)
          throw InvalidArgument("SuperOperator: does not preserve Hermiticity");
      }
    }
    if (min_eigenvalue<Scalar>(hermitian_part<Scalar>(choi())) < Scalar(tol::kChoiFloor))
      throw InvalidArgument("SuperOperator: not completely positive");
  }

  Eigen::Index dim_;
  CMatrix<Scalar> m_;
};

template <typename Scalar>
DensityMatrix<Scalar> apply(const KrausChannel<Scalar>& channel, const DensityMatrix<Scalar>& rho) {
  if (channel.dim() != rho.dim()) throw InvalidArgument("apply: dimension mismatch");
  CMatrix<Scalar> out = CMatrix<Scalar>::Zero(rho.dim(), rho.dim());
  for (const auto& a : channel.kraus_ops()) out += a * rho.matrix() * a.adjoint();
  return DensityMatrix<Scalar>::normalized(out);
}

template <typename Scalar>
DensityMatrix<Scalar> apply(const SuperOperator<Scalar>& channel, const DensityMatrix<Scalar>& rho) {
  if (channel.dim() != rho.dim()) throw InvalidArgument("apply: dimension mismatch");
  return DensityMatrix<Scalar>::normalized(channel.act(rho.matrix()));
}

template <typename Scalar, typename Channel>
Ensemble<Scalar> apply(const Channel& channel, const Ensemble<Scalar>& ensemble) {
  std::vector<DensityMatrix<Scalar>> states;
  for (const auto& m : ensemble.members()) states.push_back(apply(channel, m.state));
  return ensemble.with_states(states);
}

/// (1 - mu) rho + mu I/d. Pauli mixture for qubits, Weyl-Heisenberg mixture otherwise.
template <typename Scalar>
KrausChannel<Scalar> depolarizing(Scalar mu, Eigen::Index dim = 2) {
  if (!(mu >= Scalar(0) && mu <= Scalar(1))) throw InvalidArgument("depolarizing: mu must lie in [0, 1]");
  if (dim < 2) throw InvalidArgument("depolarizing: dimension must be at least 2");
  const Scalar d2 = Scalar(dim * dim);
  const Scalar w_id = Scalar(1) - mu + mu / d2;
  const Scalar w = mu / d2;
  std::vector<CMatrix<Scalar>> ops;
  if (dim == 2) {
    ops.push_back(std::sqrt(w_id) * pauli<Scalar>(0));
    for (int i = 1; i <= 3; ++i) ops.push_back(std::sqrt(w) * pauli<Scalar>(i));
    return KrausChannel<Scalar>(std::move(ops));
  }
  CMatrix<Scalar> shift = CMatrix<Scalar>::Zero(dim, dim);
  CMatrix<Scalar> clock = CMatrix<Scalar>::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    shift((k + 1) % dim, k) = Scalar(1);
    clock(k, k) = std::polar(Scalar(1), Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(k) / Scalar(dim));
  }
  CMatrix<Scalar> xa = omplab::identity<Scalar>(dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    CMatrix<Scalar> weyl = xa;
    for (Eigen::Index b = 0; b < dim; ++b) {
      ops.push_back(std::sqrt(a == 0 && b == 0 ? w_id : w) * weyl);
      weyl = weyl * clock;
    }
    xa = shift * xa;
  }
  return KrausChannel<Scalar>(std::move(ops));
}

/// rho -> (1 - p) rho + p Y rho Y
template <typename Scalar>
KrausChannel<Scalar> bit_phase_flip(Scalar p) {
  if (!(p >= Scalar(0) && p <= Scalar(1))) throw InvalidArgument("bit_phase_flip: p must lie in [0, 1]");
  return KrausChannel<Scalar>({std::sqrt(Scalar(1) - p) * pauli<Scalar>(0), std::sqrt(p) * pauli<Scalar>(2)});
}

/// Strength of the depolarizing map obtained by twirling the channel:
/// 1 - eta = (sum_k |tr A_k|^2 - 1) / (d^2 - 1).
template <typename Scalar>
Scalar depolarizing_parameter(const KrausChannel<Scalar>& channel) {
  Scalar s = 0;
  for (const auto& a : channel.kraus_ops()) s += std::norm(a.trace());
  const Scalar d2 = Scalar(channel.dim() * channel.dim());
  return Scalar(1) - (s - Scalar(1)) / (d2 - Scalar(1));
}

// Maps that act on a whole ensemble at once. The flip map is indexed by the
// ensemble position, so it is not a single linear map on states.
template <typename Scalar>
using EnsembleMap = std::function<Ensemble<Scalar>(const Ensemble<Scalar>&)>;

template <typename Scalar>
EnsembleMap<Scalar> channel_map(KrausChannel<Scalar> channel) {
  return [channel = std::move(channel)](const Ensemble<Scalar>& e) { return apply(channel, e); };
}

/// Each output state becomes (1 - gamma) map(S)_x + gamma chi.
template <typename Scalar>
EnsembleMap<Scalar> mix_with_state(EnsembleMap<Scalar> action, Scalar gamma, DensityMatrix<Scalar> chi) {
  if (!(gamma >= Scalar(0) && gamma <= Scalar(1))) throw InvalidArgument("mix_with_state: gamma must lie in [0, 1]");
  return [action = std::move(action), gamma, chi = std::move(chi)](const Ensemble<Scalar>& e) {
    const Ensemble<Scalar> mapped = action(e);
    if (mapped.dim() != chi.dim()) throw InvalidArgument("mix_with_state: dimension mismatch");
    std::vector<DensityMatrix<Scalar>> states;
    for (const auto& m : mapped.members())
      states.push_back(DensityMatrix<Scalar>::normalized((Scalar(1) - gamma) * m.state.matrix() + gamma * chi.matrix()));
    return mapped.with_states(states);
  };
}

/// Two-state flip: rho_x -> (1 - alpha_x) rho_x + alpha_x rho_{x xor 1}.
template <typename Scalar>
Ensemble<Scalar> flip_ensemble(const Ensemble<Scalar>& ensemble, Scalar alpha1, Scalar alpha2) {
  if (ensemble.size() != 2) throw InvalidArgument("flip_ensemble: exactly two states required");
  for (Scalar a : {alpha1, alpha2})
    if (!(a >= Scalar(0) && a <= Scalar(1))) throw InvalidArgument("flip_ensemble: alpha must lie in [0, 1]");
  const CMatrix<Scalar>& r1 = ensemble.state(0).matrix();
  const CMatrix<Scalar>& r2 = ensemble.state(1).matrix();
  return ensemble.with_states({DensityMatrix<Scalar>::normalized((Scalar(1) - alpha1) * r1 + alpha1 * r2),
                               DensityMatrix<Scalar>::normalized((Scalar(1) - alpha2) * r2 + alpha2 * r1)});
}

template <typename Scalar>
EnsembleMap<Scalar> flip_map(Scalar alpha1, Scalar alpha2) {
  return [alpha1, alpha2](const Ensemble<Scalar>& e) { return flip_ensemble(e, alpha1, alpha2); };
}

using KrausChanneld = KrausChannel<double>;
using SuperOperatord = SuperOperator<double>;

}  // namespace omplab
