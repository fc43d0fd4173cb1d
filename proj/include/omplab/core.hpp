#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace omplab {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using BlochVector = Eigen::Matrix<Scalar, 3, 1>;

// Input violates a documented precondition or type invariant.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative routine failed to reach its target accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace tol {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTrace = 1e-12;
inline constexpr double kPsdFloor = -1e-10;
inline constexpr double kPovmCompleteness = 1e-10;
inline constexpr double kBlochNorm = 1e-10;
}  // namespace tol

template <typename Scalar>
CMatrix<Scalar> identity(Eigen::Index dim) {
  return CMatrix<Scalar>::Identity(dim, dim);
}

/// Pauli matrix by index: 0 = I, 1 = X, 2 = Y, 3 = Z.
template <typename Scalar>
CMatrix<Scalar> pauli(int index) {
  using C = Complex<Scalar>;
  CMatrix<Scalar> m(2, 2);
  switch (index) {
    case 0: m << C(1), C(0), C(0), C(1); break;
    case 1: m << C(0), C(1), C(1), C(0); break;
    case 2: m << C(0), C(0, -1), C(0, 1), C(0); break;
    case 3: m << C(1), C(0), C(0), C(-1); break;
    default: throw InvalidArgument("pauli index must be in 0..3");
  }
  return m;
}

template <typename Derived>
auto max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

template <typename Scalar>
bool is_hermitian(const CMatrix<Scalar>& m, Scalar tolerance = Scalar(tol::kHermitian)) {
  if (m.rows() != m.cols()) return false;
  return m.size() == 0 || max_abs(m - m.adjoint()) <= tolerance;
}

template <typename Scalar>
CMatrix<Scalar> hermitian_part(const CMatrix<Scalar>& m) {
  return (m + m.adjoint()) * Scalar(0.5);
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
template <typename Scalar>
struct HermitianEigen {
  RVector<Scalar> values;
  CMatrix<Scalar> vectors;  // columns are eigenvectors
};

// 2x2 uses the closed-form quadratic; larger sizes go through Eigen's
// self-adjoint solver.
template <typename Scalar>
HermitianEigen<Scalar> hermitian_eigen(const CMatrix<Scalar>& m) {
  using C = Complex<Scalar>;
  if (m.rows() != m.cols()) throw InvalidArgument("hermitian_eigen: matrix not square");
  HermitianEigen<Scalar> out;
  if (m.rows() == 2) {
    const Scalar a = std::real(m(0, 0));
    const Scalar d = std::real(m(1, 1));
    const C c = Scalar(0.5) * (m(0, 1) + std::conj(m(1, 0)));
    const Scalar mean = Scalar(0.5) * (a + d);
    const Scalar half_gap = std::hypot(Scalar(0.5) * (a - d), std::abs(c));
    out.values.resize(2);
    out.values << mean - half_gap, mean + half_gap;
    out.vectors.resize(2, 2);
    if (half_gap == Scalar(0)) {
      out.vectors << C(1), C(0), C(0), C(1);
      return out;
    }
    // Traceless part h.sigma with h = (Re c, -Im c, (a - d)/2); the upper
    // eigenvector is the Bloch state along h, the lower one its orthogonal complement.
    const Scalar nz = Scalar(0.5) * (a - d) / half_gap;
    const C nxy = std::conj(c) / half_gap;  // nx + i ny
    CVector<Scalar> up(2);
    if (nz >= Scalar(0)) {
      up << C(Scalar(1) + nz), nxy;
    } else {
      up << std::conj(nxy), C(Scalar(1) - nz);
    }
    up /= up.norm();
    out.vectors.col(1) = up;
    out.vectors(0, 0) = -std::conj(up(1));
    out.vectors(1, 0) = std::conj(up(0));
    return out;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> solver(m);
  if (solver.info() != Eigen::Success) throw NumericalError("hermitian_eigen: solver failed");
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  return out;
}

template <typename Scalar>
Scalar min_eigenvalue(const CMatrix<Scalar>& m) {
  return hermitian_eigen(m).values.minCoeff();
}

/// Hermitian matrix with no trace or positivity constraint.
template <typename Scalar>
class HermitianOperator {
 public:
  explicit HermitianOperator(CMatrix<Scalar> m) : m_(std::move(m)) {
    if (m_.rows() == 0 || !is_hermitian(m_))
      throw InvalidArgument("HermitianOperator: matrix is not Hermitian");
  }

  static HermitianOperator zero(Eigen::Index dim) { return HermitianOperator(CMatrix<Scalar>::Zero(dim, dim)); }
  static HermitianOperator identity(Eigen::Index dim) { return HermitianOperator(omplab::identity<Scalar>(dim)); }

  const CMatrix<Scalar>& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  Scalar trace() const { return std::real(m_.trace()); }

  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
    return HermitianOperator(a.m_ + b.m_);
  }
  friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
    return HermitianOperator(a.m_ - b.m_);
  }
  friend HermitianOperator operator*(Scalar s, const HermitianOperator& a) { return HermitianOperator(s * a.m_); }

 private:
  CMatrix<Scalar> m_;
};

/// Positive semidefinite, unit-trace operator.
template <typename Scalar>
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix<Scalar> m) : m_(std::move(m)) {
    if (m_.rows() == 0 || !is_hermitian(m_)) throw InvalidArgument("DensityMatrix: matrix is not Hermitian");
    if (std::abs(std::real(m_.trace()) - Scalar(1)) > Scalar(tol::kTrace))
      throw InvalidArgument("DensityMatrix: trace is not 1");
    if (min_eigenvalue(m_) < Scalar(tol::kPsdFloor))
      throw InvalidArgument("DensityMatrix: matrix is not positive semidefinite");
  }

  static DensityMatrix maximally_mixed(Eigen::Index dim) {
    return DensityMatrix(omplab::identity<Scalar>(dim) / Scalar(dim));
  }

  // Symmetrizes and renormalizes before validating; for results of
  // arithmetic that carry rounding noise.
  static DensityMatrix normalized(const CMatrix<Scalar>& m) {
    CMatrix<Scalar> h = hermitian_part(m);
    return DensityMatrix(h / std::real(h.trace()));
  }

  const CMatrix<Scalar>& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  HermitianOperator<Scalar> as_operator() const { return HermitianOperator<Scalar>(m_); }

 private:
  CMatrix<Scalar> m_;
};

template <typename Scalar>
DensityMatrix<Scalar> bloch_to_density(const BlochVector<Scalar>& b) {
  if (b.norm() > Scalar(1) + Scalar(tol::kBlochNorm))
    throw InvalidArgument("bloch_to_density: Bloch vector longer than 1");
  CMatrix<Scalar> m = pauli<Scalar>(0);
  for (int i = 0; i < 3; ++i) m += b(i) * pauli<Scalar>(i + 1);
  return DensityMatrix<Scalar>(m * Scalar(0.5));
}

// Bloch coordinates of any 2x2 Hermitian operator, tr(A sigma_i).
template <typename Scalar>
BlochVector<Scalar> bloch_components(const CMatrix<Scalar>& m) {
  if (m.rows() != 2 || m.cols() != 2) throw InvalidArgument("Bloch coordinates need a 2x2 operator");
  BlochVector<Scalar> b;
  for (int i = 0; i < 3; ++i) b(i) = std::real((m * pauli<Scalar>(i + 1)).trace());
  return b;
}

template <typename Scalar>
BlochVector<Scalar> density_to_bloch(const DensityMatrix<Scalar>& rho) {
  return bloch_components(rho.matrix());
}

template <typename Scalar>
Scalar trace_norm(const HermitianOperator<Scalar>& a) {
  return hermitian_eigen(a.matrix()).values.cwiseAbs().sum();
}

template <typename Scalar>
Scalar trace_distance(const DensityMatrix<Scalar>& a, const DensityMatrix<Scalar>& b) {
  return Scalar(0.5) * trace_norm(HermitianOperator<Scalar>(a.matrix() - b.matrix()));
}

template <typename Scalar>
bool is_psd(const CMatrix<Scalar>& m, Scalar floor = Scalar(tol::kPsdFloor)) {
  return min_eigenvalue(m) >= floor;
}

template <typename Scalar>
Scalar born_probability(const DensityMatrix<Scalar>& rho, const HermitianOperator<Scalar>& effect) {
  if (effect.dim() != rho.dim()) throw InvalidArgument("born_probability: dimension mismatch");
  if (!is_psd(effect.matrix())) throw InvalidArgument("born_probability: effect is not positive semidefinite");
  const Scalar p = std::real((effect.matrix() * rho.matrix()).trace());
  return std::clamp(p, Scalar(0), Scalar(1));
}

/// Projector |v><v| for a (not necessarily normalized) vector.
template <typename Scalar>
CMatrix<Scalar> projector(const CVector<Scalar>& v) {
  const CVector<Scalar> u = v / v.norm();
  return u * u.adjoint();
}

/// Projector onto the +1 eigenstate of n.sigma, i.e. (I + n.sigma)/2 for unit n.
template <typename Scalar>
CMatrix<Scalar> bloch_projector(const BlochVector<Scalar>& direction) {
  return bloch_to_density<Scalar>(direction.normalized()).matrix();
}

/// Positive operator-valued measure.
template <typename Scalar>
class Povm {
 public:
  explicit Povm(std::vector<HermitianOperator<Scalar>> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw InvalidArgument("Povm: no elements");
    const Eigen::Index d = elements_.front().dim();
    CMatrix<Scalar> sum = CMatrix<Scalar>::Zero(d, d);
    for (const auto& e : elements_) {
      if (e.dim() != d) throw InvalidArgument("Povm: element dimensions differ");
      if (!is_psd(e.matrix())) throw InvalidArgument("Povm: element is not positive semidefinite");
      sum += e.matrix();
    }
    if (max_abs(sum - identity<Scalar>(d)) > Scalar(tol::kPovmCompleteness))
      throw InvalidArgument("Povm: elements do not sum to identity");
  }

  const std::vector<HermitianOperator<Scalar>>& elements() const { return elements_; }
  const HermitianOperator<Scalar>& operator[](std::size_t i) const { return elements_[i]; }
  std::size_t size() const { return elements_.size(); }
  Eigen::Index dim() const { return elements_.front().dim(); }

 private:
  std::vector<HermitianOperator<Scalar>> elements_;
};

// exp(-i H) for Hermitian H.
template <typename Scalar>
CMatrix<Scalar> unitary_from_generator(const CMatrix<Scalar>& generator) {
  const auto eig = hermitian_eigen(generator);
  CVector<Scalar> phases(eig.values.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::polar(Scalar(1), -eig.values(i));
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

template <typename Scalar>
bool is_unitary(const CMatrix<Scalar>& u, Scalar tolerance) {
  return u.rows() == u.cols() && max_abs(u.adjoint() * u - identity<Scalar>(u.rows())) <= tolerance;
}

using DensityMatrixd = DensityMatrix<double>;
using HermitianOperatord = HermitianOperator<double>;
using Povmd = Povm<double>;
using Bloch3d = BlochVector<double>;
using CMatrixd = CMatrix<double>;

}  // namespace omplab
