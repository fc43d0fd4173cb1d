#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "omplab/core.hpp"
#include "omplab/detail/nelder_mead.hpp"
#include "omplab/detail/nnls.hpp"
#include "omplab/ensemble.hpp"

namespace omplab {

namespace tol {
inline constexpr double kKernel = 1e-8;
inline constexpr double kZeroSlack = 1e-10;
inline constexpr double kCertificate = 1e-8;
inline constexpr double kOmp = 1e-8;
}  // namespace tol

template <typename Scalar>
struct ComplementaryState {
  Scalar r;
  DensityMatrix<Scalar> sigma;
};

/// Optimality certificate: K = q_x rho_x + r_x sigma_x, tr(M_x sigma_x) = 0, p_guess = tr K.
template <typename Scalar>
struct DiscriminationSolution {
  HermitianOperator<Scalar> K;
  std::vector<ComplementaryState<Scalar>> complementary;
  Povm<Scalar> povm;
  Scalar p_guess;
  Scalar r_mean;
};

template <typename Scalar>
struct CertificateCheck {
  bool pass;
  Scalar max_residual;
};

template <typename Scalar>
struct CertificateReport {
  CertificateCheck<Scalar> decomposition;   // K = q_x rho_x + r_x sigma_x, K >= q_x rho_x, p_guess = tr K
  CertificateCheck<Scalar> slackness;       // tr(M_x sigma_x) = 0 where r_x > 0
  CertificateCheck<Scalar> povm;            // elements PSD, sum to identity
  CertificateCheck<Scalar> congruence;      // q_x rho_x - q_y rho_y = r_y sigma_y - r_x sigma_x
  bool all_pass() const { return decomposition.pass && slackness.pass && povm.pass && congruence.pass; }
};

template <typename Scalar>
struct OmpReport {
  bool is_omp;
  Scalar kappa;
  Scalar max_residual;
};

/// sum_x q_x tr(M_x rho_x)
template <typename Scalar>
Scalar success_probability(const Povm<Scalar>& povm, const Ensemble<Scalar>& ensemble) {
  if (povm.size() != ensemble.size()) throw InvalidArgument("success_probability: POVM size does not match ensemble");
  Scalar p = 0;
  for (std::size_t x = 0; x < ensemble.size(); ++x)
    p += ensemble.prior(x) * std::real((povm[x].matrix() * ensemble.state(x).matrix()).trace());
  return p;
}

namespace detail {

// Normalized PSD part of a nearly PSD matrix; eigenvalues below zero are
// clipped after checking they sit within `floor`.
template <typename Scalar>
DensityMatrix<Scalar> psd_normalized(const CMatrix<Scalar>& m, Scalar floor) {
  const auto eig = hermitian_eigen<Scalar>(hermitian_part<Scalar>(m));
  if (eig.values.minCoeff() < -floor) throw NumericalError("complementary operator is not positive semidefinite");
  const RVector<Scalar> clipped = eig.values.cwiseMax(Scalar(0));
  CMatrix<Scalar> out = eig.vectors * clipped.template cast<Complex<Scalar>>().asDiagonal() * eig.vectors.adjoint();
  return DensityMatrix<Scalar>::normalized(out);
}

// Real coordinates of a Hermitian matrix (real and imaginary parts of every entry).
template <typename Scalar>
RVector<Scalar> real_coordinates(const CMatrix<Scalar>& m) {
  RVector<Scalar> v(2 * m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    v(2 * i) = std::real(m(i));
    v(2 * i + 1) = std::imag(m(i));
  }
  return v;
}

// Symmetric renormalization S^{-1/2} M_x S^{-1/2} with S = sum_x M_x.
template <typename Scalar>
std::vector<CMatrix<Scalar>> complete_povm(const std::vector<CMatrix<Scalar>>& elements) {
  const Eigen::Index d = elements.front().rows();
  CMatrix<Scalar> sum = CMatrix<Scalar>::Zero(d, d);
  for (const auto& e : elements) sum += e;
  const auto eig = hermitian_eigen<Scalar>(hermitian_part<Scalar>(sum));
  if (eig.values.minCoeff() <= Scalar(0)) throw NumericalError("extract_povm: POVM elements do not span the space");
  const RVector<Scalar> inv_sqrt = eig.values.cwiseSqrt().cwiseInverse();
  const CMatrix<Scalar> t = eig.vectors * inv_sqrt.template cast<Complex<Scalar>>().asDiagonal() * eig.vectors.adjoint();
  std::vector<CMatrix<Scalar>> out;
  for (const auto& e : elements) out.push_back(hermitian_part<Scalar>(t * e * t));
  return out;
}

}  // namespace detail

/// Measurement complementary to K: each M_x lives on the kernel of K - q_x rho_x,
/// weights from nonnegative least squares on sum_x M_x = I.
template <typename Scalar>
Povm<Scalar> extract_povm(const HermitianOperator<Scalar>& K, const Ensemble<Scalar>& ensemble,
                          Scalar kernel_tol = Scalar(tol::kKernel)) {
  const Eigen::Index d = ensemble.dim();
  if (K.dim() != d) throw InvalidArgument("extract_povm: dimension mismatch");
  const std::size_t n = ensemble.size();

  std::vector<HermitianEigen<Scalar>> slack;
  for (std::size_t x = 0; x < n; ++x) {
    slack.push_back(hermitian_eigen<Scalar>(hermitian_part<Scalar>(K.matrix() - ensemble.weighted(x))));
    if (slack.back().values.minCoeff() < -kernel_tol)
      throw InvalidArgument("extract_povm: K is not above q_x rho_x");
  }

  struct Candidate {
    std::size_t outcome;
    CMatrix<Scalar> projector;
  };
  std::vector<Candidate> candidates;
  for (std::size_t x = 0; x < n; ++x) {
    Eigen::Index kernel_dim = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (slack[x].values(i) <= kernel_tol) {
        candidates.push_back({x, projector<Scalar>(slack[x].vectors.col(i))});
        ++kernel_dim;
      }
    }
    // A full kernel admits any PSD element; offer the other outcomes' kernel
    // directions and their complements as extra generators.
    if (kernel_dim == d) {
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x) continue;
        for (Eigen::Index i = 0; i < d; ++i) {
          if (slack[y].values(i) > kernel_tol) continue;
          const CMatrix<Scalar> p = projector<Scalar>(slack[y].vectors.col(i));
          candidates.push_back({x, p});
          candidates.push_back({x, identity<Scalar>(d) - p});
        }
      }
    }
  }
  if (candidates.empty()) throw NumericalError("extract_povm: no kernel directions; K is not optimal");

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a(2 * d * d, static_cast<Eigen::Index>(candidates.size()));
  for (std::size_t j = 0; j < candidates.size(); ++j)
    a.col(static_cast<Eigen::Index>(j)) = detail::real_coordinates<Scalar>(candidates[j].projector);
  const RVector<Scalar> target = detail::real_coordinates<Scalar>(identity<Scalar>(d));
  const auto fit = detail::nnls<Scalar>(a, target);
  if (fit.residual > kernel_tol)
    throw NumericalError("extract_povm: completeness system infeasible (residual " + std::to_string(double(fit.residual)) +
                         "); K is degenerate or not optimal");

  std::vector<CMatrix<Scalar>> elements(n, CMatrix<Scalar>::Zero(d, d));
  for (std::size_t j = 0; j < candidates.size(); ++j)
    elements[candidates[j].outcome] += fit.x(static_cast<Eigen::Index>(j)) * candidates[j].projector;
  elements = detail::complete_povm<Scalar>(elements);
  std::vector<HermitianOperator<Scalar>> ops;
  for (auto& e : elements) ops.emplace_back(std::move(e));
  return Povm<Scalar>(std::move(ops));
}

namespace detail {

template <typename Scalar>
DiscriminationSolution<Scalar> assemble_solution(const Ensemble<Scalar>& ensemble, const CMatrix<Scalar>& k_matrix,
                                                 std::optional<Povm<Scalar>> povm = std::nullopt) {
  HermitianOperator<Scalar> K(hermitian_part<Scalar>(k_matrix));
  const Eigen::Index d = ensemble.dim();
  std::vector<ComplementaryState<Scalar>> comp;
  Scalar r_sum = 0;
  for (std::size_t x = 0; x < ensemble.size(); ++x) {
    const CMatrix<Scalar> slack = K.matrix() - ensemble.weighted(x);
    const Scalar r = std::max(Scalar(0), std::real(slack.trace()));
    if (r <= Scalar(tol::kZeroSlack)) {
      comp.push_back({r, DensityMatrix<Scalar>::maximally_mixed(d)});
    } else {
      comp.push_back({r, psd_normalized<Scalar>(slack, Scalar(tol::kKernel))});
    }
    r_sum += r;
  }
  if (!povm) povm = extract_povm(K, ensemble);
  return DiscriminationSolution<Scalar>{K, std::move(comp), std::move(*povm), K.trace(),
                                        r_sum / Scalar(ensemble.size())};
}

}  // namespace detail

/// Closed-form two-state solution (Helstrom). Zero-eigenvalue directions of
/// q1 rho1 - q2 rho2 are assigned to outcome 1.
template <typename Scalar>
DiscriminationSolution<Scalar> helstrom_two_state(const Ensemble<Scalar>& ensemble) {
  if (ensemble.size() != 2) throw InvalidArgument("helstrom_two_state: exactly two states required");
  const Eigen::Index d = ensemble.dim();
  const CMatrix<Scalar> delta = hermitian_part<Scalar>(ensemble.weighted(0) - ensemble.weighted(1));
  const auto eig = hermitian_eigen<Scalar>(delta);
  const Scalar tie = Scalar(1e-13);
  CMatrix<Scalar> m1 = CMatrix<Scalar>::Zero(d, d);
  CMatrix<Scalar> neg_part = CMatrix<Scalar>::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const CMatrix<Scalar> p = eig.vectors.col(i) * eig.vectors.col(i).adjoint();
    if (eig.values(i) >= -tie) {
      m1 += p;
    } else {
      neg_part -= eig.values(i) * p;
    }
  }
  const CMatrix<Scalar> m2 = identity<Scalar>(d) - m1;
  Povm<Scalar> povm({HermitianOperator<Scalar>(hermitian_part<Scalar>(m1)),
                     HermitianOperator<Scalar>(hermitian_part<Scalar>(m2))});
  return detail::assemble_solution<Scalar>(ensemble, ensemble.weighted(0) + neg_part, std::move(povm));
}

namespace detail {

// Qubit dual in Pauli coordinates: K = (t I + b.sigma)/2 and q_x rho_x =
// (q_x I + g_x.sigma)/2, so K >= q_x rho_x iff t >= q_x + |b - g_x|.
template <typename Scalar>
struct QubitDual {
  std::vector<Scalar> q;
  std::vector<BlochVector<Scalar>> g;

  explicit QubitDual(const Ensemble<Scalar>& e) {
    for (std::size_t x = 0; x < e.size(); ++x) {
      q.push_back(e.prior(x));
      g.push_back(e.prior(x) * density_to_bloch(e.state(x)));
    }
  }
  std::size_t size() const { return q.size(); }
  Scalar height(std::size_t x, const BlochVector<Scalar>& b) const { return q[x] + (b - g[x]).norm(); }
  Scalar envelope(const BlochVector<Scalar>& b) const {
    Scalar m = -std::numeric_limits<Scalar>::infinity();
    for (std::size_t x = 0; x < size(); ++x) m = std::max(m, height(x, b));
    return m;
  }
};

template <typename Scalar>
struct DualPoint {
  Scalar t;
  BlochVector<Scalar> b;
};

// Newton on the KKT system of min_b max_{x in S} (q_x + |b - g_x|):
//   q_x + |b - g_x| = t, sum lambda_x u_x = 0, sum lambda_x = 1,
// with u_x = (b - g_x)/|b - g_x|. Accepted only if globally feasible with
// nonnegative multipliers, which makes it the global optimum.
template <typename Scalar>
std::optional<DualPoint<Scalar>> polish_active_set(const QubitDual<Scalar>& dual, const std::vector<std::size_t>& active,
                                                   const BlochVector<Scalar>& b0) {
  using Vec = RVector<Scalar>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Scalar feas_tol = Scalar(1e-12);
  const std::size_t m = active.size();
  if (m == 0) return std::nullopt;

  auto accept = [&](const DualPoint<Scalar>& p) -> std::optional<DualPoint<Scalar>> {
    if (dual.envelope(p.b) > p.t + feas_tol) return std::nullopt;
    return p;
  };

  if (m == 1) return accept({dual.q[active[0]], dual.g[active[0]]});

  const Eigen::Index dim = 4 + static_cast<Eigen::Index>(m);
  Vec z(dim);
  z.template head<3>() = b0;
  Scalar t0 = 0;
  for (std::size_t x : active) t0 = std::max(t0, dual.height(x, b0));
  z(3) = t0;
  z.tail(m).setConstant(Scalar(1) / Scalar(m));

  Vec f(dim);
  Mat jac(dim, dim);
  bool converged = false;
  for (int iter = 0; iter < 60; ++iter) {
    const BlochVector<Scalar> b = z.template head<3>();
    const Scalar t = z(3);
    f.setZero();
    jac.setZero();
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t x = active[k];
      const BlochVector<Scalar> diff = b - dual.g[x];
      const Scalar len = diff.norm();
      if (len < Scalar(1e-14)) return std::nullopt;
      const BlochVector<Scalar> u = diff / len;
      const Scalar lambda = z(4 + k);
      const Eigen::Index row = static_cast<Eigen::Index>(k);
      f(row) = dual.q[x] + len - t;
      jac.block(row, 0, 1, 3) = u.transpose();
      jac(row, 3) = -1;
      f.segment(m, 3) += lambda * u;
      jac.block(m, 0, 3, 3) += lambda * (Eigen::Matrix<Scalar, 3, 3>::Identity() - u * u.transpose()) / len;
      jac.block(m, 4 + k, 3, 1) = u;
      f(m + 3) += lambda;
      jac(m + 3, 4 + k) = 1;
    }
    f(m + 3) -= 1;
    if (f.template lpNorm<Eigen::Infinity>() < Scalar(1e-15)) {
      converged = true;
      break;
    }
    z -= jac.completeOrthogonalDecomposition().solve(f);
  }
  if (!converged && f.template lpNorm<Eigen::Infinity>() > Scalar(1e-12)) return std::nullopt;
  if (z.tail(m).minCoeff() < -feas_tol) return std::nullopt;
  const BlochVector<Scalar> b = z.template head<3>();
  // Use the exact envelope so K - q_x rho_x is PSD up to rounding.
  return accept({dual.envelope(b), b});
}

template <typename Scalar>
void for_each_subset(std::size_t n, std::size_t max_size, std::vector<std::size_t>& current, std::size_t start,
                     const auto& visit) {
  if (!current.empty()) visit(current);
  if (current.size() == max_size) return;
  for (std::size_t i = start; i < n; ++i) {
    current.push_back(i);
    for_each_subset<Scalar>(n, max_size, current, i + 1, visit);
    current.pop_back();
  }
}

}  // namespace detail

/// Minimizes tr K subject to K >= q_x rho_x (qubits, up to 8 states).
/// Penalty method with a derivative-free simplex search, followed by an
/// active-set Newton polish of the KKT conditions.
template <typename Scalar>
DiscriminationSolution<Scalar> solve_dual(const Ensemble<Scalar>& ensemble) {
  if (ensemble.dim() != 2) throw InvalidArgument("solve_dual: qubit ensembles only");
  if (ensemble.size() > 8) throw InvalidArgument("solve_dual: at most 8 states supported");
  using Vec = RVector<Scalar>;
  const detail::QubitDual<Scalar> dual(ensemble);
  const std::size_t n = ensemble.size();

  // Pauli coordinates k = (tr K, tr(K sigma)), K = (k0 I + k.sigma)/2.
  auto k_matrix = [](const Vec& k) {
    CMatrix<Scalar> m = k(0) * pauli<Scalar>(0);
    for (int i = 0; i < 3; ++i) m += k(i + 1) * pauli<Scalar>(i + 1);
    return CMatrix<Scalar>(m * Scalar(0.5));
  };

  Scalar q_max = 0;
  for (std::size_t x = 0; x < n; ++x) q_max = std::max(q_max, ensemble.prior(x));
  Vec k = Vec::Zero(4);
  k(0) = Scalar(2) * (q_max + Scalar(0.1));  // K = (q_max + 0.1) I

  Scalar beta = 10;
  Scalar step = Scalar(0.1);
  for (int round = 0; round < 8; ++round) {
    auto objective = [&](const Vec& v) {
      const CMatrix<Scalar> km = k_matrix(v);
      Scalar penalty = 0;
      for (std::size_t x = 0; x < n; ++x) {
        const Scalar lmin = min_eigenvalue<Scalar>(CMatrix<Scalar>(km - ensemble.weighted(x)));
        if (lmin < 0) penalty += lmin * lmin;
      }
      return v(0) + beta * penalty;
    };
    k = detail::nelder_mead<Scalar>(objective, k, step, Scalar(1e-15), Scalar(1e-12), 6000).x;
    beta *= 10;
    step = std::max(step * Scalar(0.3), Scalar(1e-6));
  }

  const BlochVector<Scalar> b_nm = k.template tail<3>();
  const Scalar top = dual.envelope(b_nm);
  std::optional<detail::DualPoint<Scalar>> best;
  auto consider = [&](const std::vector<std::size_t>& active) {
    const auto p = detail::polish_active_set(dual, active, b_nm);
    if (p && (!best || p->t < best->t)) best = p;
  };
  for (Scalar gap : {Scalar(1e-7), Scalar(1e-6), Scalar(1e-5), Scalar(1e-4), Scalar(1e-3), Scalar(1e-2)}) {
    std::vector<std::size_t> active;
    for (std::size_t x = 0; x < n; ++x)
      if (dual.height(x, b_nm) >= top - gap) active.push_back(x);
    consider(active);
    if (best) break;
  }
  if (!best) {
    std::vector<std::size_t> scratch;
    detail::for_each_subset<Scalar>(n, std::min<std::size_t>(n, 4), scratch, 0, consider);
  }
  if (!best) {
    throw NumericalError("solve_dual: no optimality certificate found (penalty residual " +
                         std::to_string(double(top - k(0))) + ")");
  }

  Vec k_final(4);
  k_final << best->t, best->b;
  return detail::assemble_solution<Scalar>(ensemble, k_matrix(k_final));
}

template <typename Scalar>
CertificateReport<Scalar> verify_certificate(const Ensemble<Scalar>& ensemble, const DiscriminationSolution<Scalar>& sol,
                                             Scalar tolerance = Scalar(tol::kCertificate)) {
  const std::size_t n = ensemble.size();
  const Eigen::Index d = ensemble.dim();
  CertificateReport<Scalar> report{};
  if (sol.complementary.size() != n || sol.povm.size() != n || sol.K.dim() != d) {
    const CertificateCheck<Scalar> fail{false, std::numeric_limits<Scalar>::infinity()};
    return {fail, fail, fail, fail};
  }

  Scalar res_a = std::abs(sol.p_guess - sol.K.trace());
  for (std::size_t x = 0; x < n; ++x) {
    const auto& c = sol.complementary[x];
    const CMatrix<Scalar> rebuilt = ensemble.weighted(x) + c.r * c.sigma.matrix();
    res_a = std::max(res_a, max_abs(sol.K.matrix() - rebuilt));
    res_a = std::max(res_a, -min_eigenvalue<Scalar>(CMatrix<Scalar>(sol.K.matrix() - ensemble.weighted(x))));
    res_a = std::max(res_a, -c.r);
  }
  report.decomposition = {res_a <= tolerance, res_a};

  Scalar res_b = 0;
  for (std::size_t x = 0; x < n; ++x) {
    const auto& c = sol.complementary[x];
    if (c.r <= tolerance) continue;
    res_b = std::max(res_b, std::abs(std::real((sol.povm[x].matrix() * c.sigma.matrix()).trace())));
  }
  report.slackness = {res_b <= tolerance, res_b};

  CMatrix<Scalar> sum = CMatrix<Scalar>::Zero(d, d);
  Scalar res_c = 0;
  for (const auto& m : sol.povm.elements()) {
    sum += m.matrix();
    res_c = std::max(res_c, -min_eigenvalue<Scalar>(m.matrix()));
  }
  res_c = std::max(res_c, max_abs(sum - identity<Scalar>(d)));
  report.povm = {res_c <= Scalar(tol::kPovmCompleteness), res_c};

  Scalar res_d = 0;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      const auto& cx = sol.complementary[x];
      const auto& cy = sol.complementary[y];
      const CMatrix<Scalar> lhs = ensemble.weighted(x) - ensemble.weighted(y);
      const CMatrix<Scalar> rhs = cy.r * cy.sigma.matrix() - cx.r * cx.sigma.matrix();
      res_d = std::max(res_d, max_abs(lhs - rhs));
    }
  }
  report.congruence = {res_d <= tolerance, res_d};
  return report;
}

/// Tests q_x tau_x - q_y tau_y = kappa (q_x rho_x - q_y rho_y) for all pairs,
/// kappa fitted by least squares. Certifies the sufficient condition only.
template <typename Scalar>
OmpReport<Scalar> omp_check(const Ensemble<Scalar>& original, const Ensemble<Scalar>& transformed,
                            Scalar tolerance = Scalar(tol::kOmp)) {
  if (original.size() != transformed.size()) throw InvalidArgument("omp_check: ensembles differ in size");
  if (original.dim() != transformed.dim()) throw InvalidArgument("omp_check: ensembles differ in dimension");
  for (std::size_t x = 0; x < original.size(); ++x)
    if (std::abs(original.prior(x) - transformed.prior(x)) > Scalar(1e-12))
      throw InvalidArgument("omp_check: priors differ");

  std::vector<CMatrix<Scalar>> before, after;
  for (std::size_t x = 0; x < original.size(); ++x) {
    for (std::size_t y = x + 1; y < original.size(); ++y) {
      before.push_back(original.weighted(x) - original.weighted(y));
      after.push_back(transformed.weighted(x) - transformed.weighted(y));
    }
  }
  Scalar num = 0, den = 0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    num += std::real(before[i].cwiseProduct(after[i].conjugate()).sum());
    den += before[i].squaredNorm();
  }
  const Scalar kappa = den > Scalar(0) ? num / den : Scalar(1);
  Scalar residual = 0;
  for (std::size_t i = 0; i < before.size(); ++i) residual = std::max(residual, max_abs(after[i] - kappa * before[i]));
  const bool in_range = kappa > Scalar(0) && kappa <= Scalar(1) + tolerance;
  return {residual <= tolerance && in_range, kappa, residual};
}

/// 1/n + (1 - eta)(p_id - 1/n)
template <typename Scalar>
Scalar predicted_guess_after_twirl(Scalar p_id, int n, Scalar eta) {
  if (n < 2) throw InvalidArgument("predicted_guess_after_twirl: n must be at least 2");
  const Scalar uniform = Scalar(1) / Scalar(n);
  const Scalar slack = Scalar(1e-12);
  if (p_id < uniform - slack || p_id > Scalar(1) + slack)
    throw InvalidArgument("predicted_guess_after_twirl: p_id outside [1/n, 1]");
  const Scalar kappa = Scalar(1) - eta;
  if (kappa < -slack || kappa > Scalar(1) + slack)
    throw InvalidArgument("predicted_guess_after_twirl: 1 - eta outside [0, 1]");
  return uniform + kappa * (p_id - uniform);
}

template <typename Scalar>
Scalar min_entropy(Scalar p_guess) {
  if (!(p_guess > Scalar(0) && p_guess <= Scalar(1))) throw InvalidArgument("min_entropy: p_guess outside (0, 1]");
  return -std::log2(p_guess);
}

/// Grid search over projective measurements (I +- n.sigma)/2 plus the two
/// trivial POVMs. A lower bound on the guessing probability.
template <typename Scalar>
Scalar brute_force_two_state(const Ensemble<Scalar>& ensemble, int grid) {
  if (ensemble.size() != 2 || ensemble.dim() != 2)
    throw InvalidArgument("brute_force_two_state: two qubit states required");
  if (grid < 2) throw InvalidArgument("brute_force_two_state: grid must be at least 2");
  const Scalar q1 = ensemble.prior(0), q2 = ensemble.prior(1);
  const BlochVector<Scalar> r1 = density_to_bloch(ensemble.state(0));
  const BlochVector<Scalar> r2 = density_to_bloch(ensemble.state(1));
  Scalar best = std::max(q1, q2);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  for (int i = 0; i < grid; ++i) {
    const Scalar theta = pi * Scalar(i) / Scalar(grid - 1);
    for (int j = 0; j < grid; ++j) {
      const Scalar phi = Scalar(2) * pi * Scalar(j) / Scalar(grid);
      const BlochVector<Scalar> dir(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
      const Scalar v = q1 * (Scalar(1) + dir.dot(r1)) / Scalar(2) + q2 * (Scalar(1) - dir.dot(r2)) / Scalar(2);
      best = std::max(best, v);
    }
  }
  return best;
}

using DiscriminationSolutiond = DiscriminationSolution<double>;

}  // namespace omplab
