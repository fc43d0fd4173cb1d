#include "omplab/channels.hpp"

#include <gtest/gtest.h>

#include "omplab/discrimination.hpp"
#include "test_support.hpp"

using namespace omplab;
using omplab::testing::Rng;

namespace {

Bloch3d bloch_after(const KrausChanneld& ch, const Bloch3d& b) {
  return density_to_bloch(apply(ch, bloch_to_density<double>(b)));
}

}  // namespace

TEST(Apply, IdentityChannel) {
  Rng rng(1);
  const auto id = KrausChanneld::identity_channel(2);
  for (int t = 0; t < 20; ++t) {
    const auto rho = omplab::testing::random_state(rng, 2);
    EXPECT_LE(max_abs(CMatrixd(apply(id, rho).matrix() - rho.matrix())), 1e-15);
  }
}

TEST(Apply, BitPhaseFlipContractsXZ) {
  const auto ch = bit_phase_flip(0.45);
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const Bloch3d b = omplab::testing::random_bloch(rng);
    const Bloch3d out = bloch_after(ch, b);
    EXPECT_NEAR(out(0), 0.1 * b(0), 1e-12);
    EXPECT_NEAR(out(1), b(1), 1e-12);
    EXPECT_NEAR(out(2), 0.1 * b(2), 1e-12);
  }
}

TEST(Apply, FullDepolarization) {
  Rng rng(3);
  const auto ch = depolarizing(1.0);
  const auto rho = omplab::testing::random_state(rng, 2);
  EXPECT_LE(max_abs(CMatrixd(apply(ch, rho).matrix() - 0.5 * identity<double>(2))), 1e-15);
}

TEST(Apply, DimensionMismatch) {
  EXPECT_THROW(apply(bit_phase_flip(0.1), DensityMatrixd::maximally_mixed(3)), InvalidArgument);
  EXPECT_THROW(apply(SuperOperatord::depolarizing(0.1, 2), DensityMatrixd::maximally_mixed(3)), InvalidArgument);
}

TEST(Apply, SuperOperatorMatchesKraus) {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index d = 2 + t % 3;
    const auto ch = omplab::testing::random_channel(rng, d);
    const auto rho = omplab::testing::random_state(rng, d);
    const auto s = SuperOperatord::from_kraus(ch);
    EXPECT_LE(max_abs(CMatrixd(apply(s, rho).matrix() - apply(ch, rho).matrix())), 1e-12);
  }
}

TEST(Depolarizing, Examples) {
  Rng rng(5);
  const auto rho = omplab::testing::random_state(rng, 2);
  EXPECT_LE(max_abs(CMatrixd(apply(depolarizing(0.0), rho).matrix() - rho.matrix())), 1e-15);
  const Bloch3d b = density_to_bloch(rho);
  EXPECT_LE((bloch_after(depolarizing(0.6), b) - 0.4 * b).norm(), 1e-12);
  EXPECT_NEAR(depolarizing_parameter(depolarizing(0.6)), 0.6, 1e-12);
}

TEST(Depolarizing, HigherDimension) {
  Rng rng(6);
  for (Eigen::Index d : {3, 4}) {
    const auto ch = depolarizing(0.35, d);
    EXPECT_EQ(ch.kraus_ops().size(), static_cast<std::size_t>(d * d));
    const auto rho = omplab::testing::random_state(rng, d);
    const CMatrixd expected = 0.65 * rho.matrix() + 0.35 * identity<double>(d) / double(d);
    EXPECT_LE(max_abs(CMatrixd(apply(ch, rho).matrix() - expected)), 1e-12);
    EXPECT_NEAR(depolarizing_parameter(ch), 0.35, 1e-12);
  }
}

TEST(Depolarizing, RejectsOutOfRange) {
  EXPECT_THROW(depolarizing(-0.1), InvalidArgument);
  EXPECT_THROW(depolarizing(1.1), InvalidArgument);
}

TEST(BitPhaseFlip, Examples) {
  Rng rng(7);
  const auto rho = omplab::testing::random_state(rng, 2);
  EXPECT_LE(max_abs(CMatrixd(apply(bit_phase_flip(0.0), rho).matrix() - rho.matrix())), 1e-15);
  EXPECT_NEAR(depolarizing_parameter(bit_phase_flip(0.45)), 0.6, 1e-12);
  EXPECT_LE(bloch_after(bit_phase_flip(0.5), Bloch3d(1, 0, 0)).norm(), 1e-15);
  EXPECT_THROW(bit_phase_flip(1.5), InvalidArgument);
  EXPECT_THROW(bit_phase_flip(-0.01), InvalidArgument);
}

TEST(DepolarizingParameter, Examples) {
  EXPECT_NEAR(depolarizing_parameter(KrausChanneld::identity_channel(2)), 0.0, 1e-15);
  EXPECT_NEAR(depolarizing_parameter(bit_phase_flip(0.45)), 0.6, 1e-12);
  // 1 - eta = (4 * 0 - 1)/3 flags the eta > 1 regime.
  EXPECT_NEAR(depolarizing_parameter(bit_phase_flip(1.0)), 4.0 / 3.0, 1e-12);
}

TEST(DepolarizingParameter, PauliMixtureMatchesBlochContraction) {
  Rng rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    double w[4], s = 0;
    for (double& v : w) s += (v = u(rng));
    std::vector<CMatrixd> ops;
    for (int i = 0; i < 4; ++i) ops.push_back(std::sqrt(w[i] / s) * pauli<double>(i));
    const KrausChanneld ch(ops);
    // Average Bloch contraction over the three axes equals 1 - eta.
    double contraction = 0;
    for (int a = 0; a < 3; ++a) contraction += bloch_after(ch, Bloch3d::Unit(a))(a) / 3.0;
    EXPECT_NEAR(depolarizing_parameter(ch), 1.0 - contraction, 1e-10);
  }
}

TEST(KrausChannel, RejectsNonTracePreserving) {
  EXPECT_THROW(KrausChanneld({CMatrixd(0.5 * identity<double>(2))}), InvalidArgument);
  EXPECT_THROW(KrausChanneld(std::vector<CMatrixd>{}), InvalidArgument);
}

TEST(SuperOperator, RejectsTransposeMap) {
  CMatrixd swap = CMatrixd::Zero(4, 4);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) swap(c + 2 * r, r + 2 * c) = 1;
  EXPECT_THROW(SuperOperatord(2, swap), InvalidArgument);
}

TEST(SuperOperator, ChoiOfIdentityIsMaximallyEntangled) {
  const auto s = SuperOperatord::from_kraus(KrausChanneld::identity_channel(2));
  Eigen::VectorXcd omega = Eigen::VectorXcd::Zero(4);
  omega(0) = 1;
  omega(3) = 1;
  EXPECT_LE(max_abs(CMatrixd(s.choi() - omega * omega.adjoint())), 1e-15);
}

TEST(SuperOperator, DepolarizingAllowsEtaUpToFourThirds) {
  EXPECT_NO_THROW(SuperOperatord::depolarizing(4.0 / 3.0, 2));
  EXPECT_THROW(SuperOperatord::depolarizing(1.5, 2), InvalidArgument);
}

TEST(Properties, ApplyPreservesDensityInvariants) {
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index d = 2 + t % 3;
    const auto ch = omplab::testing::random_channel(rng, d, 1 + t % 4);
    const auto out = apply(ch, omplab::testing::random_state(rng, d));
    EXPECT_LE(max_abs(CMatrixd(out.matrix() - out.matrix().adjoint())), 1e-12);
    EXPECT_NEAR(std::real(out.matrix().trace()), 1.0, 1e-12);
    EXPECT_GE(min_eigenvalue<double>(out.matrix()), -1e-10);
  }
}

TEST(MixWithState, Examples) {
  Rng rng(10);
  const auto ens = omplab::testing::random_qubit_ensemble(rng, 2, true);
  const auto chi = omplab::testing::random_state(rng, 2);
  const auto flip = flip_map(0.2, 0.3);

  const auto same = mix_with_state<double>(flip, 0.0, chi)(ens);
  const auto base = flip(ens);
  for (std::size_t x = 0; x < 2; ++x)
    EXPECT_LE(max_abs(CMatrixd(same.state(x).matrix() - base.state(x).matrix())), 1e-15);

  const auto constant = mix_with_state<double>(flip, 1.0, chi)(ens);
  for (std::size_t x = 0; x < 2; ++x)
    EXPECT_LE(max_abs(CMatrixd(constant.state(x).matrix() - chi.matrix())), 1e-15);

  // Differences scale by (1 - gamma) kappa_F with kappa_F = 1 - a1 - a2 = 0.5.
  const auto mixed = mix_with_state<double>(flip, 0.3, chi)(ens);
  const CMatrixd before = ens.weighted(0) - ens.weighted(1);
  const CMatrixd after = mixed.weighted(0) - mixed.weighted(1);
  EXPECT_LE(max_abs(CMatrixd(after - 0.7 * 0.5 * before)), 1e-12);

  EXPECT_THROW(mix_with_state<double>(flip, 1.2, chi), InvalidArgument);
}

TEST(FlipEnsemble, Examples) {
  Rng rng(11);
  const auto ens = omplab::testing::random_qubit_ensemble(rng, 2, true);
  const auto unchanged = flip_ensemble(ens, 0.0, 0.0);
  const auto swapped = flip_ensemble(ens, 1.0, 1.0);
  for (std::size_t x = 0; x < 2; ++x) {
    EXPECT_LE(max_abs(CMatrixd(unchanged.state(x).matrix() - ens.state(x).matrix())), 1e-15);
    EXPECT_LE(max_abs(CMatrixd(swapped.state(x).matrix() - ens.state(1 - x).matrix())), 1e-15);
  }
  const auto report = omp_check(ens, flip_ensemble(ens, 0.2, 0.3));
  EXPECT_NEAR(report.kappa, 0.5, 1e-12);
  EXPECT_TRUE(report.is_omp);

  EXPECT_THROW(flip_ensemble(omplab::testing::trine(), 0.1, 0.1), InvalidArgument);
  EXPECT_THROW(flip_ensemble(ens, 0.1, 1.1), InvalidArgument);
}

TEST(FlipEnsemble, AdditiveNoiseVariantStaysOmp) {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    const auto ens = omplab::testing::random_qubit_ensemble(rng, 2, true);
    const auto noisy = mix_with_state<double>(flip_map(0.1, 0.25), 0.4, omplab::testing::random_state(rng, 2))(ens);
    const auto report = omp_check(ens, noisy);
    EXPECT_TRUE(report.is_omp);
    EXPECT_NEAR(report.kappa, 0.6 * 0.65, 1e-12);
  }
}
