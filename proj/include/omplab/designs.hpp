#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "omplab/channels.hpp"
#include "omplab/core.hpp"

namespace omplab {

/// Finite set of unitaries used for channel twirling.
template <typename Scalar>
class UnitaryDesign {
 public:
  UnitaryDesign(std::string name, std::vector<CMatrix<Scalar>> unitaries)
      : name_(std::move(name)), unitaries_(std::move(unitaries)) {
    if (unitaries_.empty()) throw InvalidArgument("UnitaryDesign: no elements");
    for (const auto& u : unitaries_) {
      if (u.rows() != unitaries_.front().rows()) throw InvalidArgument("UnitaryDesign: element dimensions differ");
      if (!is_unitary(u, Scalar(1e-10))) throw InvalidArgument("UnitaryDesign: element is not unitary");
    }
  }

  const std::string& name() const { return name_; }
  Eigen::Index dim() const { return unitaries_.front().rows(); }
  std::size_t size() const { return unitaries_.size(); }
  const std::vector<CMatrix<Scalar>>& unitaries() const { return unitaries_; }
  const CMatrix<Scalar>& operator[](std::size_t i) const { return unitaries_[i]; }

 private:
  std::string name_;
  std::vector<CMatrix<Scalar>> unitaries_;
};

/// Twirled map (1/k) sum_i U_i^dagger N(U_i rho U_i^dagger) U_i, summed in design order.
template <typename Scalar>
SuperOperator<Scalar> twirl(const KrausChannel<Scalar>& channel, const UnitaryDesign<Scalar>& design) {
  if (channel.dim() != design.dim()) throw InvalidArgument("twirl: dimension mismatch");
  const Eigen::Index d = channel.dim();
  const CMatrix<Scalar> s_channel = SuperOperator<Scalar>::from_kraus(channel).matrix();
  CMatrix<Scalar> sum = CMatrix<Scalar>::Zero(d * d, d * d);
  for (const auto& u : design.unitaries()) {
    const CMatrix<Scalar> s_u = kron<Scalar>(u.conjugate(), u);
    sum += s_u.adjoint() * s_channel * s_u;
  }
  return SuperOperator<Scalar>(d, sum / Scalar(design.size()));
}

/// Twirl-conjugated channel for a single design element, U^dagger N(U . U^dagger) U.
template <typename Scalar>
SuperOperator<Scalar> conjugated(const KrausChannel<Scalar>& channel, const CMatrix<Scalar>& u) {
  std::vector<CMatrix<Scalar>> ops;
  for (const auto& a : channel.kraus_ops()) ops.push_back(u.adjoint() * a * u);
  return SuperOperator<Scalar>::from_kraus(KrausChannel<Scalar>(std::move(ops)));
}

/// Single-qubit Clifford group, 24 elements listed as products of I, X, Y, Z, H, S.
template <typename Scalar>
UnitaryDesign<Scalar> clifford_design() {
  using C = Complex<Scalar>;
  const CMatrix<Scalar> I = pauli<Scalar>(0), X = pauli<Scalar>(1), Y = pauli<Scalar>(2), Z = pauli<Scalar>(3);
  const CMatrix<Scalar> H = (X + Z) / std::sqrt(Scalar(2));
  CMatrix<Scalar> S(2, 2);
  S << C(1), C(0), C(0), C(0, 1);
  const CMatrix<Scalar> HS = H * S, SH = S * H, HSH = H * S * H;
  return UnitaryDesign<Scalar>(
      "clifford24", {I,      X,      Y,      Z,      H,      S,      X * H,   X * S,   Y * H,   Y * S,   Z * H,   Z * S,
                     HS,     SH,     X * HS, X * SH, Y * HS, Y * SH, Z * HS,  Z * SH,  HSH,     X * HSH, Y * HSH, Z * HSH});
}

namespace detail {

template <typename Scalar>
CMatrix<Scalar> rotation(Scalar angle, const BlochVector<Scalar>& axis) {
  CMatrix<Scalar> gen = CMatrix<Scalar>::Zero(2, 2);
  for (int i = 0; i < 3; ++i) gen += angle * axis(i) * pauli<Scalar>(i + 1);
  return unitary_from_generator<Scalar>(gen);
}

template <typename Scalar>
UnitaryDesign<Scalar> tetrahedral_from(std::string name, Scalar angle, const std::vector<BlochVector<Scalar>>& diagonals) {
  std::vector<CMatrix<Scalar>> out{pauli<Scalar>(0)};
  for (int i = 0; i < 3; ++i)
    out.push_back(rotation<Scalar>(std::numbers::pi_v<Scalar> / Scalar(2), BlochVector<Scalar>::Unit(i)));
  for (const auto& r : diagonals) out.push_back(rotation<Scalar>(angle, r));
  for (const auto& r : diagonals) out.push_back(rotation<Scalar>(Scalar(2) * angle, r));
  return UnitaryDesign<Scalar>(std::move(name), std::move(out));
}

}  // namespace detail

/// 12-element tetrahedral rotation group: I, exp(-i pi e.sigma/2) for the three
/// axes, and exp(-i a r.sigma), exp(-i 2a r.sigma) for the four unnormalized
/// body diagonals r with a = pi/sqrt(27), i.e. rotations by 2pi/3 and 4pi/3.
template <typename Scalar>
UnitaryDesign<Scalar> tetrahedral_design() {
  using B = BlochVector<Scalar>;
  return detail::tetrahedral_from<Scalar>("tetra12", std::numbers::pi_v<Scalar> / std::sqrt(Scalar(27)),
                                          {B(1, 1, 1), B(1, -1, -1), B(-1, -1, 1), B(-1, 1, -1)});
}

/// The same construction with angle pi/27 and the fourth diagonal equal to the
/// third. Kept to show that this set is not a 2-design.
template <typename Scalar>
UnitaryDesign<Scalar> tetrahedral_design_pi_over_27() {
  using B = BlochVector<Scalar>;
  return detail::tetrahedral_from<Scalar>("tetra12-pi27", std::numbers::pi_v<Scalar> / Scalar(27),
                                          {B(1, 1, 1), B(1, -1, -1), B(-1, -1, 1), B(-1, -1, 1)});
}

template <typename Scalar>
struct TwoDesignReport {
  std::vector<Scalar> deviations;  // per probe, max entrywise superoperator deviation
  Scalar max_deviation = 0;
  bool pass = false;
};

// Twirls every probe and compares against the depolarizing map with the
// formula's eta. Passes iff every deviation is <= threshold.
template <typename Scalar>
TwoDesignReport<Scalar> verify_two_design(const UnitaryDesign<Scalar>& design,
                                          const std::vector<KrausChannel<Scalar>>& probes,
                                          Scalar threshold = Scalar(1e-8)) {
  if (probes.empty()) throw InvalidArgument("verify_two_design: no probe channels");
  TwoDesignReport<Scalar> report;
  for (const auto& probe : probes) {
    const auto twirled = twirl(probe, design);
    const auto target = SuperOperator<Scalar>::depolarizing(depolarizing_parameter(probe), probe.dim());
    report.deviations.push_back(max_abs(twirled.matrix() - target.matrix()));
  }
  report.max_deviation = *std::max_element(report.deviations.begin(), report.deviations.end());
  report.pass = report.max_deviation <= threshold;
  return report;
}

using UnitaryDesignd = UnitaryDesign<double>;

}  // namespace omplab
