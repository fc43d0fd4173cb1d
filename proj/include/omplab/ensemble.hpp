#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "omplab/core.hpp"

namespace omplab {

template <typename Scalar>
struct EnsembleMember {
  Scalar prior;
  DensityMatrix<Scalar> state;
};

/// Indexed list of (prior, state) pairs with a common dimension.
/// Priors are positive and sum to one; at least two members.
template <typename Scalar>
class Ensemble {
 public:
  explicit Ensemble(std::vector<EnsembleMember<Scalar>> members) : members_(std::move(members)) {
    if (members_.size() < 2) throw InvalidArgument("Ensemble: at least two states required");
    Scalar total = 0;
    for (const auto& m : members_) {
      if (!(m.prior > Scalar(0))) throw InvalidArgument("Ensemble: priors must be positive");
      if (m.state.dim() != members_.front().state.dim()) throw InvalidArgument("Ensemble: state dimensions differ");
      total += m.prior;
    }
    if (std::abs(total - Scalar(1)) > Scalar(1e-12)) throw InvalidArgument("Ensemble: priors do not sum to 1");
  }

  static Ensemble equal_priors(const std::vector<DensityMatrix<Scalar>>& states) {
    std::vector<EnsembleMember<Scalar>> members;
    for (const auto& s : states) members.push_back({Scalar(1) / Scalar(states.size()), s});
    return Ensemble(std::move(members));
  }

  std::size_t size() const { return members_.size(); }
  Eigen::Index dim() const { return members_.front().state.dim(); }
  Scalar prior(std::size_t x) const { return members_[x].prior; }
  const DensityMatrix<Scalar>& state(std::size_t x) const { return members_[x].state; }
  const std::vector<EnsembleMember<Scalar>>& members() const { return members_; }

  // q_x rho_x
  CMatrix<Scalar> weighted(std::size_t x) const { return members_[x].prior * members_[x].state.matrix(); }

  bool has_equal_priors(Scalar tolerance = Scalar(1e-12)) const {
    for (const auto& m : members_)
      if (std::abs(m.prior - members_.front().prior) > tolerance) return false;
    return true;
  }

  /// Same priors, new states.
  Ensemble with_states(const std::vector<DensityMatrix<Scalar>>& states) const {
    if (states.size() != members_.size()) throw InvalidArgument("Ensemble: state count mismatch");
    std::vector<EnsembleMember<Scalar>> out;
    for (std::size_t x = 0; x < states.size(); ++x) out.push_back({members_[x].prior, states[x]});
    return Ensemble(std::move(out));
  }

 private:
  std::vector<EnsembleMember<Scalar>> members_;
};

using Ensembled = Ensemble<double>;

}  // namespace omplab
