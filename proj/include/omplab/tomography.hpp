#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "omplab/channels.hpp"
#include "omplab/core.hpp"
#include "omplab/designs.hpp"

namespace omplab::tomography {

enum class Basis : int { kX = 0, kY = 1, kZ = 2 };
enum class Outcome : int { kPlus = 0, kMinus = 1 };

inline constexpr std::array<Basis, 3> kBases{Basis::kX, Basis::kY, Basis::kZ};

struct MeasurementEvent {
  Basis basis;
  Outcome outcome;
  std::optional<std::size_t> design_index;  // twirl element active when recorded
};

/// Projector onto the +/- eigenstate of the Pauli operator for `basis`.
CMatrixd pauli_projector(Basis basis, Outcome outcome);

/// Relative frequencies f_{alpha,k} = n_{alpha,k} / n over all six outcomes.
using FrequencyTable = std::array<std::array<double, 2>, 3>;

/// Counts n_{alpha,k} for the three Pauli bases.
class CountTable {
 public:
  CountTable() = default;

  static CountTable from_events(std::span<const MeasurementEvent> events);

  void add(Basis basis, Outcome outcome, std::uint64_t count = 1) { n_[idx(basis)][idx(outcome)] += count; }
  std::uint64_t count(Basis basis, Outcome outcome) const { return n_[idx(basis)][idx(outcome)]; }
  std::uint64_t basis_total(Basis basis) const { return n_[idx(basis)][0] + n_[idx(basis)][1]; }
  std::uint64_t total() const;
  FrequencyTable frequencies() const;

  CountTable& operator+=(const CountTable& other);
  friend bool operator==(const CountTable&, const CountTable&) = default;

 private:
  static std::size_t idx(Basis b) { return static_cast<std::size_t>(b); }
  static std::size_t idx(Outcome o) { return static_cast<std::size_t>(o); }
  std::array<std::array<std::uint64_t, 2>, 3> n_{};
};

/// Counter-based 64-bit generator: output i is a SplitMix64 finalizer of
/// key + (i + 1) * golden. Substreams are derived by hashing ids into the key,
/// so draws do not depend on scheduling.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  double uniform();  // [0, 1) with 53 random bits

  CounterRng split(std::initializer_list<std::uint64_t> ids) const;
  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);

/// Number of "+" outcomes among `shots` Born-rule draws in `basis`.
std::uint64_t simulate_basis(const DensityMatrixd& rho, Basis basis, std::uint64_t shots, CounterRng& rng);

CountTable simulate_counts(const DensityMatrixd& rho, std::uint64_t shots_per_basis, CounterRng& rng);

struct ExperimentConfig {
  std::uint64_t N = 100;
  std::size_t realizations = 1000;
  bool twirl = false;
  UnitaryDesignd design = clifford_design<double>();
  KrausChanneld channel = bit_phase_flip(0.45);
  std::uint64_t seed = 20190101;
  int mle_max_iter = 2000;
  double mle_tol = 1e-10;
  DensityMatrixd state1 = default_state1();
  DensityMatrixd state2 = default_state2();
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const;

  // Bloch vectors (1,1,0)/sqrt2 and (-3, 3 sqrt3, 0)/8.
  static DensityMatrixd default_state1();
  static DensityMatrixd default_state2();
};

/// Counts for both states. Untwirled: each state measured k N times per basis
/// through the channel (k = design size). Twirled: for every design element
/// U_i the state U_i^dagger N(U_i rho U_i^dagger) U_i is measured N times per basis.
std::pair<CountTable, CountTable> simulate_protocol(const DensityMatrixd& rho1, const DensityMatrixd& rho2,
                                                    const ExperimentConfig& config, const CounterRng& stream);

struct MleResult {
  DensityMatrixd state;
  int iterations = 0;
  bool converged = false;
  bool floor_triggered = false;
  std::vector<double> log_likelihood;  // per iterate, starting with rho^(0)
};

using MleObserver = std::function<void(int iteration, const DensityMatrixd& iterate)>;

inline constexpr double kProbabilityFloor = 1e-12;

/// sum_{alpha,k} f_{alpha,k} log tr(rho Pi_{alpha,k}), probabilities floored.
double log_likelihood(const DensityMatrixd& rho, const FrequencyTable& f);

/// Iterates rho <- R rho R / tr(R rho R), R = sum f/p Pi, from I/2 until the
/// trace-norm step is <= tol or max_iter is reached.
MleResult mle_reconstruct(const FrequencyTable& frequencies, int max_iter = 2000, double tol = 1e-10,
                          const MleObserver& observer = {});
MleResult mle_reconstruct(const CountTable& counts, int max_iter = 2000, double tol = 1e-10,
                          const MleObserver& observer = {});

/// (I + rho1 - rho2) / 2
HermitianOperatord rho_lambda(const DensityMatrixd& rho1, const DensityMatrixd& rho2);

/// Angle in [0, pi] between two nonzero vectors.
double theta_metric(const Bloch3d& estimated, const Bloch3d& reference);

struct TrialResult {
  double theta;
  DensityMatrixd rho1_hat;
  DensityMatrixd rho2_hat;
};

TrialResult run_trial(const ExperimentConfig& config, std::size_t realization);

struct ExperimentSummary {
  double theta_mean = 0;
  double theta_stderr = 0;
  std::vector<double> thetas;  // indexed by realization
};

ExperimentSummary run_experiment(const ExperimentConfig& config);

/// Noise-free limit of theta: angle between the channel output difference
/// (twirled or not) and r1 - r2.
double asymptotic_theta(const ExperimentConfig& config);

}  // namespace omplab::tomography
