#include "omplab/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "omplab/discrimination.hpp"

namespace omplab::tomography {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kUntwirledTag = 0xFFFFFFFFULL;

Bloch3d basis_axis(Basis b) { return Bloch3d::Unit(static_cast<int>(b)); }

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng::result_type CounterRng::operator()() { return mix64(key_ + (++counter_) * kGolden); }

double CounterRng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

CounterRng CounterRng::split(std::initializer_list<std::uint64_t> ids) const {
  std::uint64_t k = key_;
  for (std::uint64_t id : ids) k = mix64(k ^ mix64(id + kGolden));
  return CounterRng(k);
}

CMatrixd pauli_projector(Basis basis, Outcome outcome) {
  const double sign = outcome == Outcome::kPlus ? 1.0 : -1.0;
  return bloch_to_density<double>(sign * basis_axis(basis)).matrix();
}

CountTable CountTable::from_events(std::span<const MeasurementEvent> events) {
  CountTable t;
  for (const auto& e : events) t.add(e.basis, e.outcome);
  return t;
}

std::uint64_t CountTable::total() const {
  std::uint64_t s = 0;
  for (const auto& row : n_) s += row[0] + row[1];
  return s;
}

FrequencyTable CountTable::frequencies() const {
  const double n = static_cast<double>(total());
  if (n == 0) throw InvalidArgument("CountTable: no events");
  FrequencyTable f{};
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t k = 0; k < 2; ++k) f[a][k] = static_cast<double>(n_[a][k]) / n;
  return f;
}

CountTable& CountTable::operator+=(const CountTable& other) {
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t k = 0; k < 2; ++k) n_[a][k] += other.n_[a][k];
  return *this;
}

std::uint64_t simulate_basis(const DensityMatrixd& rho, Basis basis, std::uint64_t shots, CounterRng& rng) {
  const double p_plus =
      born_probability(rho, HermitianOperatord(pauli_projector(basis, Outcome::kPlus)));
  std::uint64_t plus = 0;
  for (std::uint64_t s = 0; s < shots; ++s) plus += rng.uniform() < p_plus ? 1 : 0;
  return plus;
}

CountTable simulate_counts(const DensityMatrixd& rho, std::uint64_t shots_per_basis, CounterRng& rng) {
  if (rho.dim() != 2) throw InvalidArgument("simulate_counts: qubit states only");
  CountTable t;
  for (Basis b : kBases) {
    const std::uint64_t plus = simulate_basis(rho, b, shots_per_basis, rng);
    t.add(b, Outcome::kPlus, plus);
    t.add(b, Outcome::kMinus, shots_per_basis - plus);
  }
  return t;
}

DensityMatrixd ExperimentConfig::default_state1() {
  return bloch_to_density<double>(Bloch3d(1.0, 1.0, 0.0) / std::sqrt(2.0));
}

DensityMatrixd ExperimentConfig::default_state2() {
  return bloch_to_density<double>(Bloch3d(-3.0, 3.0 * std::sqrt(3.0), 0.0) / 8.0);
}

void ExperimentConfig::validate() const {
  if (N < 1) throw InvalidArgument("ExperimentConfig: N must be at least 1");
  if (realizations < 1) throw InvalidArgument("ExperimentConfig: realizations must be at least 1");
  if (mle_max_iter < 1) throw InvalidArgument("ExperimentConfig: mle_max_iter must be at least 1");
  if (!(mle_tol > 0)) throw InvalidArgument("ExperimentConfig: mle_tol must be positive");
  if (channel.dim() != 2 || design.dim() != 2 || state1.dim() != 2 || state2.dim() != 2)
    throw InvalidArgument("ExperimentConfig: qubit channel, design and states required");
}

std::pair<CountTable, CountTable> simulate_protocol(const DensityMatrixd& rho1, const DensityMatrixd& rho2,
                                                    const ExperimentConfig& config, const CounterRng& stream) {
  config.validate();
  const std::array<const DensityMatrixd*, 2> states{&rho1, &rho2};
  std::array<CountTable, 2> out;
  for (std::uint64_t s = 0; s < 2; ++s) {
    if (!config.twirl) {
      const DensityMatrixd output = apply(config.channel, *states[s]);
      const std::uint64_t shots = config.design.size() * config.N;
      for (Basis b : kBases) {
        CounterRng rng = stream.split({s, kUntwirledTag, static_cast<std::uint64_t>(b)});
        const std::uint64_t plus = simulate_basis(output, b, shots, rng);
        out[s].add(b, Outcome::kPlus, plus);
        out[s].add(b, Outcome::kMinus, shots - plus);
      }
      continue;
    }
    for (std::size_t i = 0; i < config.design.size(); ++i) {
      const DensityMatrixd output = apply(conjugated(config.channel, config.design[i]), *states[s]);
      for (Basis b : kBases) {
        CounterRng rng = stream.split({s, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(b)});
        const std::uint64_t plus = simulate_basis(output, b, config.N, rng);
        out[s].add(b, Outcome::kPlus, plus);
        out[s].add(b, Outcome::kMinus, config.N - plus);
      }
    }
  }
  return {out[0], out[1]};
}

namespace {

std::array<std::array<double, 2>, 3> probabilities(const DensityMatrixd& rho, bool& floored) {
  const Bloch3d b = density_to_bloch(rho);
  std::array<std::array<double, 2>, 3> p{};
  for (std::size_t a = 0; a < 3; ++a) {
    p[a][0] = 0.5 * (1.0 + b(static_cast<Eigen::Index>(a)));
    p[a][1] = 0.5 * (1.0 - b(static_cast<Eigen::Index>(a)));
    for (double& v : p[a]) {
      if (v < kProbabilityFloor) {
        v = kProbabilityFloor;
        floored = true;
      }
    }
  }
  return p;
}

}  // namespace

double log_likelihood(const DensityMatrixd& rho, const FrequencyTable& f) {
  bool floored = false;
  const auto p = probabilities(rho, floored);
  double ll = 0;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t k = 0; k < 2; ++k)
      if (f[a][k] > 0) ll += f[a][k] * std::log(p[a][k]);
  return ll;
}

MleResult mle_reconstruct(const FrequencyTable& f, int max_iter, double tol, const MleObserver& observer) {
  if (max_iter < 1) throw InvalidArgument("mle_reconstruct: max_iter must be at least 1");
  double total = 0;
  for (std::size_t a = 0; a < 3; ++a) {
    for (double v : f[a])
      if (!(v >= 0)) throw InvalidArgument("mle_reconstruct: negative frequency");
    if (f[a][0] + f[a][1] <= 0) throw InvalidArgument("mle_reconstruct: basis without events");
    total += f[a][0] + f[a][1];
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("mle_reconstruct: frequencies do not sum to 1");

  std::array<std::array<CMatrixd, 2>, 3> proj;
  for (Basis b : kBases)
    for (Outcome o : {Outcome::kPlus, Outcome::kMinus})
      proj[static_cast<std::size_t>(b)][static_cast<std::size_t>(o)] = pauli_projector(b, o);

  MleResult result{DensityMatrixd::maximally_mixed(2), 0, false, false, {}};
  result.log_likelihood.push_back(log_likelihood(result.state, f));
  if (observer) observer(0, result.state);
  for (int iter = 1; iter <= max_iter; ++iter) {
    const auto p = probabilities(result.state, result.floor_triggered);
    CMatrixd r = CMatrixd::Zero(2, 2);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t k = 0; k < 2; ++k) r += (f[a][k] / p[a][k]) * proj[a][k];
    const CMatrixd rrr = r * result.state.matrix() * r;
    DensityMatrixd next = DensityMatrixd::normalized(rrr);
    const double step = trace_norm(HermitianOperatord(hermitian_part<double>(next.matrix() - result.state.matrix())));
    result.state = std::move(next);
    result.iterations = iter;
    result.log_likelihood.push_back(log_likelihood(result.state, f));
    if (observer) observer(iter, result.state);
    if (step <= tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

MleResult mle_reconstruct(const CountTable& counts, int max_iter, double tol, const MleObserver& observer) {
  if (counts.total() == 0) throw InvalidArgument("mle_reconstruct: no events");
  for (Basis b : kBases)
    if (counts.basis_total(b) == 0) throw InvalidArgument("mle_reconstruct: basis without events");
  return mle_reconstruct(counts.frequencies(), max_iter, tol, observer);
}

HermitianOperatord rho_lambda(const DensityMatrixd& rho1, const DensityMatrixd& rho2) {
  if (rho1.dim() != 2 || rho2.dim() != 2) throw InvalidArgument("rho_lambda: qubit states only");
  return HermitianOperatord(0.5 * (identity<double>(2) + rho1.matrix() - rho2.matrix()));
}

double theta_metric(const Bloch3d& estimated, const Bloch3d& reference) {
  const double ne = estimated.norm(), nr = reference.norm();
  if (ne == 0 || nr == 0) throw InvalidArgument("theta_metric: zero-length vector");
  return std::acos(std::clamp(estimated.dot(reference) / (ne * nr), -1.0, 1.0));
}

TrialResult run_trial(const ExperimentConfig& config, std::size_t realization) {
  const CounterRng stream = CounterRng(config.seed).split({static_cast<std::uint64_t>(realization)});
  const auto [c1, c2] = simulate_protocol(config.state1, config.state2, config, stream);
  const MleResult m1 = mle_reconstruct(c1, config.mle_max_iter, config.mle_tol);
  const MleResult m2 = mle_reconstruct(c2, config.mle_max_iter, config.mle_tol);
  const Bloch3d estimated = 2.0 * bloch_components<double>(rho_lambda(m1.state, m2.state).matrix());
  const Bloch3d reference = density_to_bloch(config.state1) - density_to_bloch(config.state2);
  return {theta_metric(estimated, reference), m1.state, m2.state};
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentSummary summary;
  summary.thetas.assign(config.realizations, 0.0);
  unsigned workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, config.realizations));

  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&](unsigned w) {
    try {
      for (std::size_t r = w; r < config.realizations; r += workers) summary.thetas[r] = run_trial(config, r).theta;
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Fixed-order reduction by realization index.
  double sum = 0;
  for (double t : summary.thetas) sum += t;
  const double n = static_cast<double>(config.realizations);
  summary.theta_mean = sum / n;
  if (config.realizations > 1) {
    double ss = 0;
    for (double t : summary.thetas) ss += (t - summary.theta_mean) * (t - summary.theta_mean);
    summary.theta_stderr = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return summary;
}

double asymptotic_theta(const ExperimentConfig& config) {
  const Bloch3d reference = density_to_bloch(config.state1) - density_to_bloch(config.state2);
  Bloch3d out;
  if (config.twirl) {
    const auto twirled = twirl(config.channel, config.design);
    out = density_to_bloch(apply(twirled, config.state1)) - density_to_bloch(apply(twirled, config.state2));
  } else {
    out = density_to_bloch(apply(config.channel, config.state1)) - density_to_bloch(apply(config.channel, config.state2));
  }
  return theta_metric(out, reference);
}

}  // namespace omplab::tomography
