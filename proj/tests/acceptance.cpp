// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "omplab/channels.hpp"
#include "omplab/designs.hpp"
#include "omplab/discrimination.hpp"
#include "omplab/tomography.hpp"
#include "test_support.hpp"

using namespace omplab;
using omplab::testing::Rng;
namespace tomo = omplab::tomography;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double v, int precision = 8) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool rounds_to(double v, double target) { return std::abs(std::round(v * 100.0) / 100.0 - target) < 1e-9; }

Ensembled pair() { return omplab::testing::reference_pair(); }

Outcome guessing_probabilities() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto p = pair();
  const double id = solve_dual(p).p_guess;
  const double id_closed = helstrom_two_state(p).p_guess;
  const auto twirled_channel = twirl(bit_phase_flip(0.45), clifford_design<double>());
  const double tw = solve_dual(apply(twirled_channel, p)).p_guess;
  const double tw_closed = predicted_guess_after_twirl(id_closed, 2, 0.6);
  const auto noisy = apply(bit_phase_flip(0.45), p);
  const double np = solve_dual(noisy).p_guess;
  const double np_closed = helstrom_two_state(noisy).p_guess;
  const double elapsed = seconds_since(t0);
  const bool pass = std::abs(id - id_closed) <= 1e-6 && std::abs(tw - tw_closed) <= 1e-6 &&
                    std::abs(np - np_closed) <= 1e-6 && rounds_to(id, 0.77) && rounds_to(tw, 0.61) &&
                    rounds_to(np, 0.53) && elapsed < 1.0;
  return {pass, "id " + num(id, 6) + ", twirled " + num(tw, 6) + ", untwirled " + num(np, 6) + ", " +
                    num(elapsed, 3) + " s"};
}

Outcome trine() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto sol = solve_dual(omplab::testing::trine());
  const double elapsed = seconds_since(t0);
  double r_dev = 0;
  for (const auto& c : sol.complementary) r_dev = std::max(r_dev, std::abs(c.r - 1.0 / 3.0));
  const bool pass = std::abs(sol.p_guess - 2.0 / 3.0) <= 1e-6 && r_dev <= 1e-6 && elapsed < 5.0;
  return {pass, "p_guess " + num(sol.p_guess, 10) + ", max |r_x - 1/3| " + num(r_dev, 3) + ", " + num(elapsed, 3) + " s"};
}

Outcome depolarizing_parameter_and_twirls() {
  const auto ch = bit_phase_flip(0.45);
  const double eta = depolarizing_parameter(ch);
  const auto target = SuperOperatord::depolarizing(0.6, 2);
  const auto c = twirl(ch, clifford_design<double>());
  const auto t = twirl(ch, tetrahedral_design<double>());
  const double dc = max_abs(CMatrixd(c.matrix() - target.matrix()));
  const double dt = max_abs(CMatrixd(t.matrix() - target.matrix()));
  const double dct = max_abs(CMatrixd(c.matrix() - t.matrix()));
  const bool pass = std::abs(eta - 0.6) <= 1e-12 && dc <= 1e-10 && dt <= 1e-10 && dct <= 1e-9;
  return {pass, "eta " + num(eta, 15) + ", clifford dev " + num(dc, 3) + ", tetra dev " + num(dt, 3) +
                    ", clifford-tetra " + num(dct, 3)};
}

Outcome omp_verdicts() {
  const auto p = pair();
  const auto bpf = omp_check(p, apply(bit_phase_flip(0.45), p));
  const auto dep = omp_check(p, apply(depolarizing(0.6), p));
  const bool pass = !bpf.is_omp && dep.is_omp && std::abs(dep.kappa - 0.4) <= 1e-9;
  return {pass, std::string("bit-phase flip ") + (bpf.is_omp ? "OMP" : "NOT OMP") + ", depolarizing " +
                    (dep.is_omp ? "OMP" : "NOT OMP") + " kappa " + num(dep.kappa, 12)};
}

Outcome tomography_scaling() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::uint64_t> ns{100, 1000, 10000};
  std::vector<double> twirled;
  double untwirled_10k = 0;
  for (std::uint64_t n : ns) {
    tomo::ExperimentConfig cfg;
    cfg.N = n;
    cfg.realizations = 200;
    cfg.seed = 20190101;
    cfg.twirl = true;
    twirled.push_back(tomo::run_experiment(cfg).theta_mean);
    if (n == 10000) {
      cfg.twirl = false;
      untwirled_10k = tomo::run_experiment(cfg).theta_mean;
    }
  }
  // Least-squares slope of log theta against log N.
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    mx += std::log(double(ns[i])) / 3.0;
    my += std::log(twirled[i]) / 3.0;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double dx = std::log(double(ns[i])) - mx;
    sxy += dx * (std::log(twirled[i]) - my);
    sxx += dx * dx;
  }
  const double slope = sxy / sxx;
  const bool pass = std::abs(slope + 0.5) <= 0.1 && std::abs(untwirled_10k - 0.436) <= 0.02;
  return {pass, "twirled theta " + num(twirled[0], 4) + " / " + num(twirled[1], 4) + " / " + num(twirled[2], 4) +
                    ", slope " + num(slope, 4) + ", untwirled N=10000 " + num(untwirled_10k, 5) + " rad, " +
                    num(seconds_since(t0), 3) + " s"};
}

Outcome oracle_equivalence(std::vector<std::pair<Ensembled, DiscriminationSolutiond>>& outputs) {
  Rng rng(606);
  double worst_helstrom = 0, worst_excess = -1, worst_deficit = 0;
  for (int t = 0; t < 100; ++t) {
    const auto e = omplab::testing::random_qubit_ensemble(rng, 2, false);
    const auto sol = solve_dual(e);
    const double h = helstrom_two_state(e).p_guess;
    const double b = brute_force_two_state(e, 400);
    worst_helstrom = std::max(worst_helstrom, std::abs(sol.p_guess - h));
    worst_excess = std::max(worst_excess, sol.p_guess - b);
    worst_deficit = std::max(worst_deficit, b - sol.p_guess);
    outputs.emplace_back(e, sol);
  }
  const bool pass = worst_helstrom <= 1e-6 && worst_excess <= 1e-6 + 1e-3 && worst_deficit <= 1e-6;
  return {pass, "max |dual - helstrom| " + num(worst_helstrom, 3) + ", max (dual - grid) " + num(worst_excess, 3) +
                    ", max (grid - dual) " + num(worst_deficit, 3)};
}

Outcome certificate_suite(const std::vector<std::pair<Ensembled, DiscriminationSolutiond>>& outputs) {
  Rng rng(707);
  int checked = 0, failed = 0;
  double worst = 0;
  auto check = [&](const Ensembled& e, const DiscriminationSolutiond& sol) {
    const auto r = verify_certificate(e, sol);
    ++checked;
    if (!r.all_pass()) ++failed;
    worst = std::max({worst, r.decomposition.max_residual, r.slackness.max_residual, r.povm.max_residual,
                      r.congruence.max_residual});
  };
  for (const auto& [e, sol] : outputs) check(e, sol);
  for (int t = 0; t < 100; ++t) {
    const auto e = omplab::testing::random_qubit_ensemble(rng, 3, true);
    check(e, solve_dual(e));
  }
  return {failed == 0, std::to_string(checked - failed) + "/" + std::to_string(checked) + " certificates pass, max residual " +
                           num(worst, 3)};
}

Outcome mle_properties() {
  Rng rng(808);
  tomo::CounterRng source(808);
  int monotone_violations = 0, invalid_iterates = 0;
  double worst_drop = 0;
  for (int t = 0; t < 100; ++t) {
    tomo::CounterRng stream = source.split({static_cast<std::uint64_t>(t)});
    const auto rho = bloch_to_density<double>(omplab::testing::random_bloch(rng));
    const auto counts = tomo::simulate_counts(rho, 5 + (t * 97) % 2000, stream);
    const auto r = tomo::mle_reconstruct(counts, 2000, 1e-10, [&](int, const DensityMatrixd& it) {
      const CMatrixd& m = it.matrix();
      if (max_abs(CMatrixd(m - m.adjoint())) > 1e-12 || std::abs(std::real(m.trace()) - 1.0) > 1e-12 ||
          min_eigenvalue<double>(m) < -1e-10)
        ++invalid_iterates;
    });
    for (std::size_t i = 1; i < r.log_likelihood.size(); ++i) {
      const double drop = r.log_likelihood[i - 1] - r.log_likelihood[i];
      worst_drop = std::max(worst_drop, drop);
      if (drop > 1e-12) ++monotone_violations;
    }
  }
  double worst_recovery = 0;
  for (int t = 0; t < 100; ++t) {
    const Bloch3d b = omplab::testing::random_bloch(rng, 0.95);
    tomo::FrequencyTable f{};
    for (int a = 0; a < 3; ++a) f[a] = {(1.0 + b(a)) / 6.0, (1.0 - b(a)) / 6.0};
    const auto r = tomo::mle_reconstruct(f, 20000, 1e-14);
    worst_recovery = std::max(worst_recovery, trace_distance(r.state, bloch_to_density<double>(b)));
  }
  const bool pass = monotone_violations == 0 && invalid_iterates == 0 && worst_recovery <= 1e-6;
  return {pass, "likelihood drops > 1e-12: " + std::to_string(monotone_violations) + " (max drop " + num(worst_drop, 3) +
                    "), invalid iterates: " + std::to_string(invalid_iterates) + ", max recovery distance " +
                    num(worst_recovery, 3)};
}

Outcome measurement_preservation() {
  Rng rng(909);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + t % 3;
    const auto e = omplab::testing::random_qubit_ensemble(rng, n, true);
    double mu = u(rng);
    while (mu <= 0.0) mu = u(rng);
    const auto sol = solve_dual(e);
    const auto noisy = apply(depolarizing(mu), e);
    const double predicted = 1.0 / double(n) + (1.0 - mu) * (sol.p_guess - 1.0 / double(n));
    worst = std::max(worst, std::abs(success_probability(sol.povm, noisy) - predicted));
    worst = std::max(worst, std::abs(solve_dual(noisy).p_guess - predicted));
  }
  return {worst <= 1e-6, "max |achieved - predicted| " + num(worst, 3)};
}

}  // namespace

int main() {
  std::vector<std::pair<Ensembled, DiscriminationSolutiond>> pair_outputs;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"guessing probabilities 0.77 / 0.61 / 0.53", guessing_probabilities},
      {"trine p_guess 2/3, r_x 1/3", trine},
      {"depolarizing parameter and design twirls", depolarizing_parameter_and_twirls},
      {"OMP verdicts", omp_verdicts},
      {"tomography theta_N scaling and asymptote", tomography_scaling},
      {"dual vs Helstrom vs grid oracle", [&] { return oracle_equivalence(pair_outputs); }},
      {"certificate suite", [&] { return certificate_suite(pair_outputs); }},
      {"MLE properties", mle_properties},
      {"measurement preservation under depolarizing", measurement_preservation},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %zu %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria pass\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
