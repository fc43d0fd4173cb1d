// omplab: state discrimination, channel twirling and tomography experiments.
//
// Exit codes: 0 success / OMP, 1 checked negative verdict, 2 input error,
// 3 numerical failure.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "omplab/channels.hpp"
#include "omplab/core.hpp"
#include "omplab/designs.hpp"
#include "omplab/discrimination.hpp"
#include "omplab/io.hpp"
#include "omplab/tomography.hpp"

namespace {

using nlohmann::json;
using omplab::io::format_decimal;
namespace tomo = omplab::tomography;

enum ExitCode : int { kOk = 0, kNegative = 1, kInputError = 2, kNumericalError = 3 };

constexpr std::uint64_t kDefaultSeed = 20190101;

std::string fmt(double v) { return format_decimal(v); }

json bloch_json(const omplab::Bloch3d& b) { return json::array({b(0), b(1), b(2)}); }

std::string bloch_text(const omplab::Bloch3d& b) {
  return "(" + fmt(b(0)) + ", " + fmt(b(1)) + ", " + fmt(b(2)) + ")";
}

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("OMP_LAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw omplab::io::InputError("OMP_LAB_SEED is not an unsigned integer");
    }
  }
  return kDefaultSeed;
}

omplab::UnitaryDesignd design_by_name(const std::string& name) {
  if (name == "clifford24") return omplab::clifford_design<double>();
  if (name == "tetra12") return omplab::tetrahedral_design<double>();
  throw omplab::io::InputError("unknown design \"" + name + "\"");
}

omplab::Ensembled reference_pair(const std::vector<double>& priors = {0.5, 0.5}) {
  return omplab::Ensembled({{priors.at(0), tomo::ExperimentConfig::default_state1()},
                            {priors.at(1), tomo::ExperimentConfig::default_state2()}});
}

omplab::Ensembled trine() {
  std::vector<omplab::DensityMatrixd> states;
  for (int k = 0; k < 3; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 3.0;
    states.push_back(omplab::bloch_to_density<double>(omplab::Bloch3d(std::cos(a), std::sin(a), 0.0)));
  }
  return omplab::Ensembled::equal_priors(states);
}

omplab::DiscriminationSolutiond solve_any(const omplab::Ensembled& e) {
  if (e.dim() == 2) return omplab::solve_dual(e);
  if (e.size() == 2) return omplab::helstrom_two_state(e);
  throw omplab::io::InputError("only qubit ensembles or two-state ensembles are supported");
}

// Runs a command body and maps exceptions onto exit codes.
template <typename Body>
int guarded(Body&& body) {
  try {
    return body();
  } catch (const omplab::io::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const omplab::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const omplab::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  }
}

// ---------------------------------------------------------------------------
// solve

int cmd_solve(const std::string& path, bool as_json) {
  const auto ensemble = omplab::io::load_ensemble(path);
  const auto sol = solve_any(ensemble);
  const auto cert = omplab::verify_certificate(ensemble, sol);
  const double h_min = omplab::min_entropy(sol.p_guess);
  const bool qubit = ensemble.dim() == 2;

  if (as_json) {
    json out;
    out["p_guess"] = sol.p_guess;
    out["r_mean"] = sol.r_mean;
    out["min_entropy"] = h_min;
    json comp = json::array(), povm = json::array();
    for (std::size_t x = 0; x < ensemble.size(); ++x) {
      json c{{"r", sol.complementary[x].r}};
      json m{{"trace", sol.povm[x].trace()}};
      if (qubit) {
        c["sigma_bloch"] = bloch_json(omplab::density_to_bloch(sol.complementary[x].sigma));
        m["bloch"] = bloch_json(omplab::bloch_components<double>(sol.povm[x].matrix()));
      } else {
        c["sigma"] = omplab::io::matrix_to_json(sol.complementary[x].sigma.matrix());
        m["matrix"] = omplab::io::matrix_to_json(sol.povm[x].matrix());
      }
      comp.push_back(c);
      povm.push_back(m);
    }
    out["complementary"] = comp;
    out["povm"] = povm;
    auto check = [](const omplab::CertificateCheck<double>& c) { return json{{"pass", c.pass}, {"max_residual", c.max_residual}}; };
    out["certificate"] = {{"decomposition", check(cert.decomposition)},
                          {"slackness", check(cert.slackness)},
                          {"povm", check(cert.povm)},
                          {"congruence", check(cert.congruence)},
                          {"all_pass", cert.all_pass()}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "p_guess " << fmt(sol.p_guess) << "\n";
    std::cout << "r_mean " << fmt(sol.r_mean) << "\n";
    std::cout << "min_entropy " << fmt(h_min) << "\n";
    for (std::size_t x = 0; x < ensemble.size(); ++x) {
      std::cout << "state " << x + 1 << ": r " << fmt(sol.complementary[x].r);
      if (qubit) {
        std::cout << " sigma_bloch " << bloch_text(omplab::density_to_bloch(sol.complementary[x].sigma))
                  << " povm_trace " << fmt(sol.povm[x].trace()) << " povm_bloch "
                  << bloch_text(omplab::bloch_components<double>(sol.povm[x].matrix()));
      } else {
        std::cout << " povm_trace " << fmt(sol.povm[x].trace());
      }
      std::cout << "\n";
    }
    auto line = [](const char* name, const omplab::CertificateCheck<double>& c) {
      std::cout << "certificate " << name << " " << (c.pass ? "pass" : "FAIL") << " max_residual "
                << fmt(c.max_residual) << "\n";
    };
    line("decomposition", cert.decomposition);
    line("slackness", cert.slackness);
    line("povm", cert.povm);
    line("congruence", cert.congruence);
  }
  return cert.all_pass() ? kOk : kNumericalError;
}

// ---------------------------------------------------------------------------
// twirl

int cmd_twirl(const std::string& path, const std::string& design_name, bool as_json) {
  const auto channel = omplab::io::load_channel(path);
  if (channel.dim() != 2) throw omplab::io::InputError("twirl: designs are available for qubits only");
  const auto design = design_by_name(design_name);
  const double eta = omplab::depolarizing_parameter(channel);
  const auto twirled = omplab::twirl(channel, design);

  // Contraction of the Bloch ball along each axis under the twirled map.
  omplab::Bloch3d contraction;
  for (int a = 0; a < 3; ++a) {
    const auto out = omplab::apply(twirled, omplab::bloch_to_density<double>(omplab::Bloch3d::Unit(a)));
    contraction(a) = omplab::density_to_bloch(out)(a);
  }
  const double eta_measured = 1.0 - contraction.mean();
  const double deviation =
      omplab::max_abs(twirled.matrix() - omplab::SuperOperatord::depolarizing(eta, 2).matrix());
  const double kappa = 1.0 - eta;
  const bool in_range = kappa > 0.0 && kappa <= 1.0;

  if (as_json) {
    json out{{"design", design.name()},        {"eta", eta},
             {"eta_measured", eta_measured},   {"bloch_contraction", bloch_json(contraction)},
             {"max_deviation", deviation},     {"kappa", kappa},
             {"kappa_in_omp_range", in_range}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "design " << design.name() << " (" << design.size() << " elements)\n";
    std::cout << "eta " << fmt(eta) << "\n";
    std::cout << "eta_measured " << fmt(eta_measured) << "\n";
    std::cout << "bloch_contraction " << bloch_text(contraction) << "\n";
    std::cout << "max_deviation " << fmt(deviation) << "\n";
    std::cout << "kappa " << fmt(kappa) << (in_range ? "" : " OUT_OF_RANGE (kappa not in (0, 1])") << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// omp-check

int cmd_omp_check(const std::string& ensemble_path, const std::string& channel_path, double tolerance) {
  const auto ensemble = omplab::io::load_ensemble(ensemble_path);
  const auto channel = omplab::io::load_channel(channel_path);
  if (channel.dim() != ensemble.dim()) throw omplab::io::InputError("channel and ensemble dimensions differ");
  const auto report = omplab::omp_check(ensemble, omplab::apply(channel, ensemble), tolerance);
  std::cout << "kappa " << fmt(report.kappa) << "\n";
  std::cout << "max_residual " << fmt(report.max_residual) << "\n";
  std::cout << "verdict " << (report.is_omp ? "OMP" : "NOT OMP") << "\n";
  return report.is_omp ? kOk : kNegative;
}

// ---------------------------------------------------------------------------
// fig3

struct Fig3Options {
  std::vector<std::uint64_t> n_list{100, 1000, 10000};
  std::size_t realizations = 1000;
  std::optional<std::uint64_t> seed;
  std::string twirl = "both";
  unsigned threads = 0;
  std::string design = "clifford24";
  std::string channel_file;
  std::string ensemble_file;
  std::string out;
  std::string manifest;
  std::string config_file;
};

void apply_config_file(Fig3Options& o, const CLI::App& app) {
  if (o.config_file.empty()) return;
  const json doc = omplab::io::read_json(o.config_file);
  try {
    // Flags given on the command line win over the file.
    auto unset = [&](const char* flag) { return app.count(flag) == 0; };
    if (doc.contains("N_list") && unset("--N-list")) o.n_list = doc.at("N_list").get<std::vector<std::uint64_t>>();
    if (doc.contains("realizations") && unset("--realizations")) o.realizations = doc.at("realizations").get<std::size_t>();
    if (doc.contains("seed") && unset("--seed")) o.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("twirl") && unset("--twirl")) o.twirl = doc.at("twirl").get<std::string>();
    if (doc.contains("design") && unset("--design")) o.design = doc.at("design").get<std::string>();
    if (doc.contains("threads") && unset("--threads")) o.threads = doc.at("threads").get<unsigned>();
    if (doc.contains("channel") && unset("--channel")) o.channel_file = doc.at("channel").get<std::string>();
    if (doc.contains("ensemble") && unset("--ensemble")) o.ensemble_file = doc.at("ensemble").get<std::string>();
  } catch (const json::exception& e) {
    throw omplab::io::InputError(std::string("fig3 config: ") + e.what());
  }
}

int cmd_fig3(Fig3Options o, const CLI::App& app) {
  const std::string start = iso_now();
  apply_config_file(o, app);
  const std::uint64_t seed = o.seed ? *o.seed : default_seed();
  std::vector<bool> settings;
  if (o.twirl == "off" || o.twirl == "both") settings.push_back(false);
  if (o.twirl == "on" || o.twirl == "both") settings.push_back(true);
  if (settings.empty()) throw omplab::io::InputError("--twirl must be one of both, on, off");
  if (o.n_list.empty()) throw omplab::io::InputError("--N-list is empty");

  tomo::ExperimentConfig base;
  base.realizations = o.realizations;
  base.seed = seed;
  base.threads = o.threads;
  base.design = design_by_name(o.design);
  if (!o.channel_file.empty()) base.channel = omplab::io::load_channel(o.channel_file);
  if (!o.ensemble_file.empty()) {
    const auto e = omplab::io::load_ensemble(o.ensemble_file);
    if (e.size() != 2 || e.dim() != 2) throw omplab::io::InputError("fig3 needs a two-state qubit ensemble");
    base.state1 = e.state(0);
    base.state2 = e.state(1);
  }

  json config{{"N_list", o.n_list}, {"realizations", o.realizations}, {"seed", seed},
              {"twirl", o.twirl},   {"design", o.design},           {"channel", o.channel_file},
              {"ensemble", o.ensemble_file}, {"mle_max_iter", base.mle_max_iter}, {"mle_tol", base.mle_tol}};

  for (std::uint64_t n : o.n_list) {
    tomo::ExperimentConfig cfg = base;
    cfg.N = n;
    cfg.validate();
  }

  std::ostringstream csv;
  csv << "N,twirled,theta_mean_rad,theta_stderr_rad,realizations,seed\n";
  for (std::uint64_t n : o.n_list) {
    for (bool tw : settings) {
      tomo::ExperimentConfig cfg = base;
      cfg.N = n;
      cfg.twirl = tw;
      tomo::ExperimentSummary summary;
      try {
        summary = tomo::run_experiment(cfg);
      } catch (const omplab::InvalidArgument& e) {
        throw omplab::NumericalError(std::string("trial failed: ") + e.what());
      }
      csv << n << "," << (tw ? 1 : 0) << "," << fmt(summary.theta_mean) << "," << fmt(summary.theta_stderr) << ","
          << cfg.realizations << "," << seed << "\n";
    }
  }

  std::vector<std::string> outputs;
  if (o.out.empty() || o.out == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw omplab::io::InputError("cannot write " + o.out);
    f << csv.str();
    outputs.push_back(o.out);
  }
  std::string manifest_path = o.manifest;
  if (manifest_path.empty() && !outputs.empty()) manifest_path = o.out + ".manifest.json";
  if (!manifest_path.empty()) {
    outputs.push_back(manifest_path);
    json manifest{{"command", "fig3"},
                  {"config", config},
                  {"input_hash", omplab::io::git_blob_hash(config.dump())},
                  {"seed", seed},
                  {"start", start},
                  {"end", iso_now()},
                  {"outputs", outputs}};
    std::ofstream f(manifest_path);
    if (!f) throw omplab::io::InputError("cannot write " + manifest_path);
    f << manifest.dump(2) << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// reproduce

struct ReproduceOptions {
  bool paper_numbers = true;
  double channel_p = 0.45;
  std::vector<double> priors;
  std::string ensemble_file;
  std::string design = "clifford24";
};

int cmd_reproduce(const ReproduceOptions& o) {
  omplab::Ensembled pair = reference_pair();
  if (!o.ensemble_file.empty()) pair = omplab::io::load_ensemble(o.ensemble_file);
  if (!o.priors.empty()) {
    if (o.priors.size() != pair.size()) throw omplab::io::InputError("--priors length does not match the ensemble");
    std::vector<omplab::EnsembleMember<double>> members;
    for (std::size_t x = 0; x < pair.size(); ++x) members.push_back({o.priors[x], pair.state(x)});
    pair = omplab::Ensembled(std::move(members));
  }
  if (pair.dim() != 2) throw omplab::io::InputError("reproduce needs a qubit ensemble");
  const auto channel = omplab::bit_phase_flip(o.channel_p);
  const auto design = design_by_name(o.design);
  const int n = static_cast<int>(pair.size());

  struct Row {
    std::string name;
    double value;
    std::string expected;
    bool pass;
  };
  std::vector<Row> rows;
  auto rounds_to = [](double v, double target) { return std::abs(std::round(v * 100.0) / 100.0 - target) < 1e-9; };

  const auto sol_id = omplab::solve_dual(pair);
  const double closed_id = pair.size() == 2 ? omplab::helstrom_two_state(pair).p_guess : sol_id.p_guess;
  rows.push_back({"p_guess id", sol_id.p_guess, "0.77",
                  std::abs(sol_id.p_guess - closed_id) <= 1e-6 && rounds_to(sol_id.p_guess, 0.77)});

  const double eta = omplab::depolarizing_parameter(channel);
  const auto twirled = omplab::twirl(channel, design);
  const auto sol_tw = omplab::solve_dual(omplab::apply(twirled, pair));
  const bool eta_ok = eta >= 0.0 && eta <= 1.0;
  const double predicted = eta_ok ? omplab::predicted_guess_after_twirl(sol_id.p_guess, n, eta) : sol_tw.p_guess;
  rows.push_back({"p_guess twirled", sol_tw.p_guess, "0.61",
                  eta_ok && std::abs(sol_tw.p_guess - predicted) <= 1e-6 && rounds_to(sol_tw.p_guess, 0.61)});

  const auto noisy = omplab::apply(channel, pair);
  const auto sol_np = omplab::solve_dual(noisy);
  const double closed_np = noisy.size() == 2 ? omplab::helstrom_two_state(noisy).p_guess : sol_np.p_guess;
  rows.push_back({"p_guess channel", sol_np.p_guess, "0.53",
                  std::abs(sol_np.p_guess - closed_np) <= 1e-6 && rounds_to(sol_np.p_guess, 0.53)});

  const auto sol_trine = omplab::solve_dual(trine());
  rows.push_back({"p_guess trine", sol_trine.p_guess, "0.666667", std::abs(sol_trine.p_guess - 2.0 / 3.0) <= 1e-6});

  rows.push_back({"eta_0", eta, "0.600000", std::abs(eta - 4.0 * o.channel_p / 3.0) <= 1e-12 && std::abs(eta - 0.6) <= 1e-12});

  double theta = std::numeric_limits<double>::quiet_NaN();
  if (pair.size() == 2) {
    tomo::ExperimentConfig cfg;
    cfg.channel = channel;
    cfg.state1 = pair.state(0);
    cfg.state2 = pair.state(1);
    cfg.twirl = false;
    try {
      theta = tomo::asymptotic_theta(cfg);
    } catch (const omplab::InvalidArgument&) {
    }
  }
  rows.push_back({"theta untwirled asymptote (rad)", theta, "0.436 +- 0.02", std::abs(theta - 0.436) <= 0.02});

  bool all = true;
  std::cout << std::left << std::setw(34) << "check" << std::setw(14) << "computed" << std::setw(16) << "expected"
            << "result\n";
  for (const auto& r : rows) {
    std::cout << std::left << std::setw(34) << r.name << std::setw(14) << fmt(r.value) << std::setw(16) << r.expected
              << (r.pass ? "pass" : "FAIL") << "\n";
    all = all && r.pass;
  }
  std::cout << (all ? "all checks pass" : "some checks failed") << "\n";
  return all ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  std::cout.imbue(std::locale::classic());
  CLI::App app{"Optimal state discrimination over quantum channels"};
  app.require_subcommand(1);

  std::string ensemble_path, channel_path, design = "clifford24";
  bool as_json = false;
  double omp_tol = omplab::tol::kOmp;

  auto* solve = app.add_subcommand("solve", "Solve minimum-error discrimination for an ensemble file");
  solve->add_option("ensemble", ensemble_path, "Ensemble JSON")->required();
  solve->add_flag("--json", as_json, "Print JSON");

  auto* tw = app.add_subcommand("twirl", "Twirl a channel over a unitary 2-design");
  tw->add_option("channel", channel_path, "Channel JSON")->required();
  tw->add_option("--design", design, "clifford24 | tetra12");
  tw->add_flag("--json", as_json, "Print JSON");

  std::string omp_channel;
  auto* omp = app.add_subcommand("omp-check", "Check whether a channel preserves the optimal measurement");
  omp->add_option("ensemble", ensemble_path, "Ensemble JSON")->required();
  omp->add_option("channel", omp_channel, "Channel JSON")->required();
  omp->add_option("--tol", omp_tol, "Residual tolerance (max-norm)");

  Fig3Options fig3;
  std::uint64_t seed_flag = 0;
  auto* f3 = app.add_subcommand("fig3", "Simulated tomography: theta_N with and without twirling");
  f3->add_option("--N-list", fig3.n_list, "Shot parameters N")->delimiter(',');
  f3->add_option("--realizations", fig3.realizations, "Realizations per (N, twirl)");
  f3->add_option("--seed", seed_flag, "Master seed (default: $OMP_LAB_SEED or built-in)");
  f3->add_option("--twirl", fig3.twirl, "both | on | off");
  f3->add_option("--threads", fig3.threads, "Worker threads (0: all cores)");
  f3->add_option("--design", fig3.design, "clifford24 | tetra12");
  f3->add_option("--channel", fig3.channel_file, "Channel JSON (default: bit-phase flip p = 0.45)");
  f3->add_option("--ensemble", fig3.ensemble_file, "Two-state ensemble JSON");
  f3->add_option("--out", fig3.out, "CSV output path (default: stdout)");
  f3->add_option("--manifest", fig3.manifest, "Run manifest path (default: <out>.manifest.json)");
  f3->add_option("--config", fig3.config_file, "JSON config file; flags override it");

  ReproduceOptions repro;
  auto* rp = app.add_subcommand("reproduce", "Recompute the headline numbers and check them");
  rp->add_flag("--paper-numbers", repro.paper_numbers, "Check the headline values against their tolerances (default)");
  rp->add_option("--channel-p", repro.channel_p, "Bit-phase flip probability");
  rp->add_option("--priors", repro.priors, "Priors for the two-state ensemble")->delimiter(',');
  rp->add_option("--ensemble", repro.ensemble_file, "Ensemble JSON replacing the default pair");
  rp->add_option("--design", repro.design, "clifford24 | tetra12");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  if (*solve) return guarded([&] { return cmd_solve(ensemble_path, as_json); });
  if (*tw) return guarded([&] { return cmd_twirl(channel_path, design, as_json); });
  if (*omp) return guarded([&] { return cmd_omp_check(ensemble_path, omp_channel, omp_tol); });
  if (*f3) {
    if (f3->count("--seed")) fig3.seed = seed_flag;
    return guarded([&] { return cmd_fig3(fig3, *f3); });
  }
  if (*rp) return guarded([&] { return cmd_reproduce(repro); });
  return kInputError;
}
