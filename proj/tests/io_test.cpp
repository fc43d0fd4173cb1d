#include "omplab/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "omplab/discrimination.hpp"

using namespace omplab;
using nlohmann::json;

TEST(FormatDecimal, Examples) {
  EXPECT_EQ(io::format_decimal(0.7709100), "0.770910");
  EXPECT_EQ(io::format_decimal(2.0 / 3.0), "0.666667");
  EXPECT_EQ(io::format_decimal(4.0 / 3.0), "1.333333");
  EXPECT_EQ(io::format_decimal(0.0), "0.000000");
  EXPECT_EQ(io::format_decimal(-0.0), "0.000000");
  EXPECT_EQ(io::format_decimal(-1e-12), "-0.00000000000100000");
  EXPECT_EQ(io::format_decimal(0.00012345), "0.000123450");
  EXPECT_EQ(io::format_decimal(20190101.0), "20190101.000000");
}

TEST(FormatDecimal, NeverScientific) {
  for (double v : {1e-4, 3.2e-7, 1e-15, 123456789.0}) {
    const auto s = io::format_decimal(v);
    EXPECT_EQ(s.find('e'), std::string::npos) << s;
    EXPECT_EQ(s.find('E'), std::string::npos) << s;
  }
}

TEST(GitBlobHash, KnownValues) {
  EXPECT_EQ(io::git_blob_hash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  EXPECT_EQ(io::git_blob_hash("hello world\n"), "3b18e512dba79e4c8300dd08aeb37f8e728b8dad");
}

TEST(EnsembleJson, BlochAndMatrixForms) {
  const auto e = io::ensemble_from_json(json::parse(R"({"states": [{"bloch": [0, 0, 1]},
      {"matrix": [[[0.5, 0], [0, -0.5]], [[0, 0.5], [0.5, 0]]]}]})"));
  EXPECT_EQ(e.size(), 2u);
  EXPECT_DOUBLE_EQ(e.prior(0), 0.5);
  EXPECT_LE((density_to_bloch(e.state(1)) - Bloch3d(0, 1, 0)).norm(), 1e-15);
}

TEST(EnsembleJson, Rejections) {
  EXPECT_THROW(io::ensemble_from_json(json::parse(R"({"states": [{"bloch": [0, 0, 1]}]})")), io::InputError);
  EXPECT_THROW(io::ensemble_from_json(json::parse(R"({"states": [{"bloch": [0, 0, 2]}, {"bloch": [0, 0, 1]}]})")),
               io::InputError);
  EXPECT_THROW(io::ensemble_from_json(json::parse(R"({"priors": [0.7, 0.7], "states": [{"bloch": [0, 0, 1]}, {"bloch": [0, 0, 1]}]})")),
               io::InputError);
  EXPECT_THROW(io::ensemble_from_json(json::parse(R"({"priors": [1.0], "states": [{"bloch": [0, 0, 1]}, {"bloch": [0, 0, 1]}]})")),
               io::InputError);
  EXPECT_THROW(io::ensemble_from_json(json::parse(R"({"states": [{"bloch": [0, 1]}, {"bloch": [0, 0, 1]}]})")), io::InputError);
  EXPECT_THROW(io::ensemble_from_json(json::parse(R"({"states": [{"spin": "up"}, {"bloch": [0, 0, 1]}]})")), io::InputError);
  EXPECT_THROW(io::ensemble_from_json(json::parse(R"([1, 2])")), io::InputError);
}

TEST(ChannelJson, Types) {
  EXPECT_NEAR(depolarizing_parameter(io::channel_from_json(json::parse(R"({"type": "bit_phase_flip", "p": 0.45})"))),
              0.6, 1e-12);
  EXPECT_NEAR(depolarizing_parameter(io::channel_from_json(json::parse(R"({"type": "depolarizing", "mu": 0.3, "dim": 3})"))),
              0.3, 1e-12);
  EXPECT_EQ(io::channel_from_json(json::parse(R"({"type": "identity"})")).kraus_ops().size(), 1u);
  const auto k = io::channel_from_json(json::parse(R"({"type": "kraus", "kraus": [[[[0, 0], [1, 0]], [[1, 0], [0, 0]]]]})"));
  EXPECT_LE(max_abs(CMatrixd(k.kraus_ops()[0] - pauli<double>(1))), 0.0);
}

TEST(ChannelJson, Rejections) {
  EXPECT_THROW(io::channel_from_json(json::parse(R"({"type": "amplitude_damping", "p": 0.1})")), io::InputError);
  EXPECT_THROW(io::channel_from_json(json::parse(R"({"type": "bit_phase_flip"})")), io::InputError);
  EXPECT_THROW(io::channel_from_json(json::parse(R"({"type": "bit_phase_flip", "p": 2})")), io::InputError);
  EXPECT_THROW(io::channel_from_json(json::parse(R"({"type": "kraus", "kraus": [[[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]]})")),
               io::InputError);
  EXPECT_THROW(io::channel_from_json(json::parse(R"({"type": "kraus", "kraus": [[[[1, 0]], [[0, 0], [1, 0]]]]})")),
               io::InputError);
}

TEST(MatrixJson, RoundTrip) {
  CMatrixd m(2, 2);
  m << std::complex<double>(1, 2), 3, std::complex<double>(0, -1), 0.25;
  EXPECT_LE(max_abs(CMatrixd(io::matrix_from_json(io::matrix_to_json(m)) - m)), 0.0);
}

TEST(ReadJson, MissingAndMalformedFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "omplab_io_test";
  std::filesystem::create_directories(dir);
  EXPECT_THROW(io::read_json(dir / "does-not-exist.json"), io::InputError);
  const auto bad = dir / "bad.json";
  std::ofstream(bad) << "{not json";
  EXPECT_THROW(io::read_json(bad), io::InputError);
  std::filesystem::remove_all(dir);
}

TEST(BundledData, LoadsAndSolves) {
  const std::filesystem::path data = OMPLAB_DATA_DIR;
  EXPECT_NEAR(solve_dual(io::load_ensemble(data / "trine.json")).p_guess, 2.0 / 3.0, 1e-6);
  EXPECT_NEAR(solve_dual(io::load_ensemble(data / "paper-pair.json")).p_guess, 0.770910, 1e-6);
  EXPECT_NEAR(depolarizing_parameter(io::load_channel(data / "bit-phase-flip-045.json")), 0.6, 1e-12);
  EXPECT_THROW(io::load_ensemble(data / "single-state.json"), io::InputError);
}
