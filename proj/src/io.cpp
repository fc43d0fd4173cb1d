#include "omplab/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <vector>

namespace omplab::io {

using nlohmann::json;

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

CMatrixd matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw InputError("matrix must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  CMatrixd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw InputError("matrix must be square");
    for (Eigen::Index j = 0; j < n; ++j) {
      const json& entry = row[static_cast<std::size_t>(j)];
      if (entry.is_number()) {
        m(i, j) = entry.get<double>();
      } else if (entry.is_array() && entry.size() == 2 && entry[0].is_number() && entry[1].is_number()) {
        m(i, j) = {entry[0].get<double>(), entry[1].get<double>()};
      } else {
        throw InputError("matrix entries must be [re, im] pairs");
      }
    }
  }
  return m;
}

json matrix_to_json(const CMatrixd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({std::real(m(i, j)), std::imag(m(i, j))});
    rows.push_back(row);
  }
  return rows;
}

Ensembled ensemble_from_json(const json& doc) {
  try {
    if (!doc.is_object() || !doc.contains("states")) throw InputError("ensemble needs a \"states\" array");
    const json& states = doc.at("states");
    if (!states.is_array()) throw InputError("\"states\" must be an array");
    std::vector<DensityMatrixd> rhos;
    for (const json& s : states) {
      if (s.contains("bloch")) {
        const auto b = s.at("bloch").get<std::vector<double>>();
        if (b.size() != 3) throw InputError("bloch vectors need three components");
        rhos.push_back(bloch_to_density<double>(Bloch3d(b[0], b[1], b[2])));
      } else if (s.contains("matrix")) {
        rhos.emplace_back(matrix_from_json(s.at("matrix")));
      } else {
        throw InputError("each state needs \"bloch\" or \"matrix\"");
      }
    }
    std::vector<double> priors;
    if (doc.contains("priors")) {
      priors = doc.at("priors").get<std::vector<double>>();
    } else {
      priors.assign(rhos.size(), rhos.empty() ? 0.0 : 1.0 / static_cast<double>(rhos.size()));
    }
    if (priors.size() != rhos.size()) throw InputError("priors and states differ in length");
    std::vector<EnsembleMember<double>> members;
    for (std::size_t i = 0; i < rhos.size(); ++i) members.push_back({priors[i], rhos[i]});
    return Ensembled(std::move(members));
  } catch (const json::exception& e) {
    throw InputError(std::string("ensemble: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw InputError(std::string("ensemble: ") + e.what());
  }
}

Ensembled load_ensemble(const std::filesystem::path& path) { return ensemble_from_json(read_json(path)); }

KrausChanneld channel_from_json(const json& doc) {
  try {
    if (!doc.is_object() || !doc.contains("type")) throw InputError("channel needs a \"type\"");
    const auto type = doc.at("type").get<std::string>();
    if (type == "bit_phase_flip") return bit_phase_flip(doc.at("p").get<double>());
    if (type == "depolarizing") {
      const auto dim = doc.value("dim", 2);
      return depolarizing(doc.at("mu").get<double>(), static_cast<Eigen::Index>(dim));
    }
    if (type == "identity") return KrausChanneld::identity_channel(doc.value("dim", 2));
    if (type == "kraus") {
      std::vector<CMatrixd> ops;
      for (const json& m : doc.at("kraus")) ops.push_back(matrix_from_json(m));
      return KrausChanneld(std::move(ops));
    }
    throw InputError("unknown channel type \"" + type + "\"");
  } catch (const json::exception& e) {
    throw InputError(std::string("channel: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw InputError(std::string("channel: ") + e.what());
  }
}

KrausChanneld load_channel(const std::filesystem::path& path) { return channel_from_json(read_json(path)); }

std::string format_decimal(double value) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  int decimals = 6;
  if (value != 0.0) {
    const int magnitude = static_cast<int>(std::floor(std::log10(std::abs(value))));
    decimals = std::clamp(5 - magnitude, 6, 17);
  }
  char buf[512];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, decimals);
  std::string out(buf, res.ptr);
  if (out.find_first_not_of("-0.") == std::string::npos && out.front() == '-') out.erase(0, 1);
  return out;
}

std::string git_blob_hash(const std::string& content) {
  std::string framed = "blob " + std::to_string(content.size());
  framed.push_back('\0');
  framed += content;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(framed.data(), framed.size(), digest, &length, EVP_sha1(), nullptr) != 1)
    throw std::runtime_error("git_blob_hash: SHA-1 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned i = 0; i < length; ++i) {
    const unsigned char c = digest[i];
    hex.push_back(kHex[c >> 4]);
    hex.push_back(kHex[c & 0xF]);
  }
  return hex;
}

}  // namespace omplab::io
