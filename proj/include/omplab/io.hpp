#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "omplab/channels.hpp"
#include "omplab/ensemble.hpp"

namespace omplab::io {

/// Malformed or unreadable input document.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {"priors": [...], "states": [{"bloch": [x,y,z]} | {"matrix": [[[re,im],...],...]}]}
Ensembled ensemble_from_json(const nlohmann::json& doc);
Ensembled load_ensemble(const std::filesystem::path& path);

// {"type": "bit_phase_flip" | "depolarizing" | "kraus" | "identity",
//  "p" | "mu": number, "kraus": [matrix, ...], "dim": integer}
KrausChanneld channel_from_json(const nlohmann::json& doc);
KrausChanneld load_channel(const std::filesystem::path& path);

nlohmann::json read_json(const std::filesystem::path& path);

CMatrixd matrix_from_json(const nlohmann::json& rows);
nlohmann::json matrix_to_json(const CMatrixd& m);

/// Fixed notation with at least 6 decimals and 6 significant digits; never
/// scientific, independent of the global locale.
std::string format_decimal(double value);

/// SHA-1 of "blob <size>\0<content>", as git computes object ids.
std::string git_blob_hash(const std::string& content);

}  // namespace omplab::io
