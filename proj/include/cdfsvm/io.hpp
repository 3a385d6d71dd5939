#pragma once

#include "cdfsvm/core.hpp"
#include "cdfsvm/solvers.hpp"

#include <string>
#include <utility>
#include <vector>

namespace cdfsvm {

inline constexpr const char* kModelFormat = "cdfsvm.model";
inline constexpr int kModelVersion = 1;

struct StoredModel {
  Model model;
  Scaler scaler;
};

std::string model_to_json(const Model& model, const Scaler& scaler);
/// Throws ParseError on malformed documents or unsupported versions.
StoredModel model_from_json(const std::string& text);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

using Provenance = std::vector<std::pair<std::string, std::string>>;
/// "# key: value" lines.
std::string provenance_header(const Provenance& entries);

/// "index,v" rows.
std::string weights_csv(const Vector& v);

/// Shortest text that parses back to the same double.
std::string format_double(double x);

}  // namespace cdfsvm
