#pragma once

#include <map>
#include <optional>
#include <string>

#include "unistoq/core.hpp"

namespace unistoq {

// On-disk JSON description of a system. Matrices are nested row arrays
// (row-major); per-time tables are objects keyed by decimal time strings
// whose parsed values must match the times list exactly.
struct SystemDocument {
  int n = 0;
  std::vector<double> times;
  std::map<double, Matrix> gamma;
  Vector p0;
  std::map<std::string, std::map<double, Vector>> variables;
  std::map<double, Matrix> phases;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structural problems (wrong shapes, unknown time keys, missing transitions)
// land in the report; the system is only materialized when the document is
// structurally sound. ParseError is reserved for malformed JSON / wrong
// field types.
struct LoadResult {
  std::optional<StochasticSystem> system;
  std::map<double, Matrix> phases;
  ValidationReport report;
};

SystemDocument parse_document(const std::string& text);
SystemDocument read_document_file(const std::string& path);

LoadResult load_system(const SystemDocument& doc);

SystemDocument document_from_system(const StochasticSystem& sys,
                                    const std::map<double, Matrix>& phases = {});
std::string serialize_document(const SystemDocument& doc);

// shortest decimal string that parses back to exactly t
std::string format_time_key(double t);

// writes via a temp file in the same directory followed by an atomic rename
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace unistoq
