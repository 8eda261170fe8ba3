#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "unistoq/common.hpp"

namespace unistoq::cli {

// Exit codes shared by every verb.
inline constexpr int exit_ok = 0;
inline constexpr int exit_parse_error = 1;   // malformed input file
inline constexpr int exit_invalid = 2;       // validation failure or bad usage
inline constexpr int exit_tolerance = 3;     // a numerical check exceeded tolerance

// Configuration-count caps; UNISTOQ_MAX_N overrides both.
int max_n_stochastic();
int max_n_dilation();

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err);

int cmd_evolve(const std::string& path, const std::string& csv_path, std::ostream& out,
               std::ostream& err);

int cmd_dilate(const std::string& path, const std::string& out_dir, bool print_report,
               std::ostream& out, std::ostream& err);

struct AnalyzeOptions {
  std::optional<double> markov_dt;
  std::optional<std::pair<double, double>> divisibility; // (t, t')
  std::optional<double> unistochastic_t;
};

int cmd_analyze(const std::string& path, const AnalyzeOptions& opts, std::ostream& out,
                std::ostream& err);

struct GenerateOptions {
  std::string kind; // permutation | markov-chain | rds | random
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<double> times;
  double dt = 1.0;
  int steps = 0;
  int outcomes = 0;
  std::string cycles;          // "1,2;3" one-based cycles separated by ';'
  std::vector<double> gamma;   // row-major base matrix for markov-chain
  std::vector<double> p0;      // optional, uniform when empty
};

int cmd_generate(const GenerateOptions& opts, const std::string& out_path, std::ostream& out,
                 std::ostream& err);

// %.17g cell formatting, '.' decimal point, '\n' line endings
std::string format_csv_value(double v);

} // namespace unistoq::cli
