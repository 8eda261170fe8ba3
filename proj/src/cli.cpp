#include "unistoq/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "unistoq/analysis.hpp"
#include "unistoq/dilation.hpp"
#include "unistoq/document.hpp"
#include "unistoq/generators.hpp"
#include "unistoq/numerics.hpp"

namespace unistoq::cli {

namespace {

std::optional<int> env_max_n() {
  const char* raw = std::getenv("UNISTOQ_MAX_N");
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || v < 1 || v > 1000000) return std::nullopt;
  return static_cast<int>(v);
}

} // namespace

int max_n_stochastic() { return env_max_n().value_or(default_max_n); }
int max_n_dilation() { return env_max_n().value_or(dilation_max_n); }

std::string format_csv_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

struct Loaded {
  std::optional<StochasticSystem> system;
  std::map<double, Matrix> phases;
  int exit_code = exit_ok;
};

// shared front half of every file-consuming verb: parse -> exit 1,
// cap/structure/validation -> exit 2
Loaded load_or_report(const std::string& path, int cap, std::ostream& err) {
  Loaded out;
  SystemDocument doc;
  try {
    doc = read_document_file(path);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    out.exit_code = exit_parse_error;
    return out;
  }
  if (doc.n > cap) {
    err << "configuration cap: n=" << doc.n << " exceeds limit " << cap
        << " (override with UNISTOQ_MAX_N)\n";
    out.exit_code = exit_invalid;
    return out;
  }
  LoadResult res = load_system(doc);
  if (!res.report.ok() || !res.system) {
    err << res.report.to_string();
    out.exit_code = exit_invalid;
    return out;
  }
  out.system = std::move(res.system);
  out.phases = std::move(res.phases);
  return out;
}

void emit(const std::string& path, const std::string& content, std::ostream& fallback) {
  if (path.empty())
    fallback << content;
  else
    write_file_atomic(path, content);
}

std::string csv_of_real(const Matrix& m) {
  std::ostringstream os;
  for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << "c" << j;
  os << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      os << (j ? "," : "") << format_csv_value(m(i, j));
    os << "\n";
  }
  return os.str();
}

std::string csv_of_complex(const CMatrix& m) {
  std::ostringstream os;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    os << (j ? "," : "") << "c" << j << "_re,c" << j << "_im";
  os << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      os << (j ? "," : "") << format_csv_value(m(i, j).real()) << ","
         << format_csv_value(m(i, j).imag());
    os << "\n";
  }
  return os.str();
}

} // namespace

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  const Loaded loaded = load_or_report(path, max_n_stochastic(), err);
  if (loaded.exit_code != exit_ok) return loaded.exit_code;
  out << "OK\n";
  return exit_ok;
}

int cmd_evolve(const std::string& path, const std::string& csv_path, std::ostream& out,
               std::ostream& err) {
  const Loaded loaded = load_or_report(path, max_n_stochastic(), err);
  if (loaded.exit_code != exit_ok) return loaded.exit_code;
  const StochasticSystem& sys = *loaded.system;

  std::ostringstream os;
  os << "time";
  for (int i = 1; i <= sys.n; ++i) os << ",p_" << i;
  os << "\n";
  for (int k = 0; k < sys.grid.size(); ++k) {
    const double t = sys.grid.at(k);
    const ProbabilityVector p = evolve_probabilities(sys, t);
    os << format_csv_value(t);
    for (int i = 0; i < sys.n; ++i) os << "," << format_csv_value(p.entries[i]);
    os << "\n";
  }
  try {
    emit(csv_path, os.str(), out);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return exit_invalid;
  }
  return exit_ok;
}

int cmd_dilate(const std::string& path, const std::string& out_dir, bool print_report,
               std::ostream& out, std::ostream& err) {
  const Loaded loaded = load_or_report(path, max_n_dilation(), err);
  if (loaded.exit_code != exit_ok) return loaded.exit_code;
  const StochasticSystem& sys = *loaded.system;

  DilatedSystem dilated;
  try {
    dilated = dilate_system(sys, &loaded.phases);
  } catch (const std::exception& e) {
    err << "dilation failed: " << e.what() << "\n";
    return exit_tolerance;
  }

  double worst_unit = 0.0;
  double worst_ds = 0.0;
  std::ostringstream report;
  for (int k = 0; k < dilated.grid.size(); ++k) {
    const CMatrix& u = dilated.unitaries[static_cast<size_t>(k)].entries;
    const Matrix& gt = dilated.transitions[static_cast<size_t>(k)];
    const double unit = std::max(num::identity_defect(CMatrix(u.adjoint() * u)),
                                 num::identity_defect(CMatrix(u * u.adjoint())));
    const double ds =
        std::max(num::column_sum_defect(gt), num::column_sum_defect(gt.transpose()));
    worst_unit = std::max(worst_unit, unit);
    worst_ds = std::max(worst_ds, ds);
    report << "time " << format_time_key(dilated.grid.at(k)) << ": unitarity_defect="
           << format_csv_value(unit) << " double_stochasticity_defect=" << format_csv_value(ds)
           << "\n";
  }
  const double marg = verify_marginalization(dilated, sys);
  const bool pass =
      worst_unit <= tol::stochastic && worst_ds <= tol::stochastic && marg <= tol::stochastic;
  report << "marginalization_residual=" << format_csv_value(marg) << "\n";
  report << "SUBSYSTEM-OF-UNISTOCHASTIC: " << (pass ? "PASS" : "FAIL") << "\n";

  try {
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      const std::filesystem::path dir(out_dir);
      for (int k = 0; k < dilated.grid.size(); ++k) {
        const std::string key = format_time_key(dilated.grid.at(k));
        write_file_atomic((dir / ("U_" + key + ".csv")).string(),
                          csv_of_complex(dilated.unitaries[static_cast<size_t>(k)].entries));
        write_file_atomic((dir / ("Gamma_" + key + ".csv")).string(),
                          csv_of_real(dilated.transitions[static_cast<size_t>(k)]));
      }
      write_file_atomic((dir / "report.txt").string(), report.str());
    }
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return exit_invalid;
  }
  if (print_report || out_dir.empty()) out << report.str();
  return pass ? exit_ok : exit_tolerance;
}

int cmd_analyze(const std::string& path, const AnalyzeOptions& opts, std::ostream& out,
                std::ostream& err) {
  if (!opts.markov_dt && !opts.divisibility && !opts.unistochastic_t) {
    err << "analyze: pick at least one of --markov, --divisibility, --unistochastic\n";
    return exit_invalid;
  }
  const Loaded loaded = load_or_report(path, max_n_stochastic(), err);
  if (loaded.exit_code != exit_ok) return loaded.exit_code;
  const StochasticSystem& sys = *loaded.system;

  try {
    if (opts.markov_dt) {
      const auto residuals = check_markov_chain(sys, *opts.markov_dt);
      for (const auto& [n, r] : residuals)
        out << "markov n=" << n << " residual=" << format_csv_value(r) << "\n";
    }
    if (opts.divisibility) {
      const auto [t, tp] = *opts.divisibility;
      const DivisibilityReport rep =
          solve_divisibility(sys.transition_at(t), sys.transition_at(tp));
      out << "divisibility t=" << format_time_key(t) << " tprime=" << format_time_key(tp) << " "
          << (rep.feasible ? "FEASIBLE" : "INFEASIBLE")
          << " residual=" << format_csv_value(rep.residual) << " iterations=" << rep.iterations
          << "\n";
    }
    if (opts.unistochastic_t) {
      const Matrix& g = sys.transition_at(*opts.unistochastic_t).entries;
      if (!is_doubly_stochastic(g)) {
        out << "unistochastic: NOT-DOUBLY-STOCHASTIC\n";
      } else if (sys.n == 2) {
        const CMatrix w = unistochastic_witness_2x2(g);
        const double defect = num::max_abs(Matrix(w.cwiseAbs2() - g));
        out << "unistochastic: YES (2x2 witness) defect=" << format_csv_value(defect) << "\n";
      } else if (sys.n == 3) {
        const UnistochasticityResult res = unistochastic_verdict_3x3(g);
        out << "unistochastic: " << (res.verdict == Verdict::yes ? "YES" : "NO")
            << " (3x3 criterion) defect=" << format_csv_value(res.defect) << "\n";
      } else {
        const UnistochasticityResult res = search_unistochastic(g);
        out << "unistochastic: " << (res.verdict == Verdict::yes ? "YES" : "UNKNOWN")
            << " (witness search) defect=" << format_csv_value(res.defect) << "\n";
      }
    }
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return exit_invalid;
  }
  return exit_ok;
}

namespace {

std::vector<std::vector<int>> parse_cycles(const std::string& text, int n) {
  std::vector<std::vector<int>> cycles;
  std::vector<bool> seen(static_cast<size_t>(n), false);
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    if (group.empty()) continue;
    std::vector<int> cycle;
    std::stringstream items(group);
    std::string item;
    while (std::getline(items, item, ',')) {
      size_t pos = 0;
      int value = 0;
      try {
        value = std::stoi(item, &pos);
      } catch (const std::exception&) {
        throw std::invalid_argument("cycles: '" + item + "' is not an index");
      }
      while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
      require(pos == item.size(), "cycles: '" + item + "' is not an index");
      require(value >= 1 && value <= n, "cycles: index " + std::to_string(value) +
                                            " outside 1.." + std::to_string(n));
      cycle.push_back(value - 1);
      seen[static_cast<size_t>(value - 1)] = true;
    }
    if (!cycle.empty()) cycles.push_back(std::move(cycle));
  }
  for (int j = 0; j < n; ++j)
    if (!seen[static_cast<size_t>(j)]) cycles.push_back({j}); // untouched indices stay fixed
  return cycles;
}

ProbabilityVector default_p0(const GenerateOptions& opts) {
  if (opts.p0.empty()) {
    Vector p = Vector::Constant(opts.n, 1.0 / static_cast<double>(opts.n));
    return ProbabilityVector{p};
  }
  require(static_cast<int>(opts.p0.size()) == opts.n, "p0 length must equal n");
  Vector p(opts.n);
  for (int i = 0; i < opts.n; ++i) p[i] = opts.p0[static_cast<size_t>(i)];
  return ProbabilityVector{p};
}

} // namespace

int cmd_generate(const GenerateOptions& opts, const std::string& out_path, std::ostream& out,
                 std::ostream& err) {
  try {
    require(opts.n >= 1, "generate: n must be at least 1");
    require(opts.n <= max_n_stochastic(),
            "generate: n exceeds the configuration cap (override with UNISTOQ_MAX_N)");

    StochasticSystem sys;
    if (opts.kind == "permutation") {
      require(!opts.times.empty(), "generate permutation: --times required");
      const PermutationSpec sigma(opts.n, parse_cycles(opts.cycles, opts.n));
      sys = permutation_unistochastic_system(sigma, TimeGrid(opts.times), opts.dt, default_p0(opts));
    } else if (opts.kind == "markov-chain") {
      require(static_cast<int>(opts.gamma.size()) == opts.n * opts.n,
              "generate markov-chain: --gamma needs n*n row-major entries");
      Matrix base(opts.n, opts.n);
      for (int i = 0; i < opts.n; ++i)
        for (int j = 0; j < opts.n; ++j)
          base(i, j) = opts.gamma[static_cast<size_t>(i * opts.n + j)];
      sys = markov_chain_system({base, opts.dt}, opts.steps, default_p0(opts));
    } else if (opts.kind == "rds") {
      require(!opts.times.empty(), "generate rds: --times required");
      require(opts.outcomes >= 1, "generate rds: --outcomes must be at least 1");
      const FiniteRDS rds = random_finite_rds(opts.n, TimeGrid(opts.times), opts.outcomes, opts.seed);
      sys = rds_to_stochastic_system(rds, default_p0(opts));
    } else if (opts.kind == "random") {
      require(!opts.times.empty(), "generate random: --times required");
      require(opts.p0.empty(), "generate random: p0 is drawn from the seed, drop --p0");
      sys = random_stochastic_system(opts.n, TimeGrid(opts.times), opts.seed);
    } else {
      require(false, "generate: unknown kind '" + opts.kind + "'");
    }

    const ValidationReport rep = validate_system(sys);
    if (!rep.ok()) {
      err << rep.to_string();
      return exit_invalid;
    }
    emit(out_path, serialize_document(document_from_system(sys)), out);
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return exit_invalid;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return exit_invalid;
  }
  return exit_ok;
}

} // namespace unistoq::cli
