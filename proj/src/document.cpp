#include "unistoq/document.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include <json.hpp>

namespace unistoq {

using nlohmann::ordered_json;

std::string format_time_key(double t) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), t);
  return std::string(buf, res.ptr);
}

namespace {

double parse_time_key(const std::string& key) {
  const char* begin = key.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end != begin + key.size() || key.empty() || !std::isfinite(value))
    throw ParseError("time key '" + key + "' is not a decimal number");
  return value;
}

const ordered_json& field(const ordered_json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string("missing field '") + name + "'");
  return *it;
}

Matrix parse_matrix(const ordered_json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected an array of rows");
  const size_t rows = j.size();
  size_t cols = 0;
  Matrix m;
  for (size_t r = 0; r < rows; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || row.empty())
      throw ParseError(where + " row " + std::to_string(r) + ": expected an array of numbers");
    if (r == 0) {
      cols = row.size();
      m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    } else if (row.size() != cols) {
      throw ParseError(where + " row " + std::to_string(r) + ": ragged matrix");
    }
    for (size_t c = 0; c < cols; ++c) {
      if (!row[c].is_number())
        throw ParseError(where + "[" + std::to_string(r) + "][" + std::to_string(c) +
                         "]: expected a number");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c].get<double>();
    }
  }
  return m;
}

Vector parse_vector(const ordered_json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw ParseError(where + "[" + std::to_string(i) + "]: expected a number");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json vector_to_json(const Vector& v) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

} // namespace

SystemDocument parse_document(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what()); // includes the byte position
  }
  if (!j.is_object()) throw ParseError("document root must be an object");

  SystemDocument doc;
  const auto& jn = field(j, "n");
  if (!jn.is_number_integer()) throw ParseError("'n' must be an integer");
  doc.n = jn.get<int>();

  const auto& jt = field(j, "times");
  if (!jt.is_array()) throw ParseError("'times' must be an array of numbers");
  for (size_t k = 0; k < jt.size(); ++k) {
    if (!jt[k].is_number()) throw ParseError("times[" + std::to_string(k) + "]: expected a number");
    doc.times.push_back(jt[k].get<double>());
  }

  const auto& jg = field(j, "gamma");
  if (!jg.is_object()) throw ParseError("'gamma' must be an object keyed by time");
  for (auto it = jg.begin(); it != jg.end(); ++it) {
    const double t = parse_time_key(it.key());
    if (doc.gamma.count(t)) throw ParseError("duplicate gamma time key '" + it.key() + "'");
    doc.gamma.emplace(t, parse_matrix(it.value(), "gamma['" + it.key() + "']"));
  }

  doc.p0 = parse_vector(field(j, "p0"), "p0");

  if (auto it = j.find("variables"); it != j.end()) {
    if (!it->is_object()) throw ParseError("'variables' must be an object keyed by name");
    for (auto vit = it->begin(); vit != it->end(); ++vit) {
      if (!vit.value().is_object())
        throw ParseError("variable '" + vit.key() + "' must be an object keyed by time");
      auto& table = doc.variables[vit.key()];
      for (auto tit = vit.value().begin(); tit != vit.value().end(); ++tit) {
        const double t = parse_time_key(tit.key());
        if (table.count(t))
          throw ParseError("duplicate time key '" + tit.key() + "' in variable '" + vit.key() + "'");
        table.emplace(t, parse_vector(tit.value(), "variables['" + vit.key() + "']['" + tit.key() + "']"));
      }
    }
  }

  if (auto it = j.find("phases"); it != j.end()) {
    if (!it->is_object()) throw ParseError("'phases' must be an object keyed by time");
    for (auto pit = it->begin(); pit != it->end(); ++pit) {
      const double t = parse_time_key(pit.key());
      if (doc.phases.count(t)) throw ParseError("duplicate phases time key '" + pit.key() + "'");
      doc.phases.emplace(t, parse_matrix(pit.value(), "phases['" + pit.key() + "']"));
    }
  }
  return doc;
}

SystemDocument read_document_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

LoadResult load_system(const SystemDocument& doc) {
  LoadResult res;
  ValidationReport& rep = res.report;

  if (doc.n < 1) {
    rep.add("configuration count", "n", static_cast<double>(doc.n));
    return res;
  }

  std::optional<TimeGrid> grid;
  try {
    grid.emplace(doc.times);
  } catch (const std::invalid_argument& e) {
    rep.add("time grid", e.what(), 0.0);
    return res;
  }

  bool structural = true;
  for (const auto& [t, g] : doc.gamma) {
    if (!grid->index_of(t)) {
      rep.add("transition time", "gamma key " + format_time_key(t) + " is not in times", t);
      structural = false;
    } else if (g.rows() != doc.n || g.cols() != doc.n) {
      rep.add("transition shape", "gamma(" + format_time_key(t) + ")",
              static_cast<double>(std::max(g.rows(), g.cols())));
      structural = false;
    }
  }
  for (double t : doc.times)
    if (!doc.gamma.count(t)) {
      rep.add("missing transition", "gamma(" + format_time_key(t) + ")", 0.0);
      structural = false;
    }

  if (doc.p0.size() != doc.n) {
    rep.add("p0 length", "p0", static_cast<double>(doc.p0.size()));
    structural = false;
  }

  for (const auto& [name, table] : doc.variables) {
    for (const auto& [t, column] : table) {
      if (!grid->index_of(t)) {
        rep.add("variable time", name + " key " + format_time_key(t) + " is not in times", t);
        structural = false;
      } else if (column.size() != doc.n) {
        rep.add("variable shape", name + "(" + format_time_key(t) + ")",
                static_cast<double>(column.size()));
        structural = false;
      }
    }
    for (double t : doc.times)
      if (!table.count(t)) {
        rep.add("variable coverage", name + "(" + format_time_key(t) + ")", 0.0);
        structural = false;
      }
  }

  for (const auto& [t, phi] : doc.phases) {
    if (!grid->index_of(t)) {
      rep.add("phase time", "phases key " + format_time_key(t) + " is not in times", t);
      structural = false;
    } else if (phi.rows() != doc.n || phi.cols() != doc.n) {
      rep.add("phase shape", "phases(" + format_time_key(t) + ")",
              static_cast<double>(std::max(phi.rows(), phi.cols())));
      structural = false;
    } else if (t == 0.0 && phi.cwiseAbs().maxCoeff() != 0.0) {
      rep.add("phase at time zero", "phases(0)", phi.cwiseAbs().maxCoeff());
      structural = false;
    }
  }

  if (!structural) return res;

  StochasticSystem sys;
  sys.n = doc.n;
  sys.grid = *grid;
  sys.p0.entries = doc.p0;
  for (double t : doc.times) sys.transitions.push_back({doc.gamma.at(t), t});
  for (const auto& [name, table] : doc.variables) {
    RandomVariable var;
    var.magnitudes.resize(doc.n, grid->size());
    for (int k = 0; k < grid->size(); ++k)
      var.magnitudes.col(k) = table.at(grid->at(k));
    sys.variables.emplace(name, std::move(var));
  }
  res.phases = doc.phases;
  rep.merge(validate_system(sys));
  res.system = std::move(sys);
  return res;
}

SystemDocument document_from_system(const StochasticSystem& sys,
                                    const std::map<double, Matrix>& phases) {
  SystemDocument doc;
  doc.n = sys.n;
  doc.times = sys.grid.times();
  for (const TransitionMatrix& g : sys.transitions) doc.gamma.emplace(g.time_label, g.entries);
  doc.p0 = sys.p0.entries;
  for (const auto& [name, var] : sys.variables) {
    auto& table = doc.variables[name];
    for (int k = 0; k < sys.grid.size(); ++k) table.emplace(sys.grid.at(k), var.magnitudes.col(k));
  }
  doc.phases = phases;
  return doc;
}

std::string serialize_document(const SystemDocument& doc) {
  ordered_json j;
  j["n"] = doc.n;
  j["times"] = doc.times;
  ordered_json gamma = ordered_json::object();
  for (const auto& [t, g] : doc.gamma) gamma[format_time_key(t)] = matrix_to_json(g);
  j["gamma"] = std::move(gamma);
  j["p0"] = vector_to_json(doc.p0);
  if (!doc.variables.empty()) {
    ordered_json vars = ordered_json::object();
    for (const auto& [name, table] : doc.variables) {
      ordered_json vt = ordered_json::object();
      for (const auto& [t, column] : table) vt[format_time_key(t)] = vector_to_json(column);
      vars[name] = std::move(vt);
    }
    j["variables"] = std::move(vars);
  }
  if (!doc.phases.empty()) {
    ordered_json ph = ordered_json::object();
    for (const auto& [t, phi] : doc.phases) ph[format_time_key(t)] = matrix_to_json(phi);
    j["phases"] = std::move(ph);
  }
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(static_cast<unsigned long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

} // namespace unistoq
