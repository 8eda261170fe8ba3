#include "unistoq/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "unistoq/numerics.hpp"

namespace unistoq {

namespace {

std::string fmt_time(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

} // namespace

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  require(!times_.empty(), "time grid: at least one time required");
  for (size_t k = 0; k + 1 < times_.size(); ++k)
    require(times_[k] < times_[k + 1], "time grid: times must be strictly increasing");
  for (double t : times_) require(std::isfinite(t), "time grid: times must be finite");
  auto it = std::find(times_.begin(), times_.end(), 0.0);
  require(it != times_.end(), "time grid: the initial time 0 must be present");
  zero_index_ = static_cast<int>(it - times_.begin());
}

std::optional<int> TimeGrid::index_of(double t) const {
  for (size_t k = 0; k < times_.size(); ++k)
    if (times_[k] == t) return static_cast<int>(k);
  return std::nullopt;
}

int TimeGrid::require_index(double t) const {
  auto k = index_of(t);
  require(k.has_value(), "time " + fmt_time(t) + " is not a grid point");
  return *k;
}

const TransitionMatrix& StochasticSystem::transition_at(double t) const {
  const int k = grid.require_index(t);
  require(k < static_cast<int>(transitions.size()),
          "no transition stored for time " + fmt_time(t));
  const TransitionMatrix& g = transitions[static_cast<size_t>(k)];
  require(g.time_label == t, "transition at index " + std::to_string(k) +
                                 " is labelled " + fmt_time(g.time_label) +
                                 ", expected " + fmt_time(t));
  return g;
}

void ValidationReport::add(std::string constraint, std::string location, double magnitude) {
  violations_.push_back({std::move(constraint), std::move(location), magnitude});
}

void ValidationReport::merge(const ValidationReport& other) {
  violations_.insert(violations_.end(), other.violations_.begin(), other.violations_.end());
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const Violation& v : violations_) {
    os << v.constraint << ": " << v.location;
    os.precision(6);
    os << " magnitude=" << v.magnitude << "\n";
  }
  return os.str();
}

namespace {

void validate_distribution(const Vector& p, const std::string& where, ValidationReport& rep) {
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] < -tol::entry_bounds)
      rep.add("p0 entry bounds", where + "[" + std::to_string(i) + "]", -p[i]);
    else if (p[i] > 1.0 + tol::entry_bounds)
      rep.add("p0 entry bounds", where + "[" + std::to_string(i) + "]", p[i] - 1.0);
  }
  const double dev = std::abs(p.sum() - 1.0);
  if (dev > tol::entry_bounds) rep.add("p0 normalization", where, dev);
}

void validate_transition(const TransitionMatrix& g, int n, bool is_initial,
                         ValidationReport& rep) {
  const std::string where = "gamma(" + fmt_time(g.time_label) + ")";
  if (g.entries.rows() != n || g.entries.cols() != n) {
    rep.add("transition shape", where,
            static_cast<double>(std::max(g.entries.rows(), g.entries.cols())));
    return;
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double e = g.entries(i, j);
      if (e < -tol::entry_bounds || e > 1.0 + tol::entry_bounds)
        rep.add("entry bounds", where + "[" + std::to_string(i) + "," + std::to_string(j) + "]",
                e < 0.0 ? -e : e - 1.0);
    }
    const double dev = std::abs(g.entries.col(j).sum() - 1.0);
    if (dev > tol::stochastic)
      rep.add("column normalization", where + " column " + std::to_string(j), dev);
  }
  if (is_initial) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double want = i == j ? 1.0 : 0.0;
        if (g.entries(i, j) != want)
          rep.add("initial condition",
                  where + "[" + std::to_string(i) + "," + std::to_string(j) + "]",
                  std::abs(g.entries(i, j) - want));
      }
  }
}

} // namespace

ValidationReport validate_system(const StochasticSystem& sys) {
  ValidationReport rep;
  if (sys.n <= 0) {
    rep.add("configuration count", "n", static_cast<double>(sys.n));
    return rep;
  }

  if (sys.p0.size() != sys.n)
    rep.add("p0 length", "p0", static_cast<double>(sys.p0.size()));
  else
    validate_distribution(sys.p0.entries, "p0", rep);

  const int nt = sys.grid.size();
  for (int k = 0; k < nt; ++k) {
    const double t = sys.grid.at(k);
    if (k >= static_cast<int>(sys.transitions.size())) {
      rep.add("missing transition", "gamma(" + fmt_time(t) + ")", 0.0);
      continue;
    }
    const TransitionMatrix& g = sys.transitions[static_cast<size_t>(k)];
    if (g.time_label != t) {
      rep.add("transition time", "index " + std::to_string(k) + " labelled " + fmt_time(g.time_label),
              std::abs(g.time_label - t));
      continue;
    }
    validate_transition(g, sys.n, k == sys.grid.zero_index(), rep);
  }
  for (size_t k = sys.transitions.size(); k > static_cast<size_t>(nt); --k)
    rep.add("transition time", "surplus transition at index " + std::to_string(k - 1), 0.0);

  for (const auto& [name, var] : sys.variables)
    if (var.magnitudes.rows() != sys.n || var.magnitudes.cols() != nt)
      rep.add("variable coverage", name,
              static_cast<double>(var.magnitudes.rows() * var.magnitudes.cols()));

  return rep;
}

ProbabilityVector evolve_probabilities(const StochasticSystem& sys, double t) {
  const TransitionMatrix& g = sys.transition_at(t);
  require(g.entries.cols() == sys.p0.entries.size(),
          "evolve_probabilities: transition and p0 dimensions disagree");
  return ProbabilityVector{g.entries * sys.p0.entries};
}

double expectation(const StochasticSystem& sys, const RandomVariable& a, double t) {
  const int k = sys.grid.require_index(t);
  require(a.magnitudes.rows() == sys.n && a.magnitudes.cols() == sys.grid.size(),
          "expectation: variable table does not cover this system");
  const ProbabilityVector p = evolve_probabilities(sys, t);
  return a.magnitudes.col(k).dot(p.entries);
}

double expectation(const StochasticSystem& sys, const std::string& variable, double t) {
  auto it = sys.variables.find(variable);
  require(it != sys.variables.end(), "expectation: unknown variable '" + variable + "'");
  return expectation(sys, it->second, t);
}

} // namespace unistoq
