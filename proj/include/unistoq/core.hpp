#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "unistoq/common.hpp"

namespace unistoq {

// Finite set of real times, strictly increasing, always containing 0.
// Lookups use exact floating-point equality; producers and consumers must
// agree bit-for-bit on time values.
class TimeGrid {
public:
  TimeGrid() : times_{0.0} {}
  explicit TimeGrid(std::vector<double> times);

  int size() const { return static_cast<int>(times_.size()); }
  double at(int k) const { return times_.at(static_cast<size_t>(k)); }
  int zero_index() const { return zero_index_; }
  const std::vector<double>& times() const { return times_; }

  std::optional<int> index_of(double t) const;
  // exact lookup that throws naming the missing point
  int require_index(double t) const;

private:
  std::vector<double> times_;
  int zero_index_ = 0;
};

// Probability distribution over configurations; nonnegative entries summing
// to 1. Kept as plain data so invalid candidates can be built and validated.
struct ProbabilityVector {
  Vector entries;
  int size() const { return static_cast<int>(entries.size()); }
};

// Column-stochastic matrix tagged with the time it transports 0 -> t.
// Entry (i, j) is the conditional probability of configuration i at the
// labelled time given configuration j at time 0.
struct TransitionMatrix {
  Matrix entries;
  double time_label = 0.0;
};

// Dense magnitude table for one random variable: rows are configurations,
// columns follow the owning system's grid order.
struct RandomVariable {
  Matrix magnitudes;
};

// The full tuple: configuration count, time grid, one transition per grid
// time (same order), initial distribution, named random variables.
struct StochasticSystem {
  int n = 0;
  TimeGrid grid;
  std::vector<TransitionMatrix> transitions;
  ProbabilityVector p0;
  std::map<std::string, RandomVariable> variables;

  const TransitionMatrix& transition_at(double t) const;
};

struct Violation {
  std::string constraint;
  std::string location;
  double magnitude = 0.0;
};

class ValidationReport {
public:
  bool ok() const { return violations_.empty(); }
  const std::vector<Violation>& violations() const { return violations_; }
  void add(std::string constraint, std::string location, double magnitude);
  void merge(const ValidationReport& other);
  std::string to_string() const;

private:
  std::vector<Violation> violations_;
};

// Checks every defining constraint and reports all violations instead of
// stopping at the first: p0 shape/bounds/normalization, per-time transition
// presence/shape/bounds/column sums, the exact identity at time 0, and
// variable table coverage.
ValidationReport validate_system(const StochasticSystem& sys);

// p(t) = Gamma(t) p(0). t must be a grid time (exact match).
ProbabilityVector evolve_probabilities(const StochasticSystem& sys, double t);

// <A(t)> = sum_i a_i(t) p_i(t)
double expectation(const StochasticSystem& sys, const RandomVariable& a, double t);
double expectation(const StochasticSystem& sys, const std::string& variable, double t);

} // namespace unistoq
