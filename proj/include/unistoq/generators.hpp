#pragma once

#include <cstdint>
#include <vector>

#include "unistoq/core.hpp"

namespace unistoq {

// Permutation of {0..n-1} given by disjoint cycles covering every index.
// (c_0 c_1 ... c_{L-1}) maps c_a to c_{a+1} and c_{L-1} back to c_0.
struct PermutationSpec {
  int n = 0;
  std::vector<std::vector<int>> cycles;

  PermutationSpec(int n, std::vector<std::vector<int>> cycles);
  int image(int j) const { return image_.at(static_cast<size_t>(j)); }
  Matrix matrix() const; // entries[image(j)][j] = 1

private:
  std::vector<int> image_;
};

// Random dynamical system over a finite sample space: weights w_omega and
// deterministic maps f_omega(state, time). Every map is the identity at
// time 0.
struct FiniteRDS {
  int n = 0;
  TimeGrid grid;
  struct Outcome {
    double weight = 0.0;
    Eigen::MatrixXi map; // (state, time index) -> state
  };
  std::vector<Outcome> outcomes;
};

// Sigma^{t/dt} through the analytic eigendecomposition: a cycle of length L
// contributes eigenvalues exp(2 pi i k / L) with Fourier eigenvectors on the
// cycle; fractional powers take the principal phase theta in (-pi, pi],
// so an even cycle's eigenvalue -1 maps to theta = pi.
CMatrix permutation_power_interpolation(const PermutationSpec& sigma, double t, double dt);

// Gamma(t) = |Sigma^{t/dt}|^2 entrywise over the grid; doubly stochastic at
// every time and exactly the identity at t = 0.
StochasticSystem permutation_unistochastic_system(const PermutationSpec& sigma,
                                                  const TimeGrid& grid, double dt,
                                                  const ProbabilityVector& p0);

// H with eigenvalues -theta_m/dt on the interpolation eigenvectors, so that
// exp(-i H t) reproduces Sigma^{t/dt}.
CMatrix hamiltonian_from_permutation(const PermutationSpec& sigma, double dt);

// Grid {0, dt, ..., steps*dt} with Gamma(n dt) the n-th power of the base
// matrix by repeated multiplication; dt is the base's time label.
StochasticSystem markov_chain_system(const TransitionMatrix& g_dt, int steps,
                                     const ProbabilityVector& p0);

// Gamma_ij(t) = total weight of outcomes mapping j to i at time t, summed in
// outcome order. Gamma(0) is the identity exactly because every map is.
StochasticSystem rds_to_stochastic_system(const FiniteRDS& rds, const ProbabilityVector& p0);

// Identity at 0; every other transition has i.i.d. positive uniform columns
// normalized to sum 1. Same seed, same system, bit for bit.
StochasticSystem random_stochastic_system(int n, const TimeGrid& grid, std::uint64_t seed);

// Seeded random instance: normalized positive uniform weights, identity maps
// at time 0, uniform random maps elsewhere.
FiniteRDS random_finite_rds(int n, const TimeGrid& grid, int outcomes, std::uint64_t seed);

} // namespace unistoq
