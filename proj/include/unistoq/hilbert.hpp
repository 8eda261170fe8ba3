#pragma once

#include <optional>
#include <vector>

#include "unistoq/core.hpp"

namespace unistoq {

// Theta(t) with entries sqrt(Gamma_ij(t)) exp(i phi_ij(t)). Columns have
// unit norm whenever Gamma is column-stochastic; Theta(0) is the identity.
struct EvolutionOperator {
  CMatrix entries;
  double time_label = 0.0;
};

// rank-one diagonal projector e_i e_i^dagger
CMatrix configuration_projector(int i, int n);

struct DensityMatrix {
  CMatrix entries;
  double time_label = 0.0;
};

// One operator per destination configuration; K_beta = Theta P_beta is
// nonzero only in column beta and the set satisfies sum K^dagger K = I.
struct KrausSet {
  std::vector<CMatrix> operators;
  double time_label = 0.0;
  int dim() const { return operators.empty() ? 0 : static_cast<int>(operators[0].rows()); }
};

// Diagonal observable carrying the magnitudes of one random variable at a
// fixed time.
struct ObservableMatrix {
  Vector diagonal;
  double time_label = 0.0;
  CMatrix as_matrix() const;
};

// phases, when supplied, must match Gamma's shape; at time 0 they must be
// absent or identically zero. Entries of Gamma below -1e-12 are rejected,
// tiny negatives from roundoff are clamped to 0 before the square root.
EvolutionOperator build_evolution_operator(const TransitionMatrix& g,
                                           const std::optional<Matrix>& phases = std::nullopt);

// Gamma_ij(t) = tr(Theta^dagger P_i Theta P_j), evaluated literally by
// building both projectors and tracing the product. Provably real; the
// imaginary residue is checked <= 1e-14 and discarded.
double dictionary_probability(const EvolutionOperator& theta, int i, int j);

// rho(0) = diag(p0)
DensityMatrix initial_density(const ProbabilityVector& p0);

// rho(t) = Theta rho(0) Theta^dagger
DensityMatrix evolve_density(const EvolutionOperator& theta, const DensityMatrix& rho0);

// p_i(t) = tr(P_i rho(t)), literal trace, clamped to [0, 1] after the
// bounds are verified within 1e-10.
double born_probability(const DensityMatrix& rho, int i);

// sum_beta tr(K_beta^dagger P_i K_beta P_j); equals the dictionary entry.
double kraus_dictionary_probability(const KrausSet& kraus, int i, int j);

ObservableMatrix observable_matrix(const RandomVariable& a, const TimeGrid& grid, double t);

// <A> = tr(A rho)
double expectation_trace(const ObservableMatrix& a, const DensityMatrix& rho);

// K_beta(t) = Theta(t) P_beta
KrausSet kraus_from_evolution(const EvolutionOperator& theta);

// E_t(X) = sum_beta K_beta X K_beta^dagger
CMatrix apply_channel(const KrausSet& kraus, const CMatrix& x);

// Psi_i = sqrt(p_i) exp(i phi_i)
CVector classical_wavefunction(const ProbabilityVector& p,
                               const std::optional<Vector>& phases = std::nullopt);

// Self-adjointness, unit trace, and eigenvalue floor (cyclic Jacobi) of a
// density matrix; returns the worst violation magnitude per constraint.
ValidationReport validate_density(const DensityMatrix& rho);

} // namespace unistoq
