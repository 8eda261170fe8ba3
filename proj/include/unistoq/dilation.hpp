#pragma once

#include <map>
#include <vector>

#include "unistoq/core.hpp"
#include "unistoq/hilbert.hpp"

namespace unistoq {

// Index conventions for the dilated space of size N^3: a row is the triple
// (i, beta, m) flattened as (i*N + beta)*N + m; the ancilla pair (beta, m)
// alone flattens as beta*N + m. Isometry columns are pairs (j, l) flattened
// as j*N + l.

// V with V_{(i beta m),(j l)} = K_{beta,ij} delta_{lm}; satisfies
// V^dagger V = I_{N^2}.
struct PartialIsometry {
  CMatrix entries; // N^3 x N^2
  double time_label = 0.0;
  int n = 0;

  static int row_index(int i, int beta, int m, int n) { return (i * n + beta) * n + m; }
  static int col_index(int j, int l, int n) { return j * n + l; }
};

// Unitary completion of V on the N^3 space. Isometry column (j, l) sits at
// full column (j, beta = j, m = l); the anchor of source j is the ancilla
// index of its l = 0 placed column.
struct DilatedUnitary {
  CMatrix entries; // N^3 x N^3
  double time_label = 0.0;
  int n = 0;

  static int placed_column(int j, int l, int n) { return (j * n + j) * n + l; }
  static int anchor(int j, int n) { return j * n; }
  int total_dim() const { return n * n * n; }
};

// The dilated system: unistochastic transitions Gamma~ = |U~|^2 on N^3
// configurations, with the joint distribution read off at the anchored
// columns.
struct DilatedSystem {
  int n = 0;
  TimeGrid grid;
  std::vector<DilatedUnitary> unitaries;
  std::vector<Matrix> transitions;  // one per grid time
  std::vector<Vector> p_tilde;      // length N^3 per grid time

  int ancilla_dim() const { return n * n; }
  int total_dim() const { return n * n * n; }
  int anchor(int j) const { return DilatedUnitary::anchor(j, n); }
};

PartialIsometry build_partial_isometry(const KrausSet& kraus);

// Places the isometry columns, then fills the remaining N^3 - N^2 columns by
// double-pass modified Gram-Schmidt over the standard basis candidates
// e_1..e_{N^3} in ascending order, keeping a candidate when its residual
// norm stays >= 1e-6 and assigning survivors to unplaced positions in
// ascending order. For Theta(0) = I this reproduces the identity exactly.
DilatedUnitary complete_to_unitary(const PartialIsometry& v);

// Gamma~ = |U~|^2 entrywise (unistochastic by construction)
Matrix dilated_transition_matrix(const DilatedUnitary& u);

// sum over the ancilla of Gamma~_{(i i'),(j jp)} by explicit summation.
// Equals Gamma_ij(t) whenever jp is one of j's anchored indices.
double dilated_dictionary_probability(const DilatedUnitary& u, int i, int j, int jp);

// Full pipeline at every grid time: Theta -> Kraus -> isometry -> unitary
// completion -> Gamma~, plus the dilated distribution
// p~_{ii'}(t) = sum_j Gamma~_{(i i'),(j, anchor(j))}(t) p_j(0).
DilatedSystem dilate_system(const StochasticSystem& sys,
                            const std::map<double, Matrix>* phases = nullptr);

// max over (t, i, j) of |sum_{i'} Gamma~_{(i i'),(j, anchor(j))}(t) - Gamma_ij(t)|
double verify_marginalization(const DilatedSystem& dilated, const StochasticSystem& sys);

// system marginal p_i = sum_{i'} p~_{ii'} and ancilla marginal
// p'_{i'} = sum_i p~_{ii'} at one grid time
std::pair<ProbabilityVector, Vector> subsystem_marginals(const DilatedSystem& dilated, double t);

} // namespace unistoq
