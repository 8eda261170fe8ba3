#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "unistoq/core.hpp"

namespace unistoq {

struct DivisibilityReport {
  bool feasible = false;
  Matrix witness;       // column-stochastic X minimizing |X G(t') - G(t)|_F
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> residual_trace; // one entry per iterate, non-increasing
};

enum class Verdict { yes, no, unknown };

struct UnistochasticityResult {
  Verdict verdict = Verdict::unknown;
  std::optional<CMatrix> witness; // unitary with |U_ij|^2 = M_ij when verdict == yes
  double defect = 0.0;            // max_ij | |U_ij|^2 - M_ij | of the best candidate
};

// max-entry residual of Gamma(t) = Gamma(t'') Gamma(t')
double check_markov_triple(const TransitionMatrix& g_t, const TransitionMatrix& g_tp,
                           const TransitionMatrix& g_tpp);

// For every n >= 0 with n*dt on the grid, the max-entry residual between the
// stored Gamma(n dt) and the n-th power of Gamma(dt).
std::vector<std::pair<int, double>> check_markov_chain(const StochasticSystem& sys, double dt);

// Projected gradient descent for min_X 0.5 |X G(t') - G(t)|_F^2 over
// column-stochastic X: fixed step 1/L with L the squared spectral norm of
// G(t'), columns projected onto the probability simplex each step.
// Feasible when the final Frobenius residual is <= 1e-6.
DivisibilityReport solve_divisibility(const TransitionMatrix& g_t, const TransitionMatrix& g_tp,
                                      int max_iter = 20000);

// rows and columns sum to 1 within 1e-10, entries >= -1e-12
bool is_doubly_stochastic(const Matrix& m);

// Exact witness for a doubly stochastic 2x2 [[x, 1-x], [1-x, x]]:
// [[sqrt(x), -sqrt(1-x)], [sqrt(1-x), sqrt(x)]].
CMatrix unistochastic_witness_2x2(const Matrix& m);

// Exact 3x3 criterion: for each pair of rows (p, q) the link lengths
// r_k = sqrt(M_pk M_qk) must satisfy the triangle condition
// max_k r_k <= sum of the others (tolerance 1e-12). Row-pair and column-pair
// answers must agree; that agreement is asserted. A yes verdict carries a
// witness found by search_unistochastic.
UnistochasticityResult unistochastic_verdict_3x3(const Matrix& m);

// Alternating projection between {A : |A_ij| = sqrt(M_ij)} and the unitary
// group (polar factor via Newton). Restart 0 uses zero phases; subsequent
// restarts draw phases uniformly from [0, 2pi) with a per-restart engine
// seeded from (seed, restart). Yes when both set distances fall below 1e-8;
// otherwise unknown with the smallest defect seen (ties: lowest restart).
UnistochasticityResult search_unistochastic(const Matrix& m, int restarts = 20,
                                            int max_iter = 2000, std::uint64_t seed = 0);

} // namespace unistoq
