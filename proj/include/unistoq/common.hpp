#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace unistoq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

// Tolerance tiers. Structural identities (e.g. the transition at time 0 being
// the identity) are checked exactly and have no constant here.
namespace tol {
inline constexpr double stochastic = 1e-10;        // column/row sums, probability sums after evolution
inline constexpr double entry_bounds = 1e-12;      // probabilities and matrix entries vs [0, 1]
inline constexpr double arithmetic = 1e-12;        // algebraic identities between computed quantities
inline constexpr double dictionary = 1e-13;        // |Theta_ij|^2 vs the trace formula
inline constexpr double imag_residue = 1e-14;      // imaginary parts of provably-real scalars
inline constexpr double divis_feasible = 1e-6;     // Frobenius residual for a divisibility witness
inline constexpr double search_success = 1e-8;     // alternating-projection set distances
inline constexpr double polar_convergence = 1e-12; // Newton polar iteration step size
inline constexpr double completion_survival = 1e-6;// Gram-Schmidt residual norm to keep a candidate
inline constexpr double eigen_floor = -1e-10;      // smallest admissible density-matrix eigenvalue
}

inline constexpr int default_max_n = 32;  // stochastic operations
inline constexpr int dilation_max_n = 12; // dilation blows up as N^3

// Precondition violations (bad arguments, unknown grid times).
inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Internal consistency checks that must hold when the code is correct,
// e.g. imaginary residues on provably-real outputs. Failing one is a bug.
inline void check_internal(bool cond, const std::string& msg) {
  if (!cond) throw std::logic_error(msg);
}

} // namespace unistoq
