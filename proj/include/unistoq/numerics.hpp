#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "unistoq/common.hpp"

// Shared numerical kernels. Everything here is deterministic; randomized
// routines take the engine by reference so callers control seeding.
namespace unistoq::num {

// Euclidean projection onto the probability simplex {x : x >= 0, sum x = 1},
// sort-based pivot algorithm.
Vector project_to_simplex(const Vector& v);

// Largest eigenvalue of A^T A (squared spectral norm) by power iteration.
double spectral_norm_squared(const Matrix& a, int max_iter = 200);

// Unitary polar factor via the Newton iteration X <- (X + (X^dagger)^-1)/2.
// Returns nullopt when the input is singular or the iteration produces
// non-finite values.
std::optional<CMatrix> polar_unitary_factor(const CMatrix& a, int max_iter = 50,
                                            double step_tol = tol::polar_convergence);

// Eigenvalues of a Hermitian matrix by the cyclic complex Jacobi method,
// ascending order.
Vector hermitian_eigenvalues(const CMatrix& a);

double smallest_hermitian_eigenvalue(const CMatrix& a);

// Uniform double in (0, 1), built from the top 53 bits of the engine output
// so the stream is identical on every platform.
inline double uniform_unit(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

inline double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }
inline double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

// max-entry deviation from the identity, |A - I|_max
double identity_defect(const CMatrix& a);
double identity_defect(const Matrix& a);

// max over columns of |sum(column) - 1|
double column_sum_defect(const Matrix& a);

} // namespace unistoq::num
