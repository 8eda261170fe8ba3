#include "unistoq/hilbert.hpp"

#include <cmath>

#include "unistoq/numerics.hpp"

namespace unistoq {

CMatrix configuration_projector(int i, int n) {
  require(n > 0 && i >= 0 && i < n, "configuration_projector: index out of range");
  CVector e = CVector::Zero(n);
  e[i] = Complex(1.0, 0.0);
  return e * e.adjoint();
}

CMatrix ObservableMatrix::as_matrix() const {
  const auto n = diagonal.size();
  CMatrix a = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = Complex(diagonal[i], 0.0);
  return a;
}

EvolutionOperator build_evolution_operator(const TransitionMatrix& g,
                                           const std::optional<Matrix>& phases) {
  const auto n = g.entries.rows();
  require(g.entries.cols() == n && n > 0, "evolution operator: square transition required");
  if (phases) {
    require(phases->rows() == n && phases->cols() == n,
            "evolution operator: phase table shape mismatch");
    if (g.time_label == 0.0)
      require(phases->cwiseAbs().maxCoeff() == 0.0,
              "evolution operator: nonzero phases at time 0");
  }

  CMatrix theta(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double gij = g.entries(i, j);
      require(gij >= -tol::entry_bounds, "evolution operator: negative transition entry");
      const double mod = std::sqrt(std::max(gij, 0.0));
      theta(i, j) = phases ? std::polar(mod, (*phases)(i, j)) : Complex(mod, 0.0);
    }
  return EvolutionOperator{theta, g.time_label};
}

namespace {

double real_of(const Complex& z, const char* what) {
  check_internal(std::abs(z.imag()) <= tol::imag_residue, std::string(what) +
                                                              ": imaginary residue above 1e-14");
  return z.real();
}

} // namespace

double dictionary_probability(const EvolutionOperator& theta, int i, int j) {
  const int n = static_cast<int>(theta.entries.rows());
  require(i >= 0 && i < n && j >= 0 && j < n, "dictionary_probability: index out of range");
  const CMatrix pi = configuration_projector(i, n);
  const CMatrix pj = configuration_projector(j, n);
  const Complex tr = (theta.entries.adjoint() * pi * theta.entries * pj).trace();
  return real_of(tr, "dictionary_probability");
}

DensityMatrix initial_density(const ProbabilityVector& p0) {
  const int n = p0.size();
  require(n > 0, "initial_density: empty distribution");
  CMatrix rho = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) rho(i, i) = Complex(p0.entries[i], 0.0);
  return DensityMatrix{rho, 0.0};
}

DensityMatrix evolve_density(const EvolutionOperator& theta, const DensityMatrix& rho0) {
  require(theta.entries.rows() == rho0.entries.rows() &&
              theta.entries.cols() == rho0.entries.cols(),
          "evolve_density: dimension mismatch");
  return DensityMatrix{theta.entries * rho0.entries * theta.entries.adjoint(), theta.time_label};
}

double born_probability(const DensityMatrix& rho, int i) {
  const int n = static_cast<int>(rho.entries.rows());
  require(i >= 0 && i < n, "born_probability: index out of range");
  const CMatrix pi = configuration_projector(i, n);
  const double p = real_of((pi * rho.entries).trace(), "born_probability");
  check_internal(p >= -tol::stochastic && p <= 1.0 + tol::stochastic,
                 "born_probability: probability outside [0, 1] beyond tolerance");
  return std::clamp(p, 0.0, 1.0);
}

double kraus_dictionary_probability(const KrausSet& kraus, int i, int j) {
  const int n = kraus.dim();
  require(i >= 0 && i < n && j >= 0 && j < n, "kraus_dictionary_probability: index out of range");
  const CMatrix pi = configuration_projector(i, n);
  const CMatrix pj = configuration_projector(j, n);
  Complex total(0.0, 0.0);
  for (const CMatrix& k : kraus.operators) total += (k.adjoint() * pi * k * pj).trace();
  return real_of(total, "kraus_dictionary_probability");
}

ObservableMatrix observable_matrix(const RandomVariable& a, const TimeGrid& grid, double t) {
  const int k = grid.require_index(t);
  require(a.magnitudes.cols() == grid.size(), "observable_matrix: variable not on this grid");
  return ObservableMatrix{a.magnitudes.col(k), t};
}

double expectation_trace(const ObservableMatrix& a, const DensityMatrix& rho) {
  require(a.diagonal.size() == rho.entries.rows(), "expectation_trace: dimension mismatch");
  return real_of((a.as_matrix() * rho.entries).trace(), "expectation_trace");
}

KrausSet kraus_from_evolution(const EvolutionOperator& theta) {
  const int n = static_cast<int>(theta.entries.rows());
  require(n > 0, "kraus_from_evolution: empty operator");
  KrausSet out;
  out.time_label = theta.time_label;
  out.operators.reserve(static_cast<size_t>(n));
  for (int beta = 0; beta < n; ++beta)
    out.operators.push_back(theta.entries * configuration_projector(beta, n));
  return out;
}

CMatrix apply_channel(const KrausSet& kraus, const CMatrix& x) {
  const int n = kraus.dim();
  require(n > 0 && x.rows() == n && x.cols() == n, "apply_channel: dimension mismatch");
  CMatrix out = CMatrix::Zero(n, n);
  for (const CMatrix& k : kraus.operators) out += k * x * k.adjoint();
  return out;
}

CVector classical_wavefunction(const ProbabilityVector& p, const std::optional<Vector>& phases) {
  const int n = p.size();
  require(n > 0, "classical_wavefunction: empty distribution");
  if (phases) require(phases->size() == n, "classical_wavefunction: phase vector length mismatch");
  CVector psi(n);
  for (int i = 0; i < n; ++i) {
    const double pi = p.entries[i];
    require(pi >= -tol::entry_bounds, "classical_wavefunction: negative probability");
    const double mod = std::sqrt(std::max(pi, 0.0));
    psi[i] = phases ? std::polar(mod, (*phases)[i]) : Complex(mod, 0.0);
  }
  return psi;
}

ValidationReport validate_density(const DensityMatrix& rho) {
  ValidationReport rep;
  const double asym = num::max_abs(CMatrix(rho.entries - rho.entries.adjoint()));
  if (asym > tol::arithmetic) rep.add("self-adjointness", "rho", asym);
  const Complex tr = rho.entries.trace();
  const double tr_dev = std::abs(tr - Complex(1.0, 0.0));
  if (tr_dev > tol::arithmetic) rep.add("unit trace", "rho", tr_dev);
  const double lo = num::smallest_hermitian_eigenvalue(rho.entries);
  if (lo < tol::eigen_floor) rep.add("positivity", "rho", -lo);
  return rep;
}

} // namespace unistoq
