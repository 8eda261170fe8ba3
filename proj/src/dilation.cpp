#include "unistoq/dilation.hpp"

#include <cmath>

#include "unistoq/numerics.hpp"

namespace unistoq {

PartialIsometry build_partial_isometry(const KrausSet& kraus) {
  const int n = kraus.dim();
  require(n > 0, "build_partial_isometry: empty Kraus set");
  require(static_cast<int>(kraus.operators.size()) == n,
          "build_partial_isometry: one operator per configuration required");
  for (const CMatrix& k : kraus.operators)
    require(k.rows() == n && k.cols() == n, "build_partial_isometry: operator shape mismatch");

  PartialIsometry v;
  v.n = n;
  v.time_label = kraus.time_label;
  v.entries = CMatrix::Zero(n * n * n, n * n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      const int col = PartialIsometry::col_index(j, l, n);
      // delta_{lm} pins the internal index, so only m = l rows are touched
      for (int beta = 0; beta < n; ++beta)
        for (int i = 0; i < n; ++i)
          v.entries(PartialIsometry::row_index(i, beta, l, n), col) = kraus.operators[static_cast<size_t>(beta)](i, j);
    }
  return v;
}

DilatedUnitary complete_to_unitary(const PartialIsometry& v) {
  const int n = v.n;
  const int total = n * n * n;
  const int placed_count = n * n;
  require(v.entries.rows() == total && v.entries.cols() == placed_count,
          "complete_to_unitary: isometry shape mismatch");
  require(num::identity_defect(CMatrix(v.entries.adjoint() * v.entries)) <= 1e-10,
          "complete_to_unitary: columns are not orthonormal");

  DilatedUnitary u;
  u.n = n;
  u.time_label = v.time_label;
  u.entries = CMatrix::Zero(total, total);

  std::vector<bool> occupied(static_cast<size_t>(total), false);
  std::vector<int> basis; // columns to orthogonalize against, in insertion order
  basis.reserve(static_cast<size_t>(total));
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      const int pos = DilatedUnitary::placed_column(j, l, n);
      u.entries.col(pos) = v.entries.col(PartialIsometry::col_index(j, l, n));
      occupied[static_cast<size_t>(pos)] = true;
      basis.push_back(pos);
    }

  std::vector<int> open;
  open.reserve(static_cast<size_t>(total - placed_count));
  for (int pos = 0; pos < total; ++pos)
    if (!occupied[static_cast<size_t>(pos)]) open.push_back(pos);

  size_t next_open = 0;
  for (int cand = 0; cand < total && next_open < open.size(); ++cand) {
    CVector w = CVector::Zero(total);
    w[cand] = Complex(1.0, 0.0);
    for (int pass = 0; pass < 2; ++pass)
      for (int idx : basis) {
        const Complex coeff = u.entries.col(idx).dot(w);
        w -= u.entries.col(idx) * coeff;
      }
    const double norm = w.norm();
    if (norm < tol::completion_survival) continue;
    w /= norm;
    const int pos = open[next_open++];
    u.entries.col(pos) = w;
    occupied[static_cast<size_t>(pos)] = true;
    basis.push_back(pos);
  }
  if (next_open < open.size())
    throw std::runtime_error("complete_to_unitary: candidates exhausted before the basis was "
                             "complete; input is not an isometry");
  return u;
}

Matrix dilated_transition_matrix(const DilatedUnitary& u) { return u.entries.cwiseAbs2(); }

double dilated_dictionary_probability(const DilatedUnitary& u, int i, int j, int jp) {
  const int n = u.n;
  const int anc = n * n;
  require(i >= 0 && i < n && j >= 0 && j < n, "dilated_dictionary_probability: index out of range");
  require(jp >= 0 && jp < anc, "dilated_dictionary_probability: ancilla index out of range");
  const int col = j * anc + jp;
  double total = 0.0;
  for (int ip = 0; ip < anc; ++ip) total += std::norm(u.entries(i * anc + ip, col));
  return total;
}

DilatedSystem dilate_system(const StochasticSystem& sys, const std::map<double, Matrix>* phases) {
  require(validate_system(sys).ok(), "dilate_system: system fails validation");
  const int n = sys.n;
  const int anc = n * n;

  DilatedSystem out;
  out.n = n;
  out.grid = sys.grid;
  const int nt = sys.grid.size();
  out.unitaries.reserve(static_cast<size_t>(nt));
  out.transitions.reserve(static_cast<size_t>(nt));
  out.p_tilde.reserve(static_cast<size_t>(nt));

  for (int k = 0; k < nt; ++k) {
    const double t = sys.grid.at(k);
    std::optional<Matrix> phase;
    if (phases) {
      auto it = phases->find(t);
      if (it != phases->end()) phase = it->second;
    }
    const EvolutionOperator theta = build_evolution_operator(sys.transitions[static_cast<size_t>(k)], phase);
    const KrausSet kraus = kraus_from_evolution(theta);
    const DilatedUnitary u = complete_to_unitary(build_partial_isometry(kraus));
    Matrix gt = dilated_transition_matrix(u);

    Vector p_tilde = Vector::Zero(n * anc);
    for (int j = 0; j < n; ++j)
      p_tilde += gt.col(j * anc + out.anchor(j)) * sys.p0.entries[j];

    out.unitaries.push_back(u);
    out.transitions.push_back(std::move(gt));
    out.p_tilde.push_back(std::move(p_tilde));
  }
  return out;
}

double verify_marginalization(const DilatedSystem& dilated, const StochasticSystem& sys) {
  require(dilated.n == sys.n, "verify_marginalization: dimension mismatch");
  require(dilated.grid.times() == sys.grid.times(), "verify_marginalization: grid mismatch");
  const int n = sys.n;
  const int anc = dilated.ancilla_dim();
  double worst = 0.0;
  for (int k = 0; k < sys.grid.size(); ++k) {
    const Matrix& gt = dilated.transitions[static_cast<size_t>(k)];
    const Matrix& g = sys.transitions[static_cast<size_t>(k)].entries;
    for (int j = 0; j < n; ++j) {
      const int col = j * anc + dilated.anchor(j);
      for (int i = 0; i < n; ++i) {
        const double marg = gt.col(col).segment(i * anc, anc).sum();
        worst = std::max(worst, std::abs(marg - g(i, j)));
      }
    }
  }
  return worst;
}

std::pair<ProbabilityVector, Vector> subsystem_marginals(const DilatedSystem& dilated, double t) {
  const int k = dilated.grid.require_index(t);
  const Vector& pt = dilated.p_tilde.at(static_cast<size_t>(k));
  const int n = dilated.n;
  const int anc = dilated.ancilla_dim();
  Vector p = Vector::Zero(n);
  Vector pp = Vector::Zero(anc);
  for (int i = 0; i < n; ++i)
    for (int ip = 0; ip < anc; ++ip) {
      const double w = pt[i * anc + ip];
      p[i] += w;
      pp[ip] += w;
    }
  return {ProbabilityVector{p}, pp};
}

} // namespace unistoq
