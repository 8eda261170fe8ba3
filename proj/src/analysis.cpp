#include "unistoq/analysis.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "unistoq/numerics.hpp"

namespace unistoq {

double check_markov_triple(const TransitionMatrix& g_t, const TransitionMatrix& g_tp,
                           const TransitionMatrix& g_tpp) {
  const auto n = g_t.entries.rows();
  require(g_t.entries.cols() == n && g_tp.entries.rows() == n && g_tp.entries.cols() == n &&
              g_tpp.entries.rows() == n && g_tpp.entries.cols() == n,
          "check_markov_triple: matching square matrices required");
  return num::max_abs(Matrix(g_t.entries - g_tpp.entries * g_tp.entries));
}

std::vector<std::pair<int, double>> check_markov_chain(const StochasticSystem& sys, double dt) {
  require(dt > 0.0, "check_markov_chain: dt must be positive");
  const int kdt = sys.grid.require_index(dt);
  const Matrix& base = sys.transitions.at(static_cast<size_t>(kdt)).entries;
  require(base.rows() == sys.n && base.cols() == sys.n,
          "check_markov_chain: transition shape mismatch");

  const double t_max = sys.grid.times().back();
  std::vector<std::pair<int, double>> out;
  Matrix power = Matrix::Identity(sys.n, sys.n);
  for (int n = 0;; ++n) {
    const double t = static_cast<double>(n) * dt;
    if (t > t_max) break;
    if (auto k = sys.grid.index_of(t)) {
      const Matrix& stored = sys.transitions.at(static_cast<size_t>(*k)).entries;
      out.emplace_back(n, num::max_abs(Matrix(stored - power)));
    }
    power = base * power;
  }
  return out;
}

DivisibilityReport solve_divisibility(const TransitionMatrix& g_t, const TransitionMatrix& g_tp,
                                      int max_iter) {
  const auto n = g_t.entries.rows();
  require(g_t.entries.cols() == n && g_tp.entries.rows() == n && g_tp.entries.cols() == n,
          "solve_divisibility: matching square matrices required");
  const Matrix& g = g_t.entries;
  const Matrix& gp = g_tp.entries;

  const double lip = num::spectral_norm_squared(gp);
  require(lip > 0.0, "solve_divisibility: zero factor matrix");
  const double step = 1.0 / lip;

  DivisibilityReport rep;
  Matrix x = Matrix::Identity(n, n);
  double resid = (x * gp - g).norm();
  rep.residual_trace.push_back(resid);

  for (int it = 0; it < max_iter; ++it) {
    const Matrix grad = (x * gp - g) * gp.transpose();
    Matrix y = x - step * grad;
    for (Eigen::Index j = 0; j < n; ++j) y.col(j) = num::project_to_simplex(y.col(j));
    const double r = (y * gp - g).norm();
    // the fixed 1/L step never increases the objective; equality or worse
    // means the numerical floor
    if (r >= resid) break;
    x = y;
    resid = r;
    rep.residual_trace.push_back(r);
    rep.iterations = it + 1;
    if (resid <= 1e-12) break;
  }

  rep.witness = x;
  rep.residual = resid;
  rep.feasible = resid <= tol::divis_feasible;
  return rep;
}

bool is_doubly_stochastic(const Matrix& m) {
  if (m.rows() != m.cols() || m.size() == 0) return false;
  if (m.minCoeff() < -tol::entry_bounds) return false;
  if (num::column_sum_defect(m) > tol::stochastic) return false;
  return num::column_sum_defect(m.transpose()) <= tol::stochastic;
}

CMatrix unistochastic_witness_2x2(const Matrix& m) {
  require(m.rows() == 2 && m.cols() == 2, "unistochastic_witness_2x2: 2x2 matrix required");
  require(is_doubly_stochastic(m), "unistochastic_witness_2x2: input is not doubly stochastic");
  const double x = std::clamp(m(0, 0), 0.0, 1.0);
  const double sx = std::sqrt(x);
  const double sy = std::sqrt(1.0 - x);
  CMatrix w(2, 2);
  w << Complex(sx, 0.0), Complex(-sy, 0.0), Complex(sy, 0.0), Complex(sx, 0.0);
  return w;
}

namespace {

// triangle condition on the link lengths of one row pair
struct LinkTest {
  bool pass = true;
  double excess = 0.0; // max_k r_k - sum of the others, positive when links cannot close
};

LinkTest link_test(const Matrix& m, int p, int q) {
  double r[3];
  for (int k = 0; k < 3; ++k)
    r[k] = std::sqrt(std::max(0.0, m(p, k)) * std::max(0.0, m(q, k)));
  LinkTest out;
  out.excess = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    const double excess = r[k] - (r[(k + 1) % 3] + r[(k + 2) % 3]);
    out.excess = std::max(out.excess, excess);
  }
  out.pass = out.excess <= tol::entry_bounds;
  return out;
}

LinkTest all_pairs(const Matrix& m) {
  LinkTest worst;
  worst.excess = -std::numeric_limits<double>::infinity();
  for (int p = 0; p < 3; ++p)
    for (int q = p + 1; q < 3; ++q) {
      const LinkTest lt = link_test(m, p, q);
      worst.pass = worst.pass && lt.pass;
      worst.excess = std::max(worst.excess, lt.excess);
    }
  return worst;
}

} // namespace

UnistochasticityResult unistochastic_verdict_3x3(const Matrix& m) {
  require(m.rows() == 3 && m.cols() == 3, "unistochastic_verdict_3x3: 3x3 matrix required");
  require(is_doubly_stochastic(m), "unistochastic_verdict_3x3: input is not doubly stochastic");

  const LinkTest rows = all_pairs(m);
  const LinkTest cols = all_pairs(m.transpose());
  check_internal(rows.pass == cols.pass,
                 "unistochastic_verdict_3x3: row-pair and column-pair criteria disagree");

  UnistochasticityResult out;
  if (!rows.pass) {
    out.verdict = Verdict::no;
    out.defect = rows.excess;
    return out;
  }

  // links close, so a witness exists; hunt until the search lands on it
  for (int round = 0; round < 3; ++round) {
    const UnistochasticityResult found =
        search_unistochastic(m, 20 << (2 * round), 2000 << round, static_cast<std::uint64_t>(round));
    if (found.verdict == Verdict::yes) return found;
  }
  check_internal(false, "unistochastic_verdict_3x3: witness search failed on a yes instance");
  return out;
}

UnistochasticityResult search_unistochastic(const Matrix& m, int restarts, int max_iter,
                                            std::uint64_t seed) {
  require(m.rows() == m.cols() && m.rows() > 0, "search_unistochastic: square matrix required");
  require(is_doubly_stochastic(m), "search_unistochastic: input is not doubly stochastic");
  require(restarts >= 0 && max_iter >= 1, "search_unistochastic: bad iteration budget");
  const int n = static_cast<int>(m.rows());
  const Matrix sqrt_m = m.cwiseMax(0.0).cwiseSqrt();

  UnistochasticityResult best;
  best.defect = std::numeric_limits<double>::infinity();

  for (int attempt = 0; attempt <= restarts; ++attempt) {
    CMatrix a(n, n);
    if (attempt == 0) {
      a = sqrt_m.cast<Complex>();
    } else {
      std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(attempt)};
      std::mt19937_64 rng(sq);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          a(i, j) = std::polar(sqrt_m(i, j), 2.0 * std::numbers::pi * num::uniform_unit(rng));
    }

    double attempt_defect = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iter; ++it) {
      const auto u = num::polar_unitary_factor(a);
      if (!u) break; // singular iterate, this start is a dead end
      const double gap = num::max_abs(CMatrix(a - *u));
      const double defect = num::max_abs(Matrix(u->cwiseAbs2() - m));
      attempt_defect = std::min(attempt_defect, defect);
      if (defect <= tol::search_success && gap <= tol::search_success) {
        UnistochasticityResult out;
        out.verdict = Verdict::yes;
        out.witness = *u;
        out.defect = defect;
        return out;
      }
      CMatrix next(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const Complex uij = (*u)(i, j);
          const double mag = std::abs(uij);
          next(i, j) = mag == 0.0 ? Complex(sqrt_m(i, j), 0.0) : sqrt_m(i, j) * (uij / mag);
        }
      if (num::max_abs(CMatrix(next - a)) <= 1e-13) {
        a = next;
        break; // projections stopped moving, converged short of success
      }
      a = next;
    }
    if (attempt_defect < best.defect) best.defect = attempt_defect;
  }

  best.verdict = Verdict::unknown;
  return best;
}

} // namespace unistoq
