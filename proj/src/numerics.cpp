#include "unistoq/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace unistoq::num {

Vector project_to_simplex(const Vector& v) {
  const int n = static_cast<int>(v.size());
  require(n > 0, "project_to_simplex: empty vector");
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());

  double css = 0.0;
  double theta = 0.0;
  for (int k = 0; k < n; ++k) {
    css += u[static_cast<size_t>(k)];
    const double cand = (css - 1.0) / static_cast<double>(k + 1);
    if (u[static_cast<size_t>(k)] - cand > 0.0) theta = cand;
  }
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = std::max(v[i] - theta, 0.0);
  return x;
}

double spectral_norm_squared(const Matrix& a, int max_iter) {
  require(a.size() > 0, "spectral_norm_squared: empty matrix");
  const Matrix b = a.transpose() * a;
  const int n = static_cast<int>(b.rows());
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * static_cast<double>(i);
  v.normalize();

  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = b * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    w /= norm;
    const double next = w.dot(b * w);
    const bool settled = std::abs(next - lambda) <= 1e-13 * std::max(1.0, next);
    v = w;
    lambda = next;
    if (settled) break;
  }
  // power iteration approaches from below; a hair of inflation keeps 1/L a
  // valid gradient step
  return lambda * (1.0 + 1e-8);
}

std::optional<CMatrix> polar_unitary_factor(const CMatrix& a, int max_iter, double step_tol) {
  const int n = static_cast<int>(a.rows());
  require(n > 0 && a.cols() == n, "polar_unitary_factor: square matrix required");
  CMatrix x = a;
  for (int it = 0; it < max_iter; ++it) {
    const CMatrix inv = x.inverse();
    if (!inv.allFinite()) return std::nullopt;
    const CMatrix next = 0.5 * (x + inv.adjoint());
    if (!next.allFinite()) return std::nullopt;
    const double step = max_abs(CMatrix(next - x));
    x = next;
    if (step <= step_tol) return x;
  }
  return std::nullopt;
}

namespace {

// one-sided off-diagonal mass of a Hermitian matrix
double off_norm(const CMatrix& a) {
  const int n = static_cast<int>(a.rows());
  double s = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) s += std::norm(a(p, q));
  return std::sqrt(s);
}

} // namespace

Vector hermitian_eigenvalues(const CMatrix& a) {
  const int n = static_cast<int>(a.rows());
  require(n > 0 && a.cols() == n, "hermitian_eigenvalues: square matrix required");
  CMatrix h = 0.5 * (a + a.adjoint());
  const double scale = std::max(1.0, max_abs(h));

  for (int sweep = 0; sweep < 60 && off_norm(h) > 1e-14 * scale; ++sweep) {
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Complex b = h(p, q);
        const double ab = std::abs(b);
        if (ab <= 1e-300) continue;
        const double app = h(p, p).real();
        const double aqq = h(q, q).real();
        const double tau = (app - aqq) / (2.0 * ab);
        const double sg = tau >= 0.0 ? 1.0 : -1.0;
        const double t = sg / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex phase = b / ab;

        // columns: h <- h R, with R the rotation in the (p, q) plane
        for (int k = 0; k < n; ++k) {
          const Complex hkp = h(k, p);
          const Complex hkq = h(k, q);
          h(k, p) = hkp * c + hkq * s * std::conj(phase);
          h(k, q) = -hkp * s * phase + hkq * c;
        }
        // rows: h <- R^dagger h
        for (int k = 0; k < n; ++k) {
          const Complex hpk = h(p, k);
          const Complex hqk = h(q, k);
          h(p, k) = c * hpk + s * phase * hqk;
          h(q, k) = -s * std::conj(phase) * hpk + c * hqk;
        }
        h(p, q) = Complex(0.0, 0.0);
        h(q, p) = Complex(0.0, 0.0);
      }
    }
  }

  Vector ev(n);
  for (int i = 0; i < n; ++i) ev[i] = h(i, i).real();
  std::sort(ev.data(), ev.data() + n);
  return ev;
}

double smallest_hermitian_eigenvalue(const CMatrix& a) { return hermitian_eigenvalues(a)[0]; }

double identity_defect(const CMatrix& a) {
  return max_abs(CMatrix(a - CMatrix::Identity(a.rows(), a.cols())));
}

double identity_defect(const Matrix& a) {
  return max_abs(Matrix(a - Matrix::Identity(a.rows(), a.cols())));
}

double column_sum_defect(const Matrix& a) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) worst = std::max(worst, std::abs(a.col(j).sum() - 1.0));
  return worst;
}

} // namespace unistoq::num
