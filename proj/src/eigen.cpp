#include <algorithm>
#include <cmath>
#include <numeric>

#include "rmtdpp/error.hpp"
#include "rmtdpp/numlin.hpp"

namespace rmtdpp {

namespace {

constexpr int kMaxSweeps = 30;

// Householder reduction to tridiagonal form. On exit v holds the
// accumulated orthogonal transform, d the diagonal and e the subdiagonal
// (e[0] unused).
void tridiagonalize(RealMatrix& v, std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(v.rows());
  for (int j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (int i = n - 1; i > 0; --i) {
    double scale = 0.0, h = 0.0;
    for (int k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (int j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (int k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (int j = 0; j < i; ++j) e[j] = 0.0;

      for (int j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (int k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (int j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (int j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (int k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (int i = 0; i < n - 1; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (int k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (int j = 0; j <= i; ++j) {
        double g = 0.0;
        for (int k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (int k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (int k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (int j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit QL on the tridiagonal (d, e), accumulating rotations into v
// when given.
void ql_implicit(RealMatrix* v, std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0, tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  for (int l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    int m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > kMaxSweeps) {
          throw NoConvergence("sym_eigen: QL iteration exceeded 30 sweeps", d[l], kMaxSweeps);
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          if (v) {
            for (int k = 0; k < n; ++k) {
              h = (*v)(k, i + 1);
              (*v)(k, i + 1) = s * (*v)(k, i) + c * h;
              (*v)(k, i) = c * (*v)(k, i) - s * h;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

// Unitary Householder reduction of a Hermitian matrix to tridiagonal form.
// The complex subdiagonal is replaced by its modulus (a diagonal unitary
// similarity), giving d and e in the layout ql_implicit expects.
void herm_tridiagonalize(ComplexMatrix& a, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = a.rows();
  std::vector<cplx> v(n), p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t lo = k + 1, m = n - lo;
    double xnorm = 0.0;
    for (std::size_t i = 0; i < m; ++i) xnorm += std::norm(a(lo + i, k));
    xnorm = std::sqrt(xnorm);
    e[lo] = xnorm;
    if (xnorm == 0.0) continue;
    const cplx x0 = a(lo, k);
    const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx{1.0, 0.0};
    for (std::size_t i = 0; i < m; ++i) v[i] = a(lo + i, k);
    v[0] += phase * xnorm;
    double vn = 0.0;
    for (std::size_t i = 0; i < m; ++i) vn += std::norm(v[i]);
    const double tau = 2.0 / vn;
    cplx vp = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      cplx acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) acc += a(lo + i, lo + j) * v[j];
      p[i] = tau * acc;
      vp += std::conj(v[i]) * p[i];
    }
    const double c = 0.5 * tau * vp.real();
    for (std::size_t i = 0; i < m; ++i) p[i] -= c * v[i];
    for (std::size_t i = 0; i < m; ++i) {
      cplx* row = a.row(lo + i).data() + lo;
      const cplx vi = v[i], pi = p[i];
      for (std::size_t j = 0; j < m; ++j) row[j] -= vi * std::conj(p[j]) + pi * std::conj(v[j]);
    }
  }
  if (n >= 2) e[n - 1] = std::abs(a(n - 1, n - 2));
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i).real();
}

}  // namespace

std::vector<double> herm_eigenvalues(const ComplexMatrix& a) {
  if (!a.square()) fail(Errc::invalid_argument, "herm_eigenvalues: matrix not square");
  if (!a.all_finite()) fail(Errc::invalid_argument, "herm_eigenvalues: non-finite entry");
  const std::size_t n = a.rows();
  const double scale = a.max_abs();
  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(a(i, j) - std::conj(a(j, i))) > 1e-12 * scale) {
        fail(Errc::invalid_argument, "herm_eigenvalues: matrix is not Hermitian");
      }
      h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    }
  std::vector<double> d(n), e(n, 0.0);
  if (n == 0) return d;
  herm_tridiagonalize(h, d, e);
  ql_implicit(nullptr, d, e);
  std::sort(d.begin(), d.end());
  return d;
}

EigenDecomposition sym_eigen(const RealMatrix& a) {
  if (!a.square()) fail(Errc::invalid_argument, "sym_eigen: matrix not square");
  if (!a.all_finite()) fail(Errc::invalid_argument, "sym_eigen: non-finite entry");
  const std::size_t n = a.rows();
  const double scale = a.max_abs();
  RealMatrix v(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(a(i, j) - a(j, i)) > 1e-12 * scale) {
        fail(Errc::invalid_argument, "sym_eigen: matrix is not symmetric");
      }
      v(i, j) = 0.5 * (a(i, j) + a(j, i));
    }
  EigenDecomposition out;
  if (n == 0) return out;

  std::vector<double> d(n), e(n);
  tridiagonalize(v, d, e);
  ql_implicit(&v, d, e);

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
  out.values.resize(n);
  out.vectors = RealMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = d[idx[j]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, idx[j]);
  }
  return out;
}

}  // namespace rmtdpp
