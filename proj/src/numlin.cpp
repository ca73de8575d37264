#include "rmtdpp/numlin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rmtdpp/error.hpp"
#include "rmtdpp/simd.hpp"

namespace rmtdpp {

namespace {

constexpr double kSingularPivot = 1e-300;

template <class T>
double mag(T v) {
  return std::abs(v);
}

}  // namespace

template <class T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) fail(Errc::invalid_argument, "matmul: inner dimensions differ");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    T* ci = c.row(i).data();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T aik = a(i, k);
      if (aik == T{}) continue;
      simd::axpy(b.cols(), aik, b.row(k).data(), ci);
    }
  }
  return c;
}

template RealMatrix matmul(const RealMatrix&, const RealMatrix&);
template ComplexMatrix matmul(const ComplexMatrix&, const ComplexMatrix&);

template <class T>
Matrix<T> schur_step(const Matrix<T>& a, std::size_t i, double shift) {
  const std::size_t n = a.rows();
  if (!a.square() || i >= n) fail(Errc::invalid_argument, "schur_step: index out of range");
  const T p = a(i, i) - T(shift);
  if (mag(p) < kPivotTol) {
    fail(Errc::pivot_too_small, "schur_step: |pivot| = " + std::to_string(mag(p)));
  }
  // Pivot row with column i removed, pre-divided by the pivot.
  std::vector<T> prow;
  prow.reserve(n - 1);
  for (std::size_t c = 0; c < n; ++c)
    if (c != i) prow.push_back(a(i, c) / p);

  Matrix<T> out(n - 1, n - 1);
  std::size_t ro = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (r == i) continue;
    T* dst = out.row(ro++).data();
    const T* src = a.row(r).data();
    std::copy(src, src + i, dst);
    std::copy(src + i + 1, src + n, dst + i);
    const T f = a(r, i);
    if (f != T{}) simd::axpy(n - 1, -f, prow.data(), dst);
  }
  return out;
}

template RealMatrix schur_step(const RealMatrix&, std::size_t, double);
template ComplexMatrix schur_step(const ComplexMatrix&, std::size_t, double);

template <class T>
Matrix<T> block_schur(const Matrix<T>& a, std::span<const std::size_t> pinned, double shift) {
  const std::size_t n = a.rows();
  if (!a.square()) fail(Errc::invalid_argument, "block_schur: matrix not square");
  std::vector<char> is_pinned(n, 0);
  for (std::size_t p : pinned) {
    if (p >= n || is_pinned[p]) fail(Errc::invalid_argument, "block_schur: bad pinned index set");
    is_pinned[p] = 1;
  }
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i)
    if (!is_pinned[i]) rest.push_back(i);
  if (pinned.empty()) return a.submatrix(rest, rest);

  Matrix<T> kaa = a.submatrix(pinned, pinned);
  for (std::size_t i = 0; i < kaa.rows(); ++i) kaa(i, i) -= T(shift);
  LuFactor<T> lu(std::move(kaa));
  if (lu.singular() || lu.pivot_ratio() > kCondTol) {
    fail(Errc::singular_pinned_block, "block_schur: pinned block is singular or ill-conditioned");
  }
  const Matrix<T> x = lu.solve(a.submatrix(pinned, rest));
  Matrix<T> out = a.submatrix(rest, rest);
  out -= matmul(a.submatrix(rest, pinned), x);
  return out;
}

template RealMatrix block_schur(const RealMatrix&, std::span<const std::size_t>, double);
template ComplexMatrix block_schur(const ComplexMatrix&, std::span<const std::size_t>, double);

RealMatrix householder_compress(const RealMatrix& y, std::size_t row) {
  if (row >= y.rows()) fail(Errc::invalid_argument, "householder_compress: row out of range");
  const std::size_t c = y.cols();
  const auto yr = y.row(row);
  const double norm = std::sqrt(simd::dot(c, yr.data(), yr.data()));
  if (norm < 1e-14) fail(Errc::zero_row, "householder_compress: row norm below 1e-14");

  // v = y_r + sign(y_r0) |y_r| e1 avoids cancellation; the reflector then
  // sends y_r to -sign(y_r0) |y_r| e1, and flipping column 0 fixes the sign.
  const double sgn = yr[0] >= 0.0 ? 1.0 : -1.0;
  std::vector<double> v(yr.begin(), yr.end());
  v[0] += sgn * norm;
  const double vv = simd::dot(c, v.data(), v.data());

  RealMatrix out = y;
  for (std::size_t r = 0; r < y.rows(); ++r) {
    double* o = out.row(r).data();
    const double t = 2.0 * simd::dot(c, o, v.data()) / vv;
    simd::axpy(c, -t, v.data(), o);
    o[0] *= -sgn;
  }
  auto orow = out.row(row);
  orow[0] = norm;
  std::fill(orow.begin() + 1, orow.end(), 0.0);
  return out;
}

template <class T>
LuFactor<T>::LuFactor(Matrix<T> a) : lu_(std::move(a)) {
  if (!lu_.square()) fail(Errc::invalid_argument, "LU: matrix not square");
  const std::size_t n = lu_.rows();
  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = mag(lu_(k, k));
    for (std::size_t r = k + 1; r < n; ++r) {
      const double m = mag(lu_(r, k));
      if (m > best) {
        best = m;
        piv = r;
      }
    }
    if (best < kSingularPivot) {
      singular_ = true;
      continue;
    }
    if (piv != k) {
      std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(piv).begin());
      std::swap(perm_[k], perm_[piv]);
      sign_ = -sign_;
    }
    const T inv = T(1) / lu_(k, k);
    const T* pk = lu_.row(k).data() + k + 1;
    for (std::size_t r = k + 1; r < n; ++r) {
      T& l = lu_(r, k);
      if (l == T{}) continue;
      l *= inv;
      simd::axpy(n - k - 1, -l, pk, lu_.row(r).data() + k + 1);
    }
  }
}

template <class T>
T LuFactor<T>::det() const noexcept {
  if (singular_) return T{};
  T d = T(sign_);
  for (std::size_t i = 0; i < size(); ++i) d *= lu_(i, i);
  return d;
}

template <class T>
double LuFactor<T>::pivot_ratio() const noexcept {
  if (size() == 0) return 1.0;
  if (singular_) return std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const double m = mag(lu_(i, i));
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  return hi / lo;
}

template <class T>
void LuFactor<T>::solve_inplace(std::span<T> rhs) const {
  if (singular_) fail(Errc::singular, "LU solve: matrix is singular");
  const std::size_t n = size();
  if (rhs.size() != n) fail(Errc::invalid_argument, "LU solve: size mismatch");
  std::vector<T> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
  for (std::size_t i = 0; i < n; ++i) x[i] -= simd::dot(i, lu_.row(i).data(), x.data());
  for (std::size_t i = n; i-- > 0;) {
    x[i] -= simd::dot(n - i - 1, lu_.row(i).data() + i + 1, x.data() + i + 1);
    x[i] /= lu_(i, i);
  }
  std::copy(x.begin(), x.end(), rhs.begin());
}

template <class T>
Matrix<T> LuFactor<T>::solve(const Matrix<T>& b) const {
  if (singular_) fail(Errc::singular, "LU solve: matrix is singular");
  const std::size_t n = size();
  if (b.rows() != n) fail(Errc::invalid_argument, "LU solve: size mismatch");
  // Row-oriented forward and back substitution on the whole right-hand side.
  Matrix<T> x(n, b.cols());
  for (std::size_t i = 0; i < n; ++i) {
    auto src = b.row(perm_[i]);
    std::copy(src.begin(), src.end(), x.row(i).begin());
  }
  const std::size_t m = b.cols();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < i; ++k) {
      const T l = lu_(i, k);
      if (l != T{}) simd::axpy(m, -l, x.row(k).data(), x.row(i).data());
    }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) {
      const T u = lu_(i, k);
      if (u != T{}) simd::axpy(m, -u, x.row(k).data(), x.row(i).data());
    }
    const T inv = T(1) / lu_(i, i);
    for (T& v : x.row(i)) v *= inv;
  }
  return x;
}

template class LuFactor<double>;
template class LuFactor<cplx>;

template <class T>
T lu_det(const Matrix<T>& a) {
  LuFactor<T> lu(a);
  if (lu.singular()) fail(Errc::singular, "lu_det: pivot below 1e-300");
  return lu.det();
}

template <class T>
Matrix<T> lu_solve(const Matrix<T>& a, const Matrix<T>& b) {
  return LuFactor<T>(a).solve(b);
}

template double lu_det(const RealMatrix&);
template cplx lu_det(const ComplexMatrix&);
template RealMatrix lu_solve(const RealMatrix&, const RealMatrix&);
template ComplexMatrix lu_solve(const ComplexMatrix&, const ComplexMatrix&);

}  // namespace rmtdpp
