#include "rmtdpp/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rmtdpp/error.hpp"
#include "rmtdpp/numlin.hpp"
#include "rmtdpp/simd.hpp"

namespace rmtdpp {

namespace {

template <class T>
double real_part(T v, std::size_t step) {
  if constexpr (is_complex_v<T>) {
    if (std::abs(v.imag()) > kImagTol) {
      fail(Errc::invalid_marginal, "step " + std::to_string(step) + ": diagonal has imaginary part " +
                                       std::to_string(v.imag()));
    }
    return v.real();
  } else {
    return v;
  }
}

template <class T>
double bernoulli_param(T d, std::size_t step) {
  const double p = real_part(d, step);
  if (!(p >= -kMarginalTol && p <= 1.0 + kMarginalTol)) {
    fail(Errc::invalid_marginal, "step " + std::to_string(step) + ": Bernoulli parameter " + std::to_string(p) +
                                     " outside [0, 1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

// Near-deterministic parameters are resolved without a draw so that the
// following Schur update never divides by a vanishing pivot.
Outcome decide(double p, Force force, Rng& rng, std::size_t step) {
  switch (force) {
    case Force::in:
      if (p <= kPivotTol) fail(Errc::forced_impossible, "step " + std::to_string(step) + ": forcing in at probability 0");
      return Outcome::in;
    case Force::out:
      if (1.0 - p <= kPivotTol) {
        fail(Errc::forced_impossible, "step " + std::to_string(step) + ": forcing out at probability 1");
      }
      return Outcome::out;
    case Force::none:
      break;
  }
  if (p < kPivotTol) return Outcome::out;
  if (p > 1.0 - kPivotTol) return Outcome::in;
  return rng.uniform() < p ? Outcome::in : Outcome::out;
}

}  // namespace

// ---------------------------------------------------------------- DppState

template <class T>
DppState<T>::DppState(Matrix<T> k) : working_(std::move(k)), consumed_(working_.rows(), 0) {
  if (!working_.square()) fail(Errc::invalid_argument, "DPP kernel must be square");
  if (!working_.all_finite()) fail(Errc::invalid_argument, "DPP kernel has non-finite entries");
}

template <class T>
double DppState<T>::marginal(std::size_t i) const {
  if (i >= size() || consumed_[i]) fail(Errc::invalid_argument, "index already observed or out of range");
  return bernoulli_param(working_(i, i), log_.size());
}

template <class T>
Outcome DppState<T>::observe(std::size_t i, Rng& rng, Force force) {
  const std::size_t n = size();
  if (i >= n || consumed_[i]) fail(Errc::invalid_argument, "observe: index already observed or out of range");
  const double p = bernoulli_param(working_(i, i), log_.size());
  const Outcome o = decide(p, force, rng, log_.size());
  const T pivot = working_(i, i) - (o == Outcome::out ? T(1) : T(0));
  if (std::abs(pivot) < kPivotTol) fail(Errc::pivot_too_small, "observe: vanishing pivot");
  consumed_[i] = 1;
  log_.push_back({i, o, force != Force::none});

  std::size_t lo = 0;
  while (lo < n && consumed_[lo]) ++lo;
  if (lo == n) return o;
  const T* prow = working_.row(i).data() + lo;
  for (std::size_t r = lo; r < n; ++r) {
    if (consumed_[r]) continue;
    const T f = working_(r, i) / pivot;
    if (f != T{}) simd::axpy(n - lo, -f, prow, working_.row(r).data() + lo);
  }
  return o;
}

template <class T>
std::vector<std::size_t> DppState<T>::sample() const {
  std::vector<std::size_t> s;
  for (const auto& ob : log_)
    if (ob.outcome == Outcome::in) s.push_back(ob.index);
  std::sort(s.begin(), s.end());
  return s;
}

template class DppState<double>;
template class DppState<cplx>;

template <class T>
std::vector<std::size_t> sample_general(const Matrix<T>& k, Rng& rng, std::span<const std::size_t> order) {
  DppState<T> st(k);
  if (order.empty()) {
    for (std::size_t i = 0; i < st.size(); ++i) st.observe(i, rng);
  } else {
    for (std::size_t i : order) st.observe(i, rng);
  }
  return st.sample();
}

template std::vector<std::size_t> sample_general(const RealMatrix&, Rng&, std::span<const std::size_t>);
template std::vector<std::size_t> sample_general(const ComplexMatrix&, Rng&, std::span<const std::size_t>);

// ---------------------------------------------------------------- projections

namespace {

// Index drawn with probability weight[j] / total by inversion of a single
// uniform. Falls back to the last positive weight if roundoff leaves the
// cumulative sum short of the target.
std::size_t categorical(std::span<const double> weight, double total, Rng& rng) {
  const double target = rng.uniform() * total;
  double cum = 0.0;
  std::size_t last = weight.size();
  for (std::size_t j = 0; j < weight.size(); ++j) {
    if (weight[j] <= 0.0) continue;
    cum += weight[j];
    last = j;
    if (cum > target) return j;
  }
  if (last == weight.size()) fail(Errc::numerical_breakdown, "categorical draw: no positive weight left");
  return last;
}

}  // namespace

std::vector<std::size_t> sample_ortho_proj(const RealMatrix& y0, Rng& rng) {
  const std::size_t n = y0.rows(), r = y0.cols();
  if (r > n) fail(Errc::not_orthonormal, "more columns than rows");
  const RealMatrix g = matmul(y0.transpose(), y0);
  if (max_abs_diff(g, RealMatrix::identity(r)) > 1e-10) fail(Errc::not_orthonormal, "Y^T Y differs from I");

  RealMatrix y = y0;
  std::vector<std::size_t> out;
  std::vector<double> w(n);
  for (std::size_t step = 0; step < r; ++step) {
    const std::size_t c = y.cols();
    for (std::size_t j = 0; j < n; ++j) w[j] = simd::dot(c, y.row(j).data(), y.row(j).data());
    const std::size_t pick = categorical(w, static_cast<double>(r - step), rng);
    out.push_back(pick);
    const RealMatrix q = householder_compress(y, pick);
    RealMatrix next(n, c - 1);
    for (std::size_t i = 0; i < n; ++i) std::copy(q.row(i).begin() + 1, q.row(i).end(), next.row(i).begin());
    y = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> sample_hermitian(const RealMatrix& k, Rng& rng) {
  const EigenDecomposition e = sym_eigen(k);
  const std::size_t n = k.rows();
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < n; ++j) {
    const double lam = e.values[j];
    if (lam < -kMarginalTol || lam > 1.0 + kMarginalTol) {
      fail(Errc::spectrum_out_of_range, "eigenvalue " + std::to_string(lam) + " outside [0, 1]");
    }
    if (rng.uniform() < std::clamp(lam, 0.0, 1.0)) keep.push_back(j);
  }
  RealMatrix y(n, keep.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < keep.size(); ++c) y(i, c) = e.vectors(i, keep[c]);
  return sample_ortho_proj(y, rng);
}

namespace {

// max |K^2 - K| exactly for small kernels. Above 512 the O(m^3) product
// dominates the sampler, so |(K^2 - K) v| is probed instead with two fixed
// Gaussian vectors; each component has the scale of its row of K^2 - K.
template <class T>
double projection_defect(const Matrix<T>& k) {
  const std::size_t m = k.rows();
  if (m <= 512) return max_abs_diff(matmul(k, k), k);
  Rng probe(0x5eedULL);
  std::vector<T> v(m), kv(m), kkv(m);
  double worst = 0.0;
  for (int rep = 0; rep < 2; ++rep) {
    for (T& x : v) x = T(probe.normal());
    for (std::size_t i = 0; i < m; ++i) kv[i] = simd::dot(m, k.row(i).data(), v.data());
    for (std::size_t i = 0; i < m; ++i) kkv[i] = simd::dot(m, k.row(i).data(), kv.data());
    for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, static_cast<double>(std::abs(kkv[i] - kv[i])));
  }
  return worst;
}

}  // namespace

template <class T>
std::vector<std::size_t> sample_nonherm_proj(const Matrix<T>& k, Rng& rng) {
  if (!k.square()) fail(Errc::not_projection, "kernel must be square");
  if (projection_defect(k) > 1e-8) fail(Errc::not_projection, "K^2 differs from K");
  double tr = 0.0;
  for (std::size_t i = 0; i < k.rows(); ++i) tr += bernoulli_param(k(i, i), 0);
  const auto r = static_cast<std::size_t>(std::llround(tr));

  // Left-looking form: after step t the working kernel is
  // K - sum_s c_s r_s^T with c_s the pivot column divided by its pivot and
  // r_s the pivot row. Only the diagonal is kept up to date; the pivot row
  // and column of each step are rebuilt from K and the stored factors.
  // Indices whose conditional probability drops to zero can never be drawn
  // again and are retired.
  constexpr double kDrop = 1e-13;
  const std::size_t m = k.rows();
  std::vector<T> diag(m);
  for (std::size_t a = 0; a < m; ++a) diag[a] = k(a, a);
  std::vector<char> alive(m, 1);
  std::vector<std::vector<T>> cs, rs;
  cs.reserve(r);
  rs.reserve(r);
  std::vector<std::size_t> out;
  std::vector<double> weight(m);
  for (std::size_t step = 0; step < r; ++step) {
    for (std::size_t a = 0; a < m; ++a) {
      if (alive[a] && std::abs(diag[a]) < kDrop) alive[a] = 0;
      weight[a] = alive[a] ? std::max(0.0, real_part(diag[a], step)) : 0.0;
    }
    const std::size_t j = categorical(weight, static_cast<double>(r - step), rng);
    const T piv = diag[j];
    if (std::abs(piv) < kPivotTol) fail(Errc::numerical_breakdown, "vanishing pivot at step " + std::to_string(step));
    std::vector<T> col(m), row(k.row(j).begin(), k.row(j).end());
    for (std::size_t a = 0; a < m; ++a) col[a] = k(a, j);
    for (std::size_t t = 0; t < cs.size(); ++t) {
      simd::axpy(m, -rs[t][j], cs[t].data(), col.data());
      simd::axpy(m, -cs[t][j], rs[t].data(), row.data());
    }
    const T inv = T(1) / piv;
    for (T& v : col) v *= inv;
    for (std::size_t a = 0; a < m; ++a) diag[a] -= col[a] * row[a];
    alive[j] = 0;
    out.push_back(j);
    cs.push_back(std::move(col));
    rs.push_back(std::move(row));
    if (step + 1 < r && std::none_of(alive.begin(), alive.end(), [](char c) { return c != 0; })) {
      fail(Errc::numerical_breakdown, "kernel exhausted before reaching its rank");
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

template std::vector<std::size_t> sample_nonherm_proj(const RealMatrix&, Rng&);
template std::vector<std::size_t> sample_nonherm_proj(const ComplexMatrix&, Rng&);

// ---------------------------------------------------------------- LazyDpp

template <class T>
T LazyDpp<T>::prepare(std::size_t j) {
  if (prepared_ && *prepared_ == j) return prepared_diag_;
  const std::size_t k = idx_.size();
  l_.assign(k, T{});
  u_.assign(k, T{});
  T d = k_(j, j);
  for (std::size_t t = 0; t < k; ++t) {
    l_[t] = k_(j, idx_[t]) - simd::dot(t, l_.data(), cols_[t].data());
    u_[t] = k_(idx_[t], j) - simd::dot(t, rows_[t].data(), u_.data());
    d -= l_[t] * u_[t] / piv_[t];
  }
  prepared_ = j;
  prepared_diag_ = d;
  return d;
}

template <class T>
double LazyDpp<T>::marginal(std::size_t j) {
  return bernoulli_param(prepare(j), log_.size());
}

template <class T>
Outcome LazyDpp<T>::observe(std::size_t j, Rng& rng, Force force) {
  for (std::size_t o : idx_)
    if (o == j) fail(Errc::invalid_argument, "observe: index already observed");
  const T d = prepare(j);
  const double p = bernoulli_param(d, log_.size());
  const Outcome o = decide(p, force, rng, log_.size());
  const T pivot = d - (o == Outcome::out ? T(1) : T(0));
  const std::size_t k = idx_.size();
  std::vector<T> row(k), col(k);
  for (std::size_t s = 0; s < k; ++s) {
    row[s] = l_[s] / piv_[s];
    col[s] = u_[s] / piv_[s];
  }
  rows_.push_back(std::move(row));
  cols_.push_back(std::move(col));
  piv_.push_back(pivot);
  idx_.push_back(j);
  log_.push_back({j, o, force != Force::none});
  prepared_.reset();
  return o;
}

template class LazyDpp<double>;
template class LazyDpp<cplx>;

}  // namespace rmtdpp
