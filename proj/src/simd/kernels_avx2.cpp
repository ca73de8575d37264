// Compiled with -mavx2 -mfma. Only raw pointers and intrinsics here.
#include <immintrin.h>

#include <cstddef>

namespace rmtdpp::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// (a + ib) * (c + id) on two interleaved complex lanes; `ar`/`ai` broadcast.
inline __m256d cmul_bcast(__m256d ar, __m256d ai, __m256d x) {
  const __m256d xs = _mm256_permute_pd(x, 0b0101);  // (im, re) pairs
  return _mm256_fmaddsub_pd(ar, x, _mm256_mul_pd(ai, xs));
}

}  // namespace

void axpy(std::size_t n, double a, const double* x, double* y) noexcept {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d y0 = _mm256_loadu_pd(y + i);
    __m256d y1 = _mm256_loadu_pd(y + i + 4);
    y0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), y0);
    y1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4), y1);
    _mm256_storeu_pd(y + i, y0);
    _mm256_storeu_pd(y + i + 4, y1);
  }
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void axpy_complex(std::size_t n, double are, double aim, const double* x, double* y) noexcept {
  const __m256d ar = _mm256_set1_pd(are);
  const __m256d ai = _mm256_set1_pd(aim);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(x + 2 * i);
    const __m256d yv = _mm256_loadu_pd(y + 2 * i);
    _mm256_storeu_pd(y + 2 * i, _mm256_add_pd(yv, cmul_bcast(ar, ai, xv)));
  }
  for (; i < n; ++i) {
    const double xr = x[2 * i], xi = x[2 * i + 1];
    y[2 * i] += are * xr - aim * xi;
    y[2 * i + 1] += are * xi + aim * xr;
  }
}

double dot(std::size_t n, const double* x, const double* y) noexcept {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), s1);
  }
  for (; i + 4 <= n; i += 4) s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void dot_complex(std::size_t n, const double* x, const double* y, double* out) noexcept {
  // Accumulate re*re, im*im, re*im, im*re lane-wise, then combine.
  __m256d same = _mm256_setzero_pd();   // (xr*yr, xi*yi) pairs
  __m256d cross = _mm256_setzero_pd();  // (xr*yi, xi*yr) pairs
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(x + 2 * i);
    const __m256d yv = _mm256_loadu_pd(y + 2 * i);
    same = _mm256_fmadd_pd(xv, yv, same);
    cross = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), cross);
  }
  alignas(32) double a[4], b[4];
  _mm256_store_pd(a, same);
  _mm256_store_pd(b, cross);
  double re = (a[0] - a[1]) + (a[2] - a[3]);
  double im = (b[0] + b[1]) + (b[2] + b[3]);
  for (; i < n; ++i) {
    re += x[2 * i] * y[2 * i] - x[2 * i + 1] * y[2 * i + 1];
    im += x[2 * i] * y[2 * i + 1] + x[2 * i + 1] * y[2 * i];
  }
  out[0] = re;
  out[1] = im;
}

double dot_weighted(std::size_t n, const double* x, const double* y, const double* w) noexcept {
  __m256d s0 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xy = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    s0 = _mm256_fmadd_pd(xy, _mm256_loadu_pd(w + i), s0);
  }
  double s = hsum(s0);
  for (; i < n; ++i) s += x[i] * y[i] * w[i];
  return s;
}

void scaled_product(std::size_t n, double s, const double* a, const double* b, double* y) noexcept {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(y + i, _mm256_mul_pd(ab, vs));
  }
  for (; i < n; ++i) y[i] = a[i] * b[i] * s;
}

}  // namespace rmtdpp::simd::avx2
