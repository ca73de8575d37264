#include "rmtdpp/simd.hpp"

namespace rmtdpp::simd::scalar {

void axpy(std::size_t n, double a, const double* x, double* y) noexcept {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) noexcept {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = cplx(y[i].real() + ar * xr - ai * xi, y[i].imag() + ar * xi + ai * xr);
  }
}

double dot(std::size_t n, const double* x, const double* y) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

cplx dot(std::size_t n, const cplx* x, const cplx* y) noexcept {
  double sr = 0.0, si = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sr += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
    si += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
  }
  return {sr, si};
}

double dot_weighted(std::size_t n, const double* x, const double* y, const double* w) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i] * w[i];
  return s;
}

void scaled_product(std::size_t n, double s, const double* a, const double* b, double* y) noexcept {
  for (std::size_t i = 0; i < n; ++i) y[i] = a[i] * b[i] * s;
}

}  // namespace rmtdpp::simd::scalar
