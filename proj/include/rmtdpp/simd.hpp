#pragma once

// Data-parallel inner loops behind the elimination, Schur-update and Gram
// kernels. Each kernel has a portable scalar reference in simd::scalar and,
// on x86-64, an AVX2/FMA variant in simd::avx2. The public entry points
// dispatch once, at first use, to the best variant the CPU supports.
//
// RMTDPP_SIMD=scalar in the environment pins the scalar path.

#include <complex>
#include <cstddef>
#include <string_view>

namespace rmtdpp::simd {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

// ISA currently used by the dispatching entry points.
Isa active_isa() noexcept;

// True when the running CPU and the build both support `isa`.
bool isa_available(Isa isa) noexcept;

// Overrides the dispatch target. Returns false (and leaves the selection
// unchanged) when `isa` is unavailable. Intended for tests and benchmarks.
bool select_isa(Isa isa) noexcept;

// y += a * x
void axpy(std::size_t n, double a, const double* x, double* y) noexcept;
void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) noexcept;

// sum x[i] * y[i] (no conjugation)
double dot(std::size_t n, const double* x, const double* y) noexcept;
cplx dot(std::size_t n, const cplx* x, const cplx* y) noexcept;

// sum x[i] * y[i] * w[i]
double dot_weighted(std::size_t n, const double* x, const double* y, const double* w) noexcept;

// y[i] = a[i] * b[i] * s
void scaled_product(std::size_t n, double s, const double* a, const double* b, double* y) noexcept;

namespace scalar {
void axpy(std::size_t n, double a, const double* x, double* y) noexcept;
void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) noexcept;
double dot(std::size_t n, const double* x, const double* y) noexcept;
cplx dot(std::size_t n, const cplx* x, const cplx* y) noexcept;
double dot_weighted(std::size_t n, const double* x, const double* y, const double* w) noexcept;
void scaled_product(std::size_t n, double s, const double* a, const double* b, double* y) noexcept;
}  // namespace scalar

#if defined(RMTDPP_HAVE_AVX2)
namespace avx2 {
// Complex data is passed as interleaved (re, im) doubles so this
// translation unit never instantiates std::complex templates.
void axpy(std::size_t n, double a, const double* x, double* y) noexcept;
void axpy_complex(std::size_t n, double are, double aim, const double* x, double* y) noexcept;
double dot(std::size_t n, const double* x, const double* y) noexcept;
void dot_complex(std::size_t n, const double* x, const double* y, double* out_re_im) noexcept;
double dot_weighted(std::size_t n, const double* x, const double* y, const double* w) noexcept;
void scaled_product(std::size_t n, double s, const double* a, const double* b, double* y) noexcept;
}  // namespace avx2
#endif

}  // namespace rmtdpp::simd
