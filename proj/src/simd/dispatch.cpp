#include <atomic>
#include <cstdlib>
#include <cstring>

#include "rmtdpp/simd.hpp"

namespace rmtdpp::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(RMTDPP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() noexcept {
  if (const char* env = std::getenv("RMTDPP_SIMD"); env && std::strcmp(env, "scalar") == 0) {
    return Isa::scalar;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() noexcept {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

inline bool use_avx2() noexcept {
#if defined(RMTDPP_HAVE_AVX2)
  return current().load(std::memory_order_relaxed) == Isa::avx2;
#else
  return false;
#endif
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

bool isa_available(Isa isa) noexcept { return isa == Isa::scalar || cpu_has_avx2(); }

bool select_isa(Isa isa) noexcept {
  if (!isa_available(isa)) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

void axpy(std::size_t n, double a, const double* x, double* y) noexcept {
#if defined(RMTDPP_HAVE_AVX2)
  if (use_avx2()) return avx2::axpy(n, a, x, y);
#endif
  scalar::axpy(n, a, x, y);
}

void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) noexcept {
#if defined(RMTDPP_HAVE_AVX2)
  if (use_avx2()) {
    return avx2::axpy_complex(n, a.real(), a.imag(), reinterpret_cast<const double*>(x),
                              reinterpret_cast<double*>(y));
  }
#endif
  scalar::axpy(n, a, x, y);
}

double dot(std::size_t n, const double* x, const double* y) noexcept {
#if defined(RMTDPP_HAVE_AVX2)
  if (use_avx2()) return avx2::dot(n, x, y);
#endif
  return scalar::dot(n, x, y);
}

cplx dot(std::size_t n, const cplx* x, const cplx* y) noexcept {
#if defined(RMTDPP_HAVE_AVX2)
  if (use_avx2()) {
    double out[2];
    avx2::dot_complex(n, reinterpret_cast<const double*>(x), reinterpret_cast<const double*>(y), out);
    return {out[0], out[1]};
  }
#endif
  return scalar::dot(n, x, y);
}

double dot_weighted(std::size_t n, const double* x, const double* y, const double* w) noexcept {
#if defined(RMTDPP_HAVE_AVX2)
  if (use_avx2()) return avx2::dot_weighted(n, x, y, w);
#endif
  return scalar::dot_weighted(n, x, y, w);
}

void scaled_product(std::size_t n, double s, const double* a, const double* b, double* y) noexcept {
#if defined(RMTDPP_HAVE_AVX2)
  if (use_avx2()) return avx2::scaled_product(n, s, a, b, y);
#endif
  scalar::scaled_product(n, s, a, b, y);
}

}  // namespace rmtdpp::simd
