#include "rmtdpp/specfun.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "rmtdpp/error.hpp"

namespace rmtdpp {

namespace {

// ---------------------------------------------------------------- Airy

constexpr double kAnchorLo = -12.0;
constexpr double kAnchorHi = 10.0;
constexpr double kAnchorStep = 0.25;
constexpr int kAnchors = static_cast<int>((kAnchorHi - kAnchorLo) / kAnchorStep) + 1;

// Taylor step of y'' = x y from (x0, y, y') by h. Works for double and
// long double; terms are summed until they stop contributing.
template <class R>
void airy_taylor(R x0, R y, R yp, R h, R& out, R& outp) {
  // a_k h^k accumulates into the value; k a_k h^{k-1} into the derivative.
  R ak_prev2 = 0, ak_prev1 = y, ak = yp;
  R hk = h;
  R sum = y + yp * h, dsum = yp;
  // Coefficients with x0 = 0 vanish in every third slot, so convergence is
  // declared only after three consecutive negligible terms.
  int quiet = 0;
  const R tol = std::numeric_limits<R>::epsilon() * R(1e-3);
  for (int k = 2; k < 120; ++k) {
    const R next = (x0 * ak_prev1 + ak_prev2) / (R(k) * R(k - 1));
    const R dterm = R(k) * next * hk;
    hk *= h;
    const R term = next * hk;
    sum += term;
    dsum += dterm;
    ak_prev2 = ak_prev1;
    ak_prev1 = ak;
    ak = next;
    const R scale = std::abs(sum) + std::abs(dsum);
    quiet = (std::abs(term) <= tol * scale && std::abs(dterm) <= tol * scale) ? quiet + 1 : 0;
    if (quiet >= 3) break;
  }
  out = sum;
  outp = dsum;
}

// Asymptotic coefficients u_k, v_k of the Airy expansions.
template <class R, std::size_t N>
void airy_uv(std::array<R, N>& u, std::array<R, N>& v) {
  u[0] = v[0] = 1;
  for (std::size_t k = 1; k < N; ++k) {
    const R kk = R(k);
    u[k] = u[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) / ((2 * kk - 1) * 216 * kk);
    v[k] = -(6 * kk + 1) / (6 * kk - 1) * u[k];
  }
}

constexpr std::size_t kUv = 40;

template <class R>
struct UvTable {
  std::array<R, kUv> u{}, v{};
  UvTable() { airy_uv(u, v); }
};

template <class R>
const UvTable<R>& uv() {
  static const UvTable<R> t;
  return t;
}

// x > 0: decaying expansions for Ai and Ai'.
template <class R>
void airy_asym_pos(R x, R& ai, R& aip) {
  const auto& t = uv<R>();
  const R zeta = R(2) / 3 * x * std::sqrt(x);
  R su = 0, sv = 0, zk = 1, lastu = 0;
  for (std::size_t k = 0; k < kUv; ++k) {
    const R tu = t.u[k] / zk, tv = t.v[k] / zk;
    if (k > 0 && std::abs(tu) > std::abs(lastu)) break;
    const R sgn = (k % 2) ? R(-1) : R(1);
    su += sgn * tu;
    sv += sgn * tv;
    lastu = tu;
    if (std::abs(tu) < std::numeric_limits<R>::epsilon() * R(1e-2)) break;
    zk *= zeta;
  }
  const R sqrtpi = std::sqrt(std::numbers::pi_v<R>);
  const R e = std::exp(-zeta);
  const R x14 = std::sqrt(std::sqrt(x));
  ai = e / (2 * sqrtpi * x14) * su;
  aip = -x14 * e / (2 * sqrtpi) * sv;
}

// x < 0: oscillatory expansions.
void airy_asym_neg(double x, double& ai, double& aip) {
  const auto& t = uv<double>();
  const double z = -x;
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  double pu = 0, qu = 0, pv = 0, qv = 0, zk = 1;
  for (std::size_t k = 0; k + 1 < kUv; k += 2) {
    const double sgn = ((k / 2) % 2) ? -1.0 : 1.0;
    const double te = t.u[k] / zk, to = t.u[k + 1] / (zk * zeta);
    pu += sgn * te;
    qu += sgn * to;
    pv += sgn * t.v[k] / zk;
    qv += sgn * t.v[k + 1] / (zk * zeta);
    if (std::abs(to) < 1e-18) break;
    zk *= zeta * zeta;
  }
  const double theta = zeta - std::numbers::pi / 4;
  const double c = std::cos(theta), s = std::sin(theta);
  const double sqrtpi = std::sqrt(std::numbers::pi);
  const double z14 = std::sqrt(std::sqrt(z));
  ai = (c * pu + s * qu) / (sqrtpi * z14);
  aip = z14 / sqrtpi * (s * pv - c * qv);
}

struct AiryAnchors {
  std::array<double, kAnchors> ai{}, aip{};
  AiryAnchors() {
    using R = long double;
    const int zero = static_cast<int>(-kAnchorLo / kAnchorStep);
    // Leftwards from the closed-form values at the origin.
    R y = 1.0L / (std::pow(3.0L, 2.0L / 3.0L) * std::tgamma(2.0L / 3.0L));
    R yp = -1.0L / (std::pow(3.0L, 1.0L / 3.0L) * std::tgamma(1.0L / 3.0L));
    ai[zero] = static_cast<double>(y);
    aip[zero] = static_cast<double>(yp);
    for (int i = zero - 1; i >= 0; --i) {
      const R x0 = R(kAnchorLo) + R(i + 1) * R(kAnchorStep);
      R ny, nyp;
      airy_taylor<R>(x0, y, yp, -R(kAnchorStep), ny, nyp);
      y = ny;
      yp = nyp;
      ai[i] = static_cast<double>(y);
      aip[i] = static_cast<double>(yp);
    }
    // Rightwards part is built backwards from the asymptotic values at the
    // right end, which is the stable direction for the decaying solution.
    airy_asym_pos<R>(R(kAnchorHi), y, yp);
    ai[kAnchors - 1] = static_cast<double>(y);
    aip[kAnchors - 1] = static_cast<double>(yp);
    for (int i = kAnchors - 2; i > zero; --i) {
      const R x0 = R(kAnchorLo) + R(i + 1) * R(kAnchorStep);
      R ny, nyp;
      airy_taylor<R>(x0, y, yp, -R(kAnchorStep), ny, nyp);
      y = ny;
      yp = nyp;
      ai[i] = static_cast<double>(y);
      aip[i] = static_cast<double>(yp);
    }
  }
};

const AiryAnchors& anchors() {
  static const AiryAnchors a;
  return a;
}

}  // namespace

AiryValue airy(double x) noexcept {
  if (std::isnan(x)) return {x, x};
  if (x > 105.0) return {0.0, 0.0};
  double ai, aip;
  if (x > kAnchorHi) {
    airy_asym_pos<double>(x, ai, aip);
  } else if (x < kAnchorLo) {
    if (std::isinf(x)) return {0.0, 0.0};
    airy_asym_neg(x, ai, aip);
  } else {
    const auto& a = anchors();
    const int i = static_cast<int>(std::lround((x - kAnchorLo) / kAnchorStep));
    const double x0 = kAnchorLo + i * kAnchorStep;
    airy_taylor<double>(x0, a.ai[i], a.aip[i], x - x0, ai, aip);
  }
  return {ai, aip};
}

// ---------------------------------------------------------------- Hermite

namespace {

// v * exp(log_factor), combined in the log domain.
double rescale(double v, long double log_factor) {
  if (v == 0.0) return 0.0;
  const long double l = std::log(std::abs(static_cast<long double>(v))) + log_factor;
  const double m = static_cast<double>(std::exp(l));
  return v < 0 ? -m : m;
}

}  // namespace

void hermite_phi_all(double x, std::span<double> out) noexcept {
  if (out.empty()) return;
  // Recurrence on exp(x^2/2) phi_j with a running power-of-two exponent so
  // that neither the Gaussian nor the polynomial over/underflows.
  const double base = std::pow(std::numbers::pi, -0.25);
  const double g = -0.5 * x * x;
  double p0 = base, p1 = 0.0;
  long double logscale = 0.0L;
  auto emit = [&](std::size_t j, double v) { out[j] = rescale(v, logscale + g); };
  emit(0, p0);
  if (out.size() == 1) return;
  p1 = std::sqrt(2.0) * x * p0;
  emit(1, p1);
  for (std::size_t j = 1; j + 1 < out.size(); ++j) {
    const double jj = static_cast<double>(j);
    const double p2 = x * std::sqrt(2.0 / (jj + 1)) * p1 - std::sqrt(jj / (jj + 1)) * p0;
    p0 = p1;
    p1 = p2;
    if (std::abs(p1) > 1e150) {
      p0 *= 1e-150;
      p1 *= 1e-150;
      logscale += 150.0L * std::log(10.0L);
    }
    emit(j + 1, p1);
  }
}

double hermite_phi(unsigned j, double x) noexcept {
  const double base = std::pow(std::numbers::pi, -0.25);
  double p0 = base, p1 = std::sqrt(2.0) * x * base;
  if (j == 0) return base * std::exp(-0.5 * x * x);
  long double logscale = 0.0L;
  for (unsigned k = 1; k < j; ++k) {
    const double kk = k;
    const double p2 = x * std::sqrt(2.0 / (kk + 1)) * p1 - std::sqrt(kk / (kk + 1)) * p0;
    p0 = p1;
    p1 = p2;
    if (std::abs(p1) > 1e150) {
      p0 *= 1e-150;
      p1 *= 1e-150;
      logscale += 150.0L * std::log(10.0L);
    }
  }
  return rescale(p1, logscale - 0.5L * x * x);
}

// ---------------------------------------------------------------- Bessel

void bessel_j_seq(double x, std::span<double> out) {
  if (x < 0.0 || !std::isfinite(x)) fail(Errc::invalid_argument, "bessel_j: x must be finite and >= 0");
  const std::size_t n = out.size();
  if (n == 0) return;
  if (x == 0.0) {
    out[0] = 1.0;
    for (std::size_t k = 1; k < n; ++k) out[k] = 0.0;
    return;
  }
  if (x < 6.0) {
    const double h = 0.5 * x, q = -h * h;
    double lead = 1.0;  // (x/2)^nu / nu!
    for (std::size_t nu = 0; nu < n; ++nu) {
      if (nu > 0) lead *= h / static_cast<double>(nu);
      double term = lead, sum = lead;
      for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k + nu));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
      }
      out[nu] = sum;
    }
    return;
  }
  // Miller's backward recurrence normalised by J_0 + 2 sum J_{2k} = 1.
  std::size_t start = static_cast<std::size_t>(std::max<double>(static_cast<double>(n), x)) + 40;
  start += start % 2;
  std::vector<double> j(start + 2, 0.0);
  j[start + 1] = 0.0;
  j[start] = 1e-300;
  double norm = 0.0;
  for (std::size_t k = start; k > 0; --k) {
    j[k - 1] = 2.0 * static_cast<double>(k) / x * j[k] - j[k + 1];
    if (std::abs(j[k - 1]) > 1e250) {
      for (std::size_t m = k - 1; m <= start; ++m) j[m] *= 1e-250;
      norm *= 1e-250;
    }
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j[k - 1];
  }
  norm += j[0];
  for (std::size_t k = 0; k < n; ++k) out[k] = j[k] / norm;
}

BesselValue bessel_j(double alpha, double x) {
  if (alpha < 0.0 || alpha != std::floor(alpha) || alpha > 1e4) {
    fail(Errc::unsupported_order, "bessel_j: order must be a non-negative integer, got " + std::to_string(alpha));
  }
  const auto n = static_cast<std::size_t>(alpha);
  std::vector<double> seq(n + 2);
  bessel_j_seq(x, seq);
  if (n == 0) return {seq[0], -seq[1]};
  // J_n' = (J_{n-1} - J_{n+1}) / 2 holds at x = 0 as well.
  return {seq[n], 0.5 * (seq[n - 1] - seq[n + 1])};
}

// ---------------------------------------------------------------- Gauss-Legendre

namespace {

QuadratureRule build_rule(std::size_t m) {
  QuadratureRule r;
  r.order = m;
  r.nodes.assign(m, 0.0);
  r.weights.assign(m, 0.0);
  const std::size_t half = (m + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(m) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (std::size_t k = 2; k <= m; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2 * kk - 1) * z * p1 - (kk - 1) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(m) * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) <= 1e-15) {
        // One more evaluation of P'_m at the converged node for the weight.
        p0 = 1.0, p1 = z;
        for (std::size_t k = 2; k <= m; ++k) {
          const double kk = static_cast<double>(k);
          const double p2 = ((2 * kk - 1) * z * p1 - (kk - 1) * p0) / kk;
          p0 = p1;
          p1 = p2;
        }
          dp = static_cast<double>(m) * (z * p1 - p0) / (z * z - 1.0);
        break;
      }
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.nodes[i] = -z;
    r.nodes[m - 1 - i] = z;
    r.weights[i] = r.weights[m - 1 - i] = w;
  }
  if (m % 2 == 1) r.nodes[m / 2] = 0.0;
  return r;
}

}  // namespace

const QuadratureRule& gauss_legendre(std::size_t m) {
  if (m == 0) fail(Errc::invalid_argument, "gauss_legendre: order must be >= 1");
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[m];
  if (!slot) slot = std::make_unique<QuadratureRule>(build_rule(m));
  return *slot;
}

}  // namespace rmtdpp
