#include "rmtdpp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rmtdpp/error.hpp"
#include "rmtdpp/simd.hpp"
#include "rmtdpp/specfun.hpp"

namespace rmtdpp {

void Kernel::fill(std::span<const double> xs, std::span<const double> ys, RealMatrix& out) const {
  if (out.rows() != xs.size() || out.cols() != ys.size()) out = RealMatrix(xs.size(), ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) out(i, j) = xs[i] == ys[j] ? diag(xs[i]) : eval(xs[i], ys[j]);
}

RealMatrix Kernel::matrix(std::span<const double> xs, std::span<const double> ys) const {
  RealMatrix out(xs.size(), ys.size());
  fill(xs, ys, out);
  return out;
}

// ---------------------------------------------------------------- CD form

double CdKernel::near_diagonal(double x, double y) const {
  const double m = 0.5 * (x + y), h = 0.5 * (y - x);
  double a[kTaylorTerms], b[kTaylorTerms];
  taylor(m, a, b);
  // With x = m - h, y = m + h only odd total degrees survive:
  // K = -sum_{k odd} c_k h^{k-1}, c_k = sum_{i+j=k} (-1)^i a_i b_j.
  double sum = 0.0, hp = 1.0;
  const double h2 = h * h;
  for (int k = 1; k < kTaylorTerms; k += 2) {
    double c = 0.0;
    for (int i = 0; i <= k; ++i) c += ((i % 2) ? -a[i] : a[i]) * b[k - i];
    sum -= c * hp;
    hp *= h2;
  }
  return sum;
}

double CdKernel::eval(double x, double y) const {
  if (x == y) return diag(x);
  if (std::abs(x - y) < 2.0 * near_width(0.5 * (x + y))) return near_diagonal(x, y);
  double fx, gx, fy, gy;
  values(x, fx, gx);
  values(y, fy, gy);
  return (fx * gy - gx * fy) / (x - y);
}

double CdKernel::diag(double x) const { return near_diagonal(x, x); }

void CdKernel::fill(std::span<const double> xs, std::span<const double> ys, RealMatrix& out) const {
  if (out.rows() != xs.size() || out.cols() != ys.size()) out = RealMatrix(xs.size(), ys.size());
  std::vector<double> fx(xs.size()), gx(xs.size()), fy(ys.size()), gy(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) values(xs[i], fx[i], gx[i]);
  for (std::size_t j = 0; j < ys.size(); ++j) values(ys[j], fy[j], gy[j]);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double x = xs[i], y = ys[j];
      if (x == y) {
        out(i, j) = diag(x);
      } else if (std::abs(x - y) < 2.0 * near_width(0.5 * (x + y))) {
        out(i, j) = near_diagonal(x, y);
      } else {
        out(i, j) = (fx[i] * gy[j] - gx[i] * fy[j]) / (x - y);
      }
    }
  }
}

// ---------------------------------------------------------------- Airy

void AiryKernel::values(double x, double& f, double& g) const {
  const auto v = airy(x);
  f = v.ai;
  g = v.aip;
}

void AiryKernel::taylor(double m, double* a, double* b) const {
  // Ai'' = x Ai, so (k+1)(k+2) a_{k+2} = m a_k + a_{k-1}.
  const auto v = airy(m);
  double ext[kTaylorTerms + 1];
  ext[0] = v.ai;
  ext[1] = v.aip;
  for (int k = 0; k + 2 <= kTaylorTerms; ++k) {
    const double km1 = k > 0 ? ext[k - 1] : 0.0;
    ext[k + 2] = (m * ext[k] + km1) / ((k + 1.0) * (k + 2.0));
  }
  for (int k = 0; k < kTaylorTerms; ++k) {
    a[k] = ext[k];
    b[k] = (k + 1.0) * ext[k + 1];
  }
}

double AiryKernel::diag(double x) const {
  const auto v = airy(x);
  return v.aip * v.aip - x * v.ai * v.ai;
}

// ---------------------------------------------------------------- Bessel

BesselKernel::BesselKernel(int alpha) : alpha_(alpha) {
  if (alpha < 0) fail(Errc::unsupported_order, "bessel kernel: alpha must be a non-negative integer");
}

std::string BesselKernel::label() const { return "bessel(alpha=" + std::to_string(alpha_) + ")"; }

void BesselKernel::values(double x, double& f, double& g) const {
  const double r = std::sqrt(std::max(x, 0.0));
  const auto v = bessel_j(alpha_, r);
  f = v.j;
  g = 0.5 * r * v.jp;
}

double BesselKernel::near_width(double m) const {
  if (m <= 0.0) return 0.0;
  return std::min(0.025 * m, 0.05 * std::sqrt(m));
}

void BesselKernel::taylor(double m, double* a, double* b) const {
  // f(x) = J_a(sqrt x) solves 4x^2 f'' + 4x f' + (x - a^2) f = 0; expanding
  // about m gives a three-term recurrence for the coefficients.
  const double r = std::sqrt(m);
  const auto v = bessel_j(alpha_, r);
  const double al2 = static_cast<double>(alpha_) * alpha_;
  double ext[kTaylorTerms + 1];
  ext[0] = v.j;
  ext[1] = v.jp / (2.0 * r);
  for (int k = 0; k + 2 <= kTaylorTerms; ++k) {
    const double km1 = k > 0 ? ext[k - 1] : 0.0;
    ext[k + 2] = -(4.0 * m * (k + 1.0) * (2.0 * k + 1.0) * ext[k + 1] + (4.0 * k * k + m - al2) * ext[k] + km1) /
                 (4.0 * m * m * (k + 1.0) * (k + 2.0));
  }
  for (int k = 0; k < kTaylorTerms; ++k) {
    a[k] = ext[k];
    b[k] = m * (k + 1.0) * ext[k + 1] + k * ext[k];
  }
}

double BesselKernel::diag(double x) const {
  if (x <= 0.0) return alpha_ == 0 ? 0.25 : 0.0;
  const double r = std::sqrt(x);
  std::vector<double> j(alpha_ + 2);
  bessel_j_seq(r, j);
  const double ja = j[alpha_], jp1 = j[alpha_ + 1];
  const double jm1 = alpha_ == 0 ? -j[1] : j[alpha_ - 1];
  return 0.25 * (ja * ja - jp1 * jm1);
}

// ---------------------------------------------------------------- sine

double SineKernel::eval(double x, double y) const {
  const double d = x - y;
  if (d == 0.0) return 1.0;
  const double pd = std::numbers::pi * d;
  return std::sin(pd) / pd;
}

// ---------------------------------------------------------------- Hermite

HermiteKernel::HermiteKernel(unsigned n) : n_(n) {
  if (n == 0) fail(Errc::invalid_argument, "hermite kernel: N must be >= 1");
}

std::string HermiteKernel::label() const { return "hermite(N=" + std::to_string(n_) + ")"; }

double HermiteKernel::right_cutoff() const {
  const double n = n_;
  return std::sqrt(2.0 * n) + 8.5 / (std::numbers::sqrt2 * std::cbrt(std::sqrt(n)));
}

double HermiteKernel::eval(double x, double y) const {
  if (std::abs(x - y) < kSumWidth) {
    std::vector<double> px(n_), py(n_);
    hermite_phi_all(x, px);
    hermite_phi_all(y, py);
    return simd::dot(n_, px.data(), py.data());
  }
  const double a = hermite_phi(n_, x), b = hermite_phi(n_ - 1, y);
  const double c = hermite_phi(n_ - 1, x), d = hermite_phi(n_, y);
  return std::sqrt(0.5 * n_) * (a * b - c * d) / (x - y);
}

double HermiteKernel::diag(double x) const {
  std::vector<double> p(n_);
  hermite_phi_all(x, p);
  return simd::dot(n_, p.data(), p.data());
}

// ---------------------------------------------------------------- extended Airy

ExtendedAiryKernel::ExtendedAiryKernel(double s, double t) : s_(s), t_(t) {
  if (!std::isfinite(s) || !std::isfinite(t)) fail(Errc::invalid_argument, "extended airy: times must be finite");
}

std::string ExtendedAiryKernel::label() const {
  std::ostringstream os;
  os.precision(17);
  os << "extended_airy(s=" << s_ << ",t=" << t_ << ")";
  return os.str();
}

namespace {

constexpr std::size_t kPanelNodes = 16;

// Composite Gauss-Legendre on [a, b] with unit-length panels.
void panels(double a, double b, std::vector<double>& nodes, std::vector<double>& weights) {
  const auto& r = gauss_legendre(kPanelNodes);
  const auto count = static_cast<std::size_t>(std::ceil(b - a));
  const double len = (b - a) / static_cast<double>(std::max<std::size_t>(count, 1));
  for (std::size_t p = 0; p < std::max<std::size_t>(count, 1); ++p) {
    const double lo = a + static_cast<double>(p) * len;
    for (std::size_t i = 0; i < kPanelNodes; ++i) {
      nodes.push_back(lo + 0.5 * len * (r.nodes[i] + 1.0));
      weights.push_back(0.5 * len * r.weights[i]);
    }
  }
}

}  // namespace

ExtendedAiryKernel::LambdaRule ExtendedAiryKernel::lambda_rule(double lo) {
  // Ai(x + lambda) is below 1e-20 of its scale once x + lambda > 13.
  LambdaRule r;
  panels(0.0, std::max(1.0, 13.0 - lo), r.nodes, r.weights);
  return r;
}

ExtendedAiryKernel::LambdaRule ExtendedAiryKernel::negative_rule(double gap) {
  // e^{lambda gap} < 1e-16 below -37/gap.
  LambdaRule r;
  panels(-38.0 / gap, 0.0, r.nodes, r.weights);
  return r;
}

double ExtendedAiryKernel::heat_term(double tau, double x, double y) {
  const double d = x - y;
  return std::exp(-d * d / (4.0 * tau) - 0.5 * tau * (x + y) + tau * tau * tau / 12.0) /
         std::sqrt(4.0 * std::numbers::pi * tau);
}

double ExtendedAiryKernel::eval(double x, double y) const {
  const double tau = s_ - t_;
  if (tau == 0.0) return AiryKernel().eval(x, y);
  auto integrate = [&](const std::vector<double>& nodes, const std::vector<double>& weights, double rate) {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double l = nodes[i];
      sum += weights[i] * std::exp(-rate * l) * airy(x + l).ai * airy(y + l).ai;
    }
    return sum;
  };
  if (tau > 0.0) {
    const auto r = lambda_rule(std::min(x, y));
    return integrate(r.nodes, r.weights, tau);
  }
  const double g = -tau;
  if (g < 1.0) {
    // Whole-line identity minus the decaying half, avoiding the slowly
    // damped oscillatory integral over lambda < 0.
    const auto r = lambda_rule(std::min(x, y));
    return integrate(r.nodes, r.weights, tau) - heat_term(g, x, y);
  }
  const auto r = negative_rule(g);
  return -integrate(r.nodes, r.weights, tau);
}

// ---------------------------------------------------------------- pinned

PinnedKernel::PinnedKernel(KernelPtr base, std::vector<double> pins)
    : base_(std::move(base)), pins_(std::move(pins)), gram_(RealMatrix(0, 0)) {
  if (!base_) fail(Errc::invalid_argument, "condition_on: null base kernel");
  for (std::size_t i = 0; i < pins_.size(); ++i) {
    if (!std::isfinite(pins_[i])) fail(Errc::invalid_argument, "condition_on: non-finite pin");
    for (std::size_t j = 0; j < i; ++j)
      if (pins_[i] == pins_[j]) fail(Errc::singular_gram, "condition_on: pins are not distinct");
  }
  gram_ = LuFactor<double>(base_->matrix(pins_));
  if (gram_.singular() || gram_.pivot_ratio() > kCondTol) {
    fail(Errc::singular_gram, "condition_on: Gram matrix of " + base_->label() + " at the pins is singular");
  }
}

std::string PinnedKernel::label() const {
  std::ostringstream os;
  os.precision(17);
  os << "pinned(" << base_->label();
  for (double p : pins_) os << ";" << p;
  os << ")";
  return os.str();
}

double PinnedKernel::eval(double x, double y) const {
  const std::size_t m = pins_.size();
  std::vector<double> kx(m), ky(m);
  for (std::size_t i = 0; i < m; ++i) {
    kx[i] = x == pins_[i] ? base_->diag(x) : base_->eval(x, pins_[i]);
    ky[i] = y == pins_[i] ? base_->diag(y) : base_->eval(pins_[i], y);
  }
  gram_.solve_inplace(ky);
  const double k = x == y ? base_->diag(x) : base_->eval(x, y);
  return k - simd::dot(m, kx.data(), ky.data());
}

void PinnedKernel::fill(std::span<const double> xs, std::span<const double> ys, RealMatrix& out) const {
  base_->fill(xs, ys, out);
  const RealMatrix kx = base_->matrix(xs, pins_);
  const RealMatrix gy = gram_.solve(base_->matrix(pins_, ys));
  out -= matmul(kx, gy);
}

// ---------------------------------------------------------------- factories

KernelPtr airy_kernel() { return std::make_shared<AiryKernel>(); }
KernelPtr sine_kernel() { return std::make_shared<SineKernel>(); }
KernelPtr bessel_kernel(int alpha) { return std::make_shared<BesselKernel>(alpha); }
KernelPtr hermite_kernel(unsigned n) { return std::make_shared<HermiteKernel>(n); }
KernelPtr extended_airy_kernel(double s, double t) { return std::make_shared<ExtendedAiryKernel>(s, t); }

std::shared_ptr<const PinnedKernel> condition_on(KernelPtr base, std::vector<double> pins) {
  return std::make_shared<PinnedKernel>(std::move(base), std::move(pins));
}

}  // namespace rmtdpp
