#pragma once

// Correlation kernels K(x, y) as immutable callable objects, and the
// conditional (pinned) kernel K(x,y) - k_x G^{-1} k_y obtained by forcing
// points at given locations.

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rmtdpp/matrix.hpp"
#include "rmtdpp/numlin.hpp"

namespace rmtdpp {

class Kernel {
 public:
  virtual ~Kernel() = default;

  virtual double eval(double x, double y) const = 0;
  virtual double diag(double x) const = 0;
  virtual std::string label() const = 0;

  // Point beyond which the kernel is negligible on the right (the diagonal
  // integrates to below 1e-16 past it). Infinity when there is none.
  virtual double right_cutoff() const { return std::numeric_limits<double>::infinity(); }

  // out(i, j) = K(xs[i], ys[j]); out is resized as needed.
  virtual void fill(std::span<const double> xs, std::span<const double> ys, RealMatrix& out) const;

  RealMatrix matrix(std::span<const double> xs, std::span<const double> ys) const;
  RealMatrix matrix(std::span<const double> xs) const { return matrix(xs, xs); }
};

using KernelPtr = std::shared_ptr<const Kernel>;

// Kernels of the form (F(x) G(y) - G(x) F(y)) / (x - y). Close to the
// diagonal the ratio is replaced by a symmetric Taylor expansion about the
// midpoint, built from Taylor coefficients of F and G.
class CdKernel : public Kernel {
 public:
  double eval(double x, double y) const override;
  double diag(double x) const override;
  void fill(std::span<const double> xs, std::span<const double> ys, RealMatrix& out) const override;

 protected:
  static constexpr int kTaylorTerms = 18;
  virtual void values(double x, double& f, double& g) const = 0;
  // Taylor coefficients of F and G about m, kTaylorTerms of each.
  virtual void taylor(double m, double* a, double* b) const = 0;
  // Half-width below which the expansion about the midpoint is used.
  virtual double near_width(double m) const = 0;

  double near_diagonal(double x, double y) const;
};

class AiryKernel final : public CdKernel {
 public:
  double diag(double x) const override;
  std::string label() const override { return "airy"; }
  double right_cutoff() const override { return 8.0; }

 protected:
  void values(double x, double& f, double& g) const override;
  void taylor(double m, double* a, double* b) const override;
  double near_width(double) const override { return 0.025; }
};

// Hard-edge kernel on (0, inf) with F = J_a(sqrt x), G = x F'(x).
class BesselKernel final : public CdKernel {
 public:
  explicit BesselKernel(int alpha);
  double diag(double x) const override;
  std::string label() const override;
  int alpha() const noexcept { return alpha_; }

 protected:
  void values(double x, double& f, double& g) const override;
  void taylor(double m, double* a, double* b) const override;
  double near_width(double m) const override;

 private:
  int alpha_;
};

class SineKernel final : public Kernel {
 public:
  double eval(double x, double y) const override;
  double diag(double) const override { return 1.0; }
  std::string label() const override { return "sine"; }
};

// Finite-N GUE kernel sum_{i<N} phi_i(x) phi_i(y).
class HermiteKernel final : public Kernel {
 public:
  explicit HermiteKernel(unsigned n);
  double eval(double x, double y) const override;
  double diag(double x) const override;
  std::string label() const override;
  double right_cutoff() const override;
  unsigned size() const noexcept { return n_; }

 private:
  static constexpr double kSumWidth = 1e-3;
  unsigned n_;
};

// Extended Airy kernel K_{s,t}(x, y) of the Airy process.
class ExtendedAiryKernel final : public Kernel {
 public:
  ExtendedAiryKernel(double s, double t);
  double eval(double x, double y) const override;
  double diag(double x) const override { return eval(x, x); }
  std::string label() const override;

  // Quadrature in lambda on [0, L] whose nodes resolve
  // int_0^inf e^{-lambda tau} Ai(x + lambda) Ai(y + lambda) for all x, y >= lo.
  struct LambdaRule {
    std::vector<double> nodes, weights;
  };
  static LambdaRule lambda_rule(double lo);
  // Quadrature on lambda < 0 for int e^{lambda gap} Ai(x+lambda) Ai(y+lambda).
  static LambdaRule negative_rule(double gap);

  // (4 pi tau)^{-1/2} exp(-(x-y)^2/(4 tau) - tau (x+y)/2 + tau^3/12): the
  // whole-line integral int e^{lambda tau} Ai(x+lambda) Ai(y+lambda), tau > 0.
  static double heat_term(double tau, double x, double y);

 private:
  double s_, t_;
};

// K conditioned on points at the pins.
class PinnedKernel final : public Kernel {
 public:
  PinnedKernel(KernelPtr base, std::vector<double> pins);

  double eval(double x, double y) const override;
  double diag(double x) const override { return eval(x, x); }
  std::string label() const override;
  double right_cutoff() const override { return base_->right_cutoff(); }
  void fill(std::span<const double> xs, std::span<const double> ys, RealMatrix& out) const override;

  const std::vector<double>& pins() const noexcept { return pins_; }
  // det[K(s_i, s_j)] of the base kernel at the pins.
  double gram_det() const noexcept { return gram_.det(); }
  const Kernel& base() const noexcept { return *base_; }

 private:
  KernelPtr base_;
  std::vector<double> pins_;
  LuFactor<double> gram_;
};

KernelPtr airy_kernel();
KernelPtr sine_kernel();
KernelPtr bessel_kernel(int alpha);
KernelPtr hermite_kernel(unsigned n);
KernelPtr extended_airy_kernel(double s, double t);

// Throws SingularGram when the pins are not distinct or the Gram matrix
// [K(s_i, s_j)] is singular or has condition estimate above 1e12.
std::shared_ptr<const PinnedKernel> condition_on(KernelPtr base, std::vector<double> pins);

}  // namespace rmtdpp
