#pragma once

// Nystrom discretisation of integral operators restricted to an interval,
// Fredholm determinants det(I - K|J) and resolvent traces tr((I-K)^{-1}K|J).

#include <functional>
#include <vector>

#include "rmtdpp/kernels.hpp"
#include "rmtdpp/matrix.hpp"

namespace rmtdpp {

struct IntervalSpec {
  enum class Kind { finite, right_infinite, left_infinite };
  // How a semi-infinite interval is mapped onto (-1, 1).
  //  automatic: truncate at the kernel's right cutoff when it has one,
  //             rational map otherwise;
  //  rational:  x = s +- c (1 + u) / (1 - u);
  //  truncated: (s, max(cutoff, s + 1)) with the kernel's cutoff.
  enum class Transform { automatic, rational, truncated };

  Kind kind = Kind::finite;
  double a = 0.0;  // left end, or s for semi-infinite kinds
  double b = 1.0;  // right end (finite only)
  double scale = 10.0;
  Transform transform = Transform::automatic;

  static IntervalSpec finite(double a, double b);
  static IntervalSpec right_infinite(double s, double scale = 10.0, Transform t = Transform::automatic);
  static IntervalSpec left_infinite(double s, double scale = 10.0);
};

struct NodesWeights {
  std::vector<double> points;
  std::vector<double> weights;
};

// Gauss-Legendre rule of order m pushed forward to J. `cutoff` is only
// consulted for truncated semi-infinite intervals.
NodesWeights map_rule(const IntervalSpec& j, std::size_t m, double cutoff);

struct NystromOperator {
  std::vector<double> points;
  std::vector<double> sqw;  // square roots of the quadrature weights
  RealMatrix a;             // sqw[i] K(x_i, x_j) sqw[j]
  std::size_t order = 0;
};

NystromOperator discretize(const Kernel& k, const IntervalSpec& j, std::size_t m);

// det(I - A). A numerically singular I - A gives exactly 0.
double fredholm_det(const Kernel& k, const IntervalSpec& j, std::size_t m);
double fredholm_det(const NystromOperator& op);

// tr((I - A)^{-1} A). Throws ResolventSingular when I - A is singular.
double resolvent_trace(const Kernel& k, const IntervalSpec& j, std::size_t m);

struct DetTrace {
  double det;
  double trace;
};

// Both quantities from a single factorisation.
DetTrace det_and_trace(const NystromOperator& op);

struct AdaptiveResult {
  double value;
  std::size_t order;
};

// Doubles m from m0 until two successive values agree within rtol
// (relative) or m would exceed 2048. Throws NoConvergence carrying the
// last value otherwise.
AdaptiveResult adaptive(const std::function<double(std::size_t)>& fn, std::size_t m0, double rtol);

}  // namespace rmtdpp
