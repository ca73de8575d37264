#include "rmtdpp/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rmtdpp/error.hpp"
#include "rmtdpp/numlin.hpp"
#include "rmtdpp/specfun.hpp"

namespace rmtdpp {

IntervalSpec IntervalSpec::finite(double a, double b) {
  if (!(a < b)) fail(Errc::invalid_argument, "interval: need a < b");
  IntervalSpec j;
  j.kind = Kind::finite;
  j.a = a;
  j.b = b;
  return j;
}

IntervalSpec IntervalSpec::right_infinite(double s, double scale, Transform t) {
  if (!(scale > 0.0)) fail(Errc::invalid_argument, "interval: transform scale must be positive");
  IntervalSpec j;
  j.kind = Kind::right_infinite;
  j.a = s;
  j.scale = scale;
  j.transform = t;
  return j;
}

IntervalSpec IntervalSpec::left_infinite(double s, double scale) {
  if (!(scale > 0.0)) fail(Errc::invalid_argument, "interval: transform scale must be positive");
  IntervalSpec j;
  j.kind = Kind::left_infinite;
  j.a = s;
  j.scale = scale;
  j.transform = Transform::rational;
  return j;
}

NodesWeights map_rule(const IntervalSpec& j, std::size_t m, double cutoff) {
  const auto& r = gauss_legendre(m);
  NodesWeights out;
  out.points.resize(m);
  out.weights.resize(m);
  auto linear = [&](double a, double b) {
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    for (std::size_t i = 0; i < m; ++i) {
      out.points[i] = c + h * r.nodes[i];
      out.weights[i] = h * r.weights[i];
    }
  };
  switch (j.kind) {
    case IntervalSpec::Kind::finite:
      linear(j.a, j.b);
      break;
    case IntervalSpec::Kind::right_infinite: {
      const bool truncate = j.transform == IntervalSpec::Transform::truncated ||
                            (j.transform == IntervalSpec::Transform::automatic && std::isfinite(cutoff));
      if (truncate) {
        if (!std::isfinite(cutoff)) fail(Errc::invalid_argument, "interval: kernel has no right cutoff");
        linear(j.a, std::max(cutoff, j.a + 1.0));
        break;
      }
      [[fallthrough]];
    }
    case IntervalSpec::Kind::left_infinite: {
      const double dir = j.kind == IntervalSpec::Kind::right_infinite ? 1.0 : -1.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double u = r.nodes[i];
        out.points[i] = j.a + dir * j.scale * (1.0 + u) / (1.0 - u);
        out.weights[i] = r.weights[i] * 2.0 * j.scale / ((1.0 - u) * (1.0 - u));
      }
      if (dir < 0) {
        std::reverse(out.points.begin(), out.points.end());
        std::reverse(out.weights.begin(), out.weights.end());
      }
      break;
    }
  }
  return out;
}

NystromOperator discretize(const Kernel& k, const IntervalSpec& j, std::size_t m) {
  if (m < 2) fail(Errc::invalid_argument, "discretize: order must be >= 2");
  auto nw = map_rule(j, m, k.right_cutoff());
  NystromOperator op;
  op.order = m;
  op.points = std::move(nw.points);
  op.sqw.resize(m);
  for (std::size_t i = 0; i < m; ++i) op.sqw[i] = std::sqrt(nw.weights[i]);
  k.fill(op.points, op.points, op.a);
  for (std::size_t r = 0; r < m; ++r) {
    auto row = op.a.row(r);
    for (std::size_t c = 0; c < m; ++c) row[c] *= op.sqw[r] * op.sqw[c];
  }
  if (!op.a.all_finite()) fail(Errc::numerical_breakdown, "discretize: non-finite kernel value from " + k.label());
  return op;
}

namespace {

RealMatrix identity_minus(const RealMatrix& a) {
  RealMatrix b = a * -1.0;
  for (std::size_t i = 0; i < b.rows(); ++i) b(i, i) += 1.0;
  return b;
}

}  // namespace

double fredholm_det(const NystromOperator& op) {
  const LuFactor<double> lu(identity_minus(op.a));
  return lu.det();
}

double fredholm_det(const Kernel& k, const IntervalSpec& j, std::size_t m) { return fredholm_det(discretize(k, j, m)); }

DetTrace det_and_trace(const NystromOperator& op) {
  const LuFactor<double> lu(identity_minus(op.a));
  // Smallest pivot within rounding of the largest: I - A has an eigenvalue
  // indistinguishable from 0.
  const double eps = std::numeric_limits<double>::epsilon() * static_cast<double>(lu.size());
  if (lu.singular() || lu.pivot_ratio() * eps > 1.0) fail(Errc::resolvent_singular, "resolvent: I - K is singular");
  const RealMatrix x = lu.solve(op.a);
  double tr = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) tr += x(i, i);
  if (!std::isfinite(tr)) fail(Errc::resolvent_singular, "resolvent: trace is not finite");
  return {lu.det(), tr};
}

double resolvent_trace(const Kernel& k, const IntervalSpec& j, std::size_t m) {
  return det_and_trace(discretize(k, j, m)).trace;
}

AdaptiveResult adaptive(const std::function<double(std::size_t)>& fn, std::size_t m0, double rtol) {
  if (!(rtol >= 1e-14)) fail(Errc::invalid_argument, "adaptive: rtol must be >= 1e-14");
  if (m0 < 1) fail(Errc::invalid_argument, "adaptive: m0 must be >= 1");
  constexpr std::size_t kMaxOrder = 2048;
  std::size_t m = m0;
  double prev = fn(m);
  while (2 * m <= kMaxOrder) {
    m *= 2;
    const double cur = fn(m);
    if (std::abs(cur - prev) <= rtol * std::max(std::abs(cur), std::abs(prev)) || cur == prev) return {cur, m};
    prev = cur;
  }
  throw NoConvergence("adaptive: no agreement within rtol up to order " + std::to_string(m), prev,
                      static_cast<int>(m));
}

}  // namespace rmtdpp
