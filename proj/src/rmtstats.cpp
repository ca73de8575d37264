#include "rmtdpp/rmtstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "rmtdpp/error.hpp"
#include "rmtdpp/numlin.hpp"
#include "rmtdpp/specfun.hpp"

namespace rmtdpp {

// ---------------------------------------------------------------- ensembles

KernelPtr EnsembleEdge::kernel() const {
  switch (variant) {
    case Variant::soft: {
      static const KernelPtr k = airy_kernel();
      return k;
    }
    case Variant::hard:
      return bessel_kernel(alpha);
    case Variant::bulk: {
      static const KernelPtr k = sine_kernel();
      return k;
    }
    case Variant::finite_gue:
      return hermite_kernel(n);
  }
  fail(Errc::unsupported_variant, "unknown ensemble variant");
}

std::string EnsembleEdge::label() const {
  switch (variant) {
    case Variant::soft:
      return "soft";
    case Variant::hard:
      return "hard(alpha=" + std::to_string(alpha) + ")";
    case Variant::bulk:
      return "bulk";
    case Variant::finite_gue:
      return "gue(N=" + std::to_string(n) + ")";
  }
  return "?";
}

IntervalSpec EnsembleEdge::gap_interval(double s) const {
  switch (variant) {
    case Variant::soft:
    case Variant::finite_gue:
      return IntervalSpec::right_infinite(s);
    case Variant::hard:
      return IntervalSpec::finite(0.0, s);
    case Variant::bulk:
      break;
  }
  fail(Errc::unsupported_variant, "the bulk has no extreme eigenvalue");
}

std::size_t EnsembleEdge::order_for(double s, std::size_t base) const {
  double scale = 0.0;
  if (variant == Variant::soft) scale = 1.0;
  if (variant == Variant::finite_gue) scale = std::numbers::sqrt2 * std::cbrt(std::sqrt(static_cast<double>(n)));
  if (scale == 0.0) return base;
  const double len = (kernel()->right_cutoff() - s) * scale;
  return std::max(base, static_cast<std::size_t>(std::ceil(std::max(0.0, 2.0 * len))));
}

namespace {

void require_edge(const EnsembleEdge& e) {
  if (e.variant == EnsembleEdge::Variant::bulk) fail(Errc::unsupported_variant, "the bulk has no extreme eigenvalue");
  if (e.variant == EnsembleEdge::Variant::hard && e.alpha < 0) {
    fail(Errc::unsupported_order, "hard edge needs alpha >= 0");
  }
}

struct Conditional {
  double pre = 0.0;  // Gram determinant of the pins (1 without pins)
  double det = 0.0;
  double trace = 0.0;
};

// det(I - K^{(pins)} | j), optionally with the resolvent trace, and the Gram
// prefactor. Returns all zeros when the prefactor is below kPdfFloor.
Conditional conditional(const KernelPtr& k, std::vector<double> pins, const IntervalSpec& j, std::size_t m,
                        bool with_trace) {
  Conditional c;
  KernelPtr kk = k;
  c.pre = 1.0;
  if (!pins.empty()) {
    // A numerically singular Gram block means the pins nearly coincide on
    // the kernel's scale; the density carries det(Gram) and is negligible.
    const LuFactor<double> gram(k->matrix(pins));
    if (gram.singular() || gram.pivot_ratio() > kCondTol) return {};
    c.pre = gram.det();
    if (!(c.pre > kPdfFloor)) return {};
    kk = condition_on(k, std::move(pins));
  }
  const NystromOperator op = discretize(*kk, j, m);
  if (with_trace) {
    const DetTrace dt = det_and_trace(op);
    c.det = dt.det;
    c.trace = dt.trace;
  } else {
    c.det = fredholm_det(op);
  }
  return c;
}

bool below_support(const EnsembleEdge& e, double s) { return e.variant == EnsembleEdge::Variant::hard && s <= 0.0; }

}  // namespace

// ---------------------------------------------------------------- extremes

double gap_probability(const EnsembleEdge& e, double s, std::size_t m) {
  require_edge(e);
  if (below_support(e, s)) return 1.0;
  return fredholm_det(*e.kernel(), e.gap_interval(s), e.order_for(s, m));
}

double extreme_cdf(const EnsembleEdge& e, double s, std::size_t m) {
  const double g = gap_probability(e, s, m);
  return e.largest() ? g : 1.0 - g;
}

double extreme_ccdf(const EnsembleEdge& e, double s, std::size_t m) {
  const double g = gap_probability(e, s, m);
  return e.largest() ? 1.0 - g : g;
}

double extreme_pdf(const EnsembleEdge& e, double s, std::size_t m) {
  require_edge(e);
  if (below_support(e, s)) return 0.0;
  const Conditional c = conditional(e.kernel(), {s}, e.gap_interval(s), e.order_for(s, m), false);
  return c.pre * c.det;
}

// ---------------------------------------------------------------- second

namespace {

// P(at most one eigenvalue in the gap interval).
double at_most_one(const EnsembleEdge& e, double s, std::size_t m) {
  require_edge(e);
  if (below_support(e, s)) return 1.0;
  const Conditional c = conditional(e.kernel(), {}, e.gap_interval(s), e.order_for(s, m), true);
  return c.det * (1.0 + c.trace);
}

}  // namespace

double second_cdf(const EnsembleEdge& e, double s, std::size_t m) {
  const double p = at_most_one(e, s, m);
  return e.largest() ? p : 1.0 - p;
}

double second_ccdf(const EnsembleEdge& e, double s, std::size_t m) {
  const double p = at_most_one(e, s, m);
  return e.largest() ? 1.0 - p : p;
}

double second_pdf(const EnsembleEdge& e, double s, std::size_t m) {
  require_edge(e);
  if (below_support(e, s)) return 0.0;
  const Conditional c = conditional(e.kernel(), {s}, e.gap_interval(s), e.order_for(s, m), true);
  return c.pre * c.det * c.trace;
}

// ---------------------------------------------------------------- joint

double joint_pdf_extremes(const EnsembleEdge& e, std::span<const double> xs, std::size_t m) {
  require_edge(e);
  if (xs.empty()) fail(Errc::invalid_argument, "joint pdf needs at least one point");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const bool ordered = e.largest() ? xs[i] < xs[i - 1] : xs[i] > xs[i - 1];
    if (!ordered || std::abs(xs[i] - xs[i - 1]) < 1e-9) return 0.0;
  }
  const double last = xs.back();
  if (below_support(e, xs.front())) return 0.0;
  const Conditional c = conditional(e.kernel(), {xs.begin(), xs.end()}, e.gap_interval(last), e.order_for(last, m),
                                    false);
  return c.pre * c.det;
}

// ---------------------------------------------------------------- bulk

namespace {

const KernelPtr& sine_pinned_at_zero() {
  static const KernelPtr k = condition_on(sine_kernel(), {0.0});
  return k;
}

std::size_t bulk_order(double s, std::size_t m) {
  return std::max(m, static_cast<std::size_t>(std::ceil(3.0 * s)));
}

}  // namespace

double bulk_empty_prob(double s, std::size_t m) {
  if (s <= 0.0) return 1.0;
  return fredholm_det(*sine_kernel(), IntervalSpec::finite(0.0, s), bulk_order(s, m));
}

double bulk_gap_ccdf(double s, std::size_t m) {
  if (s <= 0.0) return 1.0;
  return fredholm_det(*sine_pinned_at_zero(), IntervalSpec::finite(0.0, s), bulk_order(s, m));
}

double bulk_gap_pdf(double s, std::size_t m) {
  if (s <= 0.0) return 0.0;
  const KernelPtr& k0 = sine_pinned_at_zero();
  const double pre = k0->diag(s);
  if (!(pre > kPdfFloor)) return 0.0;
  const auto k = condition_on(sine_kernel(), {0.0, s});
  return pre * fredholm_det(*k, IntervalSpec::finite(0.0, s), bulk_order(s, m));
}

// ---------------------------------------------------------------- moments

namespace {

MomentSummary summarise(const std::function<double(double)>& pdf, const NodesWeights& nw) {
  double s0 = 0, s1 = 0;
  std::vector<double> p(nw.points.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = pdf(nw.points[i]) * nw.weights[i];
    s0 += p[i];
    s1 += p[i] * nw.points[i];
  }
  MomentSummary m;
  m.mass = s0;
  m.mean = s1 / s0;
  double c2 = 0, c3 = 0, c4 = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = nw.points[i] - m.mean, d2 = d * d;
    c2 += p[i] * d2;
    c3 += p[i] * d2 * d;
    c4 += p[i] * d2 * d2;
  }
  c2 /= s0;
  c3 /= s0;
  c4 /= s0;
  m.variance = c2;
  m.skewness = c3 / std::pow(c2, 1.5);
  m.excess_kurtosis = c4 / (c2 * c2) - 3.0;
  return m;
}

double moment_gap(const MomentSummary& a, const MomentSummary& b) {
  auto rel = [](double x, double y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); };
  return std::max({rel(a.mean, b.mean), rel(a.variance, b.variance), rel(a.skewness, b.skewness),
                   rel(a.excess_kurtosis, b.excess_kurtosis), rel(a.mass, b.mass)});
}

NodesWeights support_rule(const IntervalSpec& support, std::size_t n, bool sqrt_map) {
  if (!sqrt_map) return map_rule(support, n, std::numeric_limits<double>::infinity());
  if (support.kind != IntervalSpec::Kind::finite || support.a < 0.0) {
    fail(Errc::invalid_argument, "sqrt-mapped moments need a finite support in [0, inf)");
  }
  NodesWeights r = map_rule(IntervalSpec::finite(std::sqrt(support.a), std::sqrt(support.b)), n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = r.points[i];
    r.weights[i] *= 2.0 * u;
    r.points[i] = u * u;
  }
  return r;
}

}  // namespace

MomentSummary moments(const std::function<double(double)>& pdf, const IntervalSpec& support, const MomentOptions& opt) {
  if (support.kind != IntervalSpec::Kind::finite) {
    fail(Errc::invalid_argument, "moments need a finite (truncated) support");
  }
  if (!(opt.rtol >= 1e-14)) fail(Errc::invalid_argument, "moments: rtol must be >= 1e-14");
  std::size_t n = std::max<std::size_t>(opt.order0, 2);
  MomentSummary prev = summarise(pdf, support_rule(support, n, opt.sqrt_map));
  while (2 * n <= 2048) {
    n *= 2;
    MomentSummary cur = summarise(pdf, support_rule(support, n, opt.sqrt_map));
    cur.order_used = n;
    cur.est_error = moment_gap(cur, prev);
    if (cur.est_error <= opt.rtol) return cur;
    prev = cur;
  }
  throw NoConvergence("moments: no agreement within rtol up to order 2048", prev.mean, static_cast<int>(n));
}

namespace {

IntervalSpec extreme_support(const EnsembleEdge& e, const PipelineOptions& opt, bool& sqrt_map) {
  sqrt_map = false;
  switch (e.variant) {
    case EnsembleEdge::Variant::soft:
      return IntervalSpec::finite(opt.soft_lo, opt.soft_hi);
    case EnsembleEdge::Variant::hard:
      sqrt_map = true;
      return IntervalSpec::finite(0.0, opt.hard_max + 40.0 * std::max(0, e.alpha - 2));
    case EnsembleEdge::Variant::finite_gue: {
      const double c = std::sqrt(2.0 * e.n), sc = std::numbers::sqrt2 * std::cbrt(std::sqrt(double(e.n)));
      return IntervalSpec::finite(c + opt.soft_lo / sc, c + opt.soft_hi / sc);
    }
    case EnsembleEdge::Variant::bulk:
      break;
  }
  fail(Errc::unsupported_variant, "the bulk has no extreme eigenvalue");
}

}  // namespace

MomentSummary extreme_moments(const EnsembleEdge& e, const PipelineOptions& opt) {
  bool sq = false;
  const IntervalSpec sup = extreme_support(e, opt, sq);
  return moments([&](double s) { return extreme_pdf(e, s, opt.inner_order); }, sup, {opt.moment_order, opt.rtol, sq});
}

MomentSummary second_moments(const EnsembleEdge& e, const PipelineOptions& opt) {
  bool sq = false;
  const IntervalSpec sup = extreme_support(e, opt, sq);
  return moments([&](double s) { return second_pdf(e, s, opt.inner_order); }, sup, {opt.moment_order, opt.rtol, sq});
}

MomentSummary bulk_gap_moments(const PipelineOptions& opt) {
  return moments([&](double s) { return bulk_gap_pdf(s, opt.inner_order); }, IntervalSpec::finite(0.0, opt.bulk_max),
                 {opt.moment_order, opt.rtol, false});
}

// ---------------------------------------------------------------- 2-D rules

namespace {

// Sums of the joint density of (lambda_1, lambda_2) over the truncated
// region, with the region parameterised so both pins stay separated:
//   soft: lambda_1 = x in [lo + 2, hi], lambda_2 = x - (x - lo) v,
//   hard: lambda_2 = r^2 with r in (0, sqrt(max)), lambda_1 = lambda_2 v.
struct JointSums {
  double mass = 0, e1 = 0, e2 = 0, cross = 0;
  double gap[5] = {0, 0, 0, 0, 0};  // sums of (lambda_1 - lambda_2)^k
};

JointSums joint_sums(const EnsembleEdge& e, std::size_t n, const PipelineOptions& opt) {
  JointSums s;
  const NodesWeights v = map_rule(IntervalSpec::finite(0.0, 1.0), n, 0.0);
  NodesWeights outer;
  if (e.variant == EnsembleEdge::Variant::hard) {
    bool sq = false;
    const double top = extreme_support(e, opt, sq).b;
    outer = map_rule(IntervalSpec::finite(0.0, std::sqrt(top)), n, 0.0);
  } else if (e.variant == EnsembleEdge::Variant::soft) {
    outer = map_rule(IntervalSpec::finite(opt.soft_lo + 2.0, opt.soft_hi), n, 0.0);
  } else {
    fail(Errc::unsupported_variant, "joint statistics are implemented for the soft and hard edges");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double x1, x2, w;
      if (e.variant == EnsembleEdge::Variant::hard) {
        const double r = outer.points[i];
        x2 = r * r;
        x1 = x2 * v.points[j];
        w = outer.weights[i] * v.weights[j] * 2.0 * r * x2;
        // Smallest eigenvalue first: the density takes (x1 < x2).
        const double xs[2] = {x1, x2};
        const double f = joint_pdf_extremes(e, xs, opt.inner_order) * w;
        s.mass += f;
        s.e1 += f * x1;
        s.e2 += f * x2;
        s.cross += f * x1 * x2;
        double g = 1.0;
        for (int k = 0; k < 5; ++k, g *= (x2 - x1)) s.gap[k] += f * g;
      } else {
        x1 = outer.points[i];
        const double d = (x1 - opt.soft_lo) * v.points[j];
        x2 = x1 - d;
        w = outer.weights[i] * v.weights[j] * (x1 - opt.soft_lo);
        const double xs[2] = {x1, x2};
        const double f = joint_pdf_extremes(e, xs, opt.inner_order) * w;
        s.mass += f;
        s.e1 += f * x1;
        s.e2 += f * x2;
        s.cross += f * x1 * x2;
        double g = 1.0;
        for (int k = 0; k < 5; ++k, g *= d) s.gap[k] += f * g;
      }
    }
  }
  return s;
}

MomentSummary gap_summary(const JointSums& s) {
  MomentSummary m;
  m.mass = s.mass;
  const double r1 = s.gap[1] / s.mass, r2 = s.gap[2] / s.mass, r3 = s.gap[3] / s.mass, r4 = s.gap[4] / s.mass;
  m.mean = r1;
  m.variance = r2 - r1 * r1;
  const double c3 = r3 - 3 * r1 * r2 + 2 * r1 * r1 * r1;
  const double c4 = r4 - 4 * r1 * r3 + 6 * r1 * r1 * r2 - 3 * r1 * r1 * r1 * r1;
  m.skewness = c3 / std::pow(m.variance, 1.5);
  m.excess_kurtosis = c4 / (m.variance * m.variance) - 3.0;
  return m;
}

}  // namespace

MomentSummary spacing_moments(const EnsembleEdge& e, const PipelineOptions& opt) {
  if (e.variant != EnsembleEdge::Variant::soft) fail(Errc::unsupported_variant, "spacing laws are for the soft edge");
  MomentSummary fine = gap_summary(joint_sums(e, opt.grid, opt));
  const MomentSummary coarse = gap_summary(joint_sums(e, std::max<std::size_t>(opt.grid / 2, 2), opt));
  fine.order_used = opt.grid;
  fine.est_error = moment_gap(fine, coarse);
  return fine;
}

CorrResult corr_coeff(const EnsembleEdge& e, const PipelineOptions& opt) {
  if (e.variant != EnsembleEdge::Variant::soft && e.variant != EnsembleEdge::Variant::hard) {
    fail(Errc::unsupported_variant, "correlation is implemented for the soft and hard edges");
  }
  const MomentSummary m1 = extreme_moments(e, opt);
  const MomentSummary m2 = second_moments(e, opt);
  auto rho_of = [&](const JointSums& s) {
    return (s.cross / s.mass - m1.mean * m2.mean) / std::sqrt(m1.variance * m2.variance);
  };
  const JointSums fine = joint_sums(e, opt.grid, opt);
  const JointSums coarse = joint_sums(e, std::max<std::size_t>(opt.grid / 2, 2), opt);
  CorrResult r;
  r.mean1 = m1.mean;
  r.mean2 = m2.mean;
  r.var1 = m1.variance;
  r.var2 = m2.variance;
  r.cross = fine.cross / fine.mass;
  r.mass = fine.mass;
  r.rho = rho_of(fine);
  r.est_error = std::max({std::abs(r.rho - rho_of(coarse)), m1.est_error, m2.est_error});
  return r;
}

// ---------------------------------------------------------------- spacing

double spacing_pdf(const EnsembleEdge& e, double d, const PipelineOptions& opt) {
  if (e.variant != EnsembleEdge::Variant::soft) fail(Errc::unsupported_variant, "spacing laws are for the soft edge");
  if (d <= 0.0) return 0.0;
  const double lo = std::max(opt.soft_lo + 2.0, opt.soft_lo + d), hi = opt.soft_hi;
  if (lo >= hi) return 0.0;
  const NodesWeights r = map_rule(IntervalSpec::finite(lo, hi), opt.grid, 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const double xs[2] = {r.points[i], r.points[i] - d};
    sum += r.weights[i] * joint_pdf_extremes(e, xs, opt.inner_order);
  }
  return sum;
}

double spacing_cdf(const EnsembleEdge& e, double d, const PipelineOptions& opt) {
  if (e.variant != EnsembleEdge::Variant::soft) fail(Errc::unsupported_variant, "spacing laws are for the soft edge");
  if (d <= 0.0) return 0.0;
  // 1 - P(lambda_1 = x and no other eigenvalue in (x - d, inf)).
  const NodesWeights r = map_rule(IntervalSpec::finite(opt.soft_lo + 2.0, opt.soft_hi), opt.grid, 0.0);
  const KernelPtr k = e.kernel();
  double sum = 0.0;
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const double x = r.points[i];
    const Conditional c = conditional(k, {x}, IntervalSpec::right_infinite(x - d), e.order_for(x - d, opt.inner_order),
                                      false);
    sum += r.weights[i] * c.pre * c.det;
  }
  return 1.0 - sum;
}

}  // namespace rmtdpp
