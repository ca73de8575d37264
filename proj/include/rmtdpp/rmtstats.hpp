#pragma once

// Eigenvalue statistics of the soft edge (Airy), hard edge (Bessel), bulk
// (sine) and finite GUE (Hermite) as Fredholm determinants of conditional
// kernels.

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "rmtdpp/fredholm.hpp"
#include "rmtdpp/kernels.hpp"

namespace rmtdpp {

struct EnsembleEdge {
  enum class Variant { soft, hard, bulk, finite_gue };

  Variant variant = Variant::soft;
  int alpha = 0;   // hard edge
  unsigned n = 0;  // finite GUE

  static EnsembleEdge soft() { return {Variant::soft, 0, 0}; }
  static EnsembleEdge hard(int alpha) { return {Variant::hard, alpha, 0}; }
  static EnsembleEdge bulk() { return {Variant::bulk, 0, 0}; }
  static EnsembleEdge finite_gue(unsigned n) { return {Variant::finite_gue, 0, n}; }

  KernelPtr kernel() const;
  // Largest eigenvalues for soft/finite, smallest for hard.
  bool largest() const noexcept { return variant != Variant::hard; }
  std::string label() const;
  // The interval that must be empty for s to be the extreme eigenvalue:
  // (s, inf) or (0, s).
  IntervalSpec gap_interval(double s) const;
  // Fredholm order for that interval: `base`, raised on long soft-edge
  // intervals so the node spacing stays below one half.
  std::size_t order_for(double s, std::size_t base) const;
};

inline constexpr std::size_t kStandaloneOrder = 40;
inline constexpr std::size_t kInnerOrder = 20;
// Below this prefactor K(s,s) (or Gram determinant) densities are 0.
inline constexpr double kPdfFloor = 1e-280;

// P(no eigenvalue in gap_interval(s)).
double gap_probability(const EnsembleEdge& e, double s, std::size_t m = kStandaloneOrder);

// CDF of the extreme eigenvalue (lambda_max for soft/finite, lambda_min for
// hard) and its complement. Bulk throws UnsupportedVariant.
double extreme_cdf(const EnsembleEdge& e, double s, std::size_t m = kStandaloneOrder);
double extreme_ccdf(const EnsembleEdge& e, double s, std::size_t m = kStandaloneOrder);
double extreme_pdf(const EnsembleEdge& e, double s, std::size_t m = kStandaloneOrder);

// Bulk: E(0;s), gap ccdf F(0;s) given an eigenvalue at 0, and its density.
double bulk_empty_prob(double s, std::size_t m = kStandaloneOrder);
double bulk_gap_ccdf(double s, std::size_t m = kStandaloneOrder);
double bulk_gap_pdf(double s, std::size_t m = kStandaloneOrder);

// Second extreme eigenvalue: CDF P(lambda_2 <= s) and P(lambda_2 >= s).
// For the hard edge lambda_2 is the second smallest.
double second_cdf(const EnsembleEdge& e, double s, std::size_t m = kStandaloneOrder);
double second_ccdf(const EnsembleEdge& e, double s, std::size_t m = kStandaloneOrder);
double second_pdf(const EnsembleEdge& e, double s, std::size_t m = kStandaloneOrder);

// Joint density of the k = xs.size() extreme eigenvalues at xs, which must
// be strictly ordered away from the edge's direction (decreasing for soft,
// increasing for hard); 0 otherwise or when two points nearly coincide.
double joint_pdf_extremes(const EnsembleEdge& e, std::span<const double> xs, std::size_t m = kInnerOrder);

struct PipelineOptions {
  std::size_t inner_order = kInnerOrder;  // base Fredholm order inside integrals
  std::size_t grid = 80;                  // per-axis nodes of 2-D rules
  std::size_t moment_order = 20;          // starting order of adaptive 1-D rules
  double rtol = 1e-10;
  double soft_lo = -10.0, soft_hi = 8.0;  // truncation box, soft edge
  double hard_max = 330.0;                // hard edge support (0, hard_max]
  double bulk_max = 12.0;                 // bulk gap support (0, bulk_max)
};

// First spacing lambda_1 - lambda_2 at the soft (or finite) edge.
double spacing_pdf(const EnsembleEdge& e, double d, const PipelineOptions& opt = {});
double spacing_cdf(const EnsembleEdge& e, double d, const PipelineOptions& opt = {});

struct MomentSummary {
  double mean = 0, variance = 0, skewness = 0, excess_kurtosis = 0;
  double mass = 0;  // integral of the density over the support
  std::size_t order_used = 0;
  double est_error = 0;
};

struct MomentOptions {
  std::size_t order0 = 20;
  double rtol = 1e-10;
  // Integrate in r = sqrt(x) on (0, b); suits hard-edge densities.
  bool sqrt_map = false;
};

// Standardised moments of a density over a finite support, doubling the
// Gauss-Legendre order until all four agree within rtol.
MomentSummary moments(const std::function<double(double)>& pdf, const IntervalSpec& support,
                      const MomentOptions& opt = {});

MomentSummary extreme_moments(const EnsembleEdge& e, const PipelineOptions& opt = {});
MomentSummary second_moments(const EnsembleEdge& e, const PipelineOptions& opt = {});
MomentSummary bulk_gap_moments(const PipelineOptions& opt = {});
MomentSummary spacing_moments(const EnsembleEdge& e, const PipelineOptions& opt = {});

struct CorrResult {
  double rho = 0;
  double mean1 = 0, mean2 = 0, var1 = 0, var2 = 0;
  double cross = 0;  // E[lambda_1 lambda_2]
  double mass = 0;   // joint density mass on the truncated region
  double est_error = 0;
};

// Pearson correlation of the two extreme eigenvalues (soft or hard edge).
CorrResult corr_coeff(const EnsembleEdge& e, const PipelineOptions& opt = {});

}  // namespace rmtdpp
