#pragma once

// Exact DPP samplers: orthogonal projection (Householder), Hermitian
// (eigenvalue thinning), general (sequential Bernoulli observations with
// Schur-complement conditioning) and non-Hermitian projection kernels.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rmtdpp/matrix.hpp"
#include "rmtdpp/rng.hpp"

namespace rmtdpp {

enum class Outcome { out, in };
enum class Force { none, in, out };

struct Observation {
  std::size_t index;
  Outcome outcome;
  bool forced;
};

// Tolerance for Bernoulli parameters that stray outside [0, 1] by roundoff.
inline constexpr double kMarginalTol = 1e-9;
// Largest imaginary part accepted on a complex kernel's diagonal.
inline constexpr double kImagTol = 1e-10;

// Working copy of a marginal kernel plus the observation log. Observing i
// conditions the remaining indices on i being in or out of the sample,
// i.e. replaces the unobserved block by its Schur complement with pivot
// K[i,i] (in) or K[i,i] - 1 (out).
template <class T>
class DppState {
 public:
  explicit DppState(Matrix<T> k);

  // Throws InvalidMarginal when the current Bernoulli parameter leaves
  // [-tol, 1+tol], ForcedImpossible when forcing a probability-0 outcome.
  Outcome observe(std::size_t i, Rng& rng, Force force = Force::none);

  // Current Bernoulli parameter of an unobserved index.
  double marginal(std::size_t i) const;
  bool consumed(std::size_t i) const { return consumed_.at(i) != 0; }
  std::size_t size() const noexcept { return working_.rows(); }
  const Matrix<T>& working() const noexcept { return working_; }
  const std::vector<Observation>& log() const noexcept { return log_; }
  std::vector<std::size_t> sample() const;

 private:
  Matrix<T> working_;
  std::vector<char> consumed_;
  std::vector<Observation> log_;
};

// Sample of the DPP with marginal kernel K, observing indices in `order`
// (natural order when empty). Throws InvalidMarginal with the step index.
template <class T>
std::vector<std::size_t> sample_general(const Matrix<T>& k, Rng& rng, std::span<const std::size_t> order = {});

// Projection DPP onto the column span of Y (Y^T Y = I). Throws NotOrthonormal.
std::vector<std::size_t> sample_ortho_proj(const RealMatrix& y, Rng& rng);

// Symmetric K with spectrum in [0, 1]. Throws SpectrumOutOfRange.
std::vector<std::size_t> sample_hermitian(const RealMatrix& k, Rng& rng);

// Projection kernel K (K^2 = K), not necessarily Hermitian. Throws
// NotProjection, or NumericalBreakdown when a pivot vanishes mid-stream.
template <class T>
std::vector<std::size_t> sample_nonherm_proj(const Matrix<T>& k, Rng& rng);

// Observes indices one at a time without ever forming the full working
// matrix: entries of K are requested on demand and only the O(k^2) factors
// of the k observations made so far are stored. The observation sequence
// may be chosen adaptively.
template <class T>
class LazyDpp {
 public:
  using Entry = std::function<T(std::size_t, std::size_t)>;
  explicit LazyDpp(Entry k) : k_(std::move(k)) {}

  // Conditional Bernoulli parameter of j given all observations so far.
  double marginal(std::size_t j);
  Outcome observe(std::size_t j, Rng& rng, Force force = Force::none);

  const std::vector<Observation>& log() const noexcept { return log_; }
  std::size_t observed() const noexcept { return log_.size(); }

 private:
  // Fills l_, u_ for candidate j and returns its conditional diagonal.
  T prepare(std::size_t j);

  Entry k_;
  std::vector<std::size_t> idx_;
  std::vector<T> piv_;
  std::vector<std::vector<T>> rows_;  // rows_[t][s] = W_{s}(o_t, o_s) / piv_s
  std::vector<std::vector<T>> cols_;  // cols_[t][s] = W_{s}(o_s, o_t) / piv_s
  std::vector<Observation> log_;
  std::vector<T> l_, u_;
  std::optional<std::size_t> prepared_;
  T prepared_diag_{};
};

extern template class DppState<double>;
extern template class DppState<cplx>;
extern template class LazyDpp<double>;
extern template class LazyDpp<cplx>;
extern template std::vector<std::size_t> sample_general(const RealMatrix&, Rng&, std::span<const std::size_t>);
extern template std::vector<std::size_t> sample_general(const ComplexMatrix&, Rng&, std::span<const std::size_t>);
extern template std::vector<std::size_t> sample_nonherm_proj(const RealMatrix&, Rng&);
extern template std::vector<std::size_t> sample_nonherm_proj(const ComplexMatrix&, Rng&);

}  // namespace rmtdpp
