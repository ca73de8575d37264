#pragma once

// Dense linear algebra: single and block Schur complements (the conditioning
// step of every DPP sampler here), Householder row compression, LU with
// partial pivoting, and a symmetric eigensolver.

#include <cstddef>
#include <span>
#include <vector>

#include "rmtdpp/matrix.hpp"

namespace rmtdpp {

// Smallest pivot magnitude accepted by schur_step.
inline constexpr double kPivotTol = 1e-12;

// One unpivoted elimination step on index i with pivot A[i,i] - shift.
// Returns the (n-1)x(n-1) Schur complement on the remaining indices, in
// their original relative order. shift = 0 conditions on i being present,
// shift = 1 on i being absent. Throws PivotTooSmall when |pivot| < kPivotTol.
template <class T>
Matrix<T> schur_step(const Matrix<T>& a, std::size_t i, double shift = 0.0);

// K_BB - K_BA (K_AA - shift I)^{-1} K_AB for A = pinned, B = complement
// (ascending). Throws SingularPinnedBlock when K_AA - shift I is singular
// or its condition estimate exceeds kCondTol.
template <class T>
Matrix<T> block_schur(const Matrix<T>& a, std::span<const std::size_t> pinned, double shift = 0.0);

inline constexpr double kCondTol = 1e12;

// Returns Y Q with Q an orthogonal Householder reflector chosen so that
// row `row` of the result is (||Y[row,:]||, 0, ..., 0). Throws ZeroRow when
// that row norm is below 1e-14.
RealMatrix householder_compress(const RealMatrix& y, std::size_t row);

// LU factorisation with partial pivoting, PA = LU packed in one matrix.
template <class T>
class LuFactor {
 public:
  explicit LuFactor(Matrix<T> a);

  std::size_t size() const noexcept { return lu_.rows(); }
  // True when some pivot magnitude fell below 1e-300.
  bool singular() const noexcept { return singular_; }
  // Determinant including the permutation sign; 0 when singular().
  T det() const noexcept;
  // Ratio of largest to smallest pivot magnitude; a cheap conditioning proxy.
  double pivot_ratio() const noexcept;
  // Solves A X = B. Throws Singular when singular().
  Matrix<T> solve(const Matrix<T>& b) const;
  void solve_inplace(std::span<T> rhs) const;

  const Matrix<T>& packed() const noexcept { return lu_; }

 private:
  Matrix<T> lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
  bool singular_ = false;
};

// Determinant via LuFactor. Throws Singular when a pivot underflows 1e-300.
template <class T>
T lu_det(const Matrix<T>& a);

// Solves A X = B. Throws Singular when a pivot underflows 1e-300.
template <class T>
Matrix<T> lu_solve(const Matrix<T>& a, const Matrix<T>& b);

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  RealMatrix vectors;          // column j pairs with values[j]
};

// Symmetric eigendecomposition: Householder tridiagonalisation followed by
// implicit QL with Wilkinson shifts (at most 30 sweeps per eigenvalue).
// Asymmetry up to 1e-12 ||A|| is removed by symmetrising; larger asymmetry
// is an InvalidArgument.
EigenDecomposition sym_eigen(const RealMatrix& a);

// Eigenvalues (ascending) of a Hermitian matrix: unitary tridiagonalisation
// then the same QL iteration without vectors.
std::vector<double> herm_eigenvalues(const ComplexMatrix& a);

extern template RealMatrix schur_step(const RealMatrix&, std::size_t, double);
extern template ComplexMatrix schur_step(const ComplexMatrix&, std::size_t, double);
extern template RealMatrix block_schur(const RealMatrix&, std::span<const std::size_t>, double);
extern template ComplexMatrix block_schur(const ComplexMatrix&, std::span<const std::size_t>, double);
extern template class LuFactor<double>;
extern template class LuFactor<cplx>;
extern template double lu_det(const RealMatrix&);
extern template cplx lu_det(const ComplexMatrix&);
extern template RealMatrix lu_solve(const RealMatrix&, const RealMatrix&);
extern template ComplexMatrix lu_solve(const ComplexMatrix&, const ComplexMatrix&);

}  // namespace rmtdpp
