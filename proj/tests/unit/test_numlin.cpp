#include <doctest.h>

#include <cmath>
#include <vector>

#include "rmtdpp/error.hpp"
#include "rmtdpp/numlin.hpp"
#include "rmtdpp/rng.hpp"

using namespace rmtdpp;

namespace {

RealMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  Rng rng(seed);
  RealMatrix a(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) a(i, j) = rng.normal();
  return a;
}

RealMatrix random_symmetric(std::size_t n, std::uint64_t seed) {
  RealMatrix a = random_matrix(n, n, seed);
  return (a + a.transpose()) * 0.5;
}

RealMatrix orthonormal_columns(std::size_t r, std::size_t c, std::uint64_t seed) {
  RealMatrix q = sym_eigen(random_symmetric(r, seed)).vectors;
  std::vector<std::size_t> rows(r), cols(c);
  for (std::size_t i = 0; i < r; ++i) rows[i] = i;
  for (std::size_t j = 0; j < c; ++j) cols[j] = j;
  return q.submatrix(rows, cols);
}

double orthonormality_defect(const RealMatrix& y, std::size_t first_col) {
  double d = 0;
  for (std::size_t a = first_col; a < y.cols(); ++a)
    for (std::size_t b = first_col; b < y.cols(); ++b) {
      double s = 0;
      for (std::size_t i = 0; i < y.rows(); ++i) s += y(i, a) * y(i, b);
      d = std::max(d, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  return d;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::invalid_argument;
}

}  // namespace

TEST_CASE("schur_step examples") {
  CHECK(schur_step(RealMatrix{{2, 1}, {1, 2}}, 0)(0, 0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(schur_step(RealMatrix::identity(2), 0)(0, 0) == 1.0);
  CHECK(std::abs(schur_step(RealMatrix{{0.5, 0.5}, {0.5, 0.5}}, 0)(0, 0)) < 1e-15);
}

TEST_CASE("schur_step exclusion branch divides by K(i,i) - 1") {
  RealMatrix k{{0.3, 0.2}, {0.1, 0.6}};
  CHECK(schur_step(k, 0, 1.0)(0, 0) == doctest::Approx(0.6 - 0.2 * 0.1 / (0.3 - 1.0)).epsilon(1e-15));
}

TEST_CASE("schur_step rejects tiny pivots") {
  RealMatrix k{{1e-13, 1}, {1, 1}};
  CHECK(code_of([&] { schur_step(k, 0); }) == Errc::pivot_too_small);
  RealMatrix one{{1.0, 0.3}, {0.3, 0.5}};
  CHECK(code_of([&] { schur_step(one, 0, 1.0); }) == Errc::pivot_too_small);
}

TEST_CASE("schur_step keeps the remaining order") {
  RealMatrix a = random_symmetric(4, 3);
  a(0, 0) += 5;
  a(2, 2) += 5;
  RealMatrix s = schur_step(a, 2);
  const std::size_t rest[] = {0, 1, 3};
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c)
      CHECK(s(r, c) == doctest::Approx(a(rest[r], rest[c]) - a(rest[r], 2) * a(2, rest[c]) / a(2, 2)).epsilon(1e-14));
}

TEST_CASE("block_schur examples") {
  const std::size_t p0[] = {0};
  RealMatrix i2 = block_schur(RealMatrix::identity(3), p0);
  CHECK(max_abs_diff(i2, RealMatrix::identity(2)) == 0.0);

  const std::size_t p1[] = {1};
  RealMatrix t = block_schur(RealMatrix{{2, 1, 0}, {1, 2, 1}, {0, 1, 2}}, p1);
  CHECK(max_abs_diff(t, RealMatrix{{1.5, -0.5}, {-0.5, 1.5}}) < 1e-15);
}

TEST_CASE("block_schur is order independent") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    RealMatrix a = random_matrix(5, 5, seed);
    for (std::size_t i = 0; i < 5; ++i) a(i, i) += 6;
    const std::size_t pins[] = {1, 3};
    RealMatrix b = block_schur(a, pins);
    // Eliminating index 1 then index 3 (now at position 2) and the reverse.
    RealMatrix s13 = schur_step(schur_step(a, 1), 2);
    RealMatrix s31 = schur_step(schur_step(a, 3), 1);
    CHECK(max_abs_diff(b, s13) <= 1e-11);
    CHECK(max_abs_diff(b, s31) <= 1e-11);
  }
}

TEST_CASE("block_schur on a random 3x3 equals two single steps") {
  RealMatrix a = random_matrix(3, 3, 11);
  for (std::size_t i = 0; i < 3; ++i) a(i, i) += 4;
  const std::size_t pins[] = {0, 1};
  CHECK(max_abs_diff(block_schur(a, pins), schur_step(schur_step(a, 0), 0)) <= 1e-12);
}

TEST_CASE("block_schur exclusion shift and singular blocks") {
  RealMatrix a{{0.4, 0.1, 0.2}, {0.1, 0.5, 0.1}, {0.2, 0.1, 0.3}};
  const std::size_t pins[] = {0};
  CHECK(max_abs_diff(block_schur(a, pins, 1.0), schur_step(a, 0, 1.0)) < 1e-15);
  RealMatrix s{{1, 1, 0}, {1, 1, 0}, {0, 0, 1}};
  const std::size_t both[] = {0, 1};
  CHECK(code_of([&] { block_schur(s, both); }) == Errc::singular_pinned_block);
}

TEST_CASE("determinant multiplicativity over a pinned block") {
  for (std::uint64_t seed = 20; seed < 25; ++seed) {
    RealMatrix a = random_matrix(6, 6, seed);
    for (std::size_t i = 0; i < 6; ++i) a(i, i) += 3;
    const std::size_t pins[] = {0, 2, 5};
    const double lhs = lu_det(a);
    const double rhs = lu_det(a.submatrix(pins, pins)) * lu_det(block_schur(a, pins));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs));
  }
}

TEST_CASE("complex schur and determinant") {
  ComplexMatrix a{{cplx(2, 1), cplx(0, 1)}, {cplx(1, 0), cplx(3, -1)}};
  CHECK(std::abs(schur_step(a, 0)(0, 0) - (cplx(3, -1) - cplx(0, 1) * cplx(1, 0) / cplx(2, 1))) < 1e-15);
  CHECK(std::abs(lu_det(a) - (cplx(2, 1) * cplx(3, -1) - cplx(0, 1))) < 1e-14);
}

TEST_CASE("householder_compress examples") {
  RealMatrix u{{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}};
  RealMatrix r = householder_compress(u, 0);
  CHECK(r(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(r(0, 1)) < 1e-15);

  RealMatrix e{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 0}};
  RealMatrix re = householder_compress(e, 0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(std::abs(re(i, j)) - std::abs(e(i, j))) < 1e-15);
}

TEST_CASE("householder_compress preserves orthonormality and row norms") {
  RealMatrix y = orthonormal_columns(5, 3, 7);
  for (std::size_t row = 0; row < 5; ++row) {
    RealMatrix z = householder_compress(y, row);
    double norm = 0;
    for (std::size_t j = 0; j < 3; ++j) norm += y(row, j) * y(row, j);
    CHECK(z(row, 0) == doctest::Approx(std::sqrt(norm)).epsilon(1e-13));
    for (std::size_t j = 1; j < 3; ++j) CHECK(std::abs(z(row, j)) < 1e-13);
    CHECK(orthonormality_defect(z, 0) <= 1e-12);
    for (std::size_t i = 0; i < 5; ++i) {
      double ny = 0, nz = 0;
      for (std::size_t j = 0; j < 3; ++j) ny += y(i, j) * y(i, j), nz += z(i, j) * z(i, j);
      CHECK(nz == doctest::Approx(ny).epsilon(1e-12));
    }
  }
}

TEST_CASE("householder_compress rejects a zero row") {
  RealMatrix y{{0, 0}, {1, 0}};
  CHECK(code_of([&] { householder_compress(y, 0); }) == Errc::zero_row);
}

TEST_CASE("sym_eigen examples") {
  auto d = sym_eigen(RealMatrix{{3, 0, 0}, {0, 1, 0}, {0, 0, 2}});
  CHECK(d.values == std::vector<double>{1, 2, 3});
  for (std::size_t j = 0; j < 3; ++j) {
    double mx = 0;
    for (std::size_t i = 0; i < 3; ++i) mx = std::max(mx, std::abs(d.vectors(i, j)));
    CHECK(mx == doctest::Approx(1.0).epsilon(1e-15));
  }
  auto f = sym_eigen(RealMatrix{{0, 1}, {1, 0}});
  CHECK(f.values[0] == doctest::Approx(-1).epsilon(1e-15));
  CHECK(f.values[1] == doctest::Approx(1).epsilon(1e-15));
}

TEST_CASE("sym_eigen reconstruction and orthonormality") {
  for (std::size_t n : {8u, 33u, 120u}) {
    RealMatrix a = random_symmetric(n, 40 + n);
    auto d = sym_eigen(a);
    double res = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0;
        for (std::size_t k = 0; k < n; ++k) s += a(i, k) * d.vectors(k, j);
        res = std::max(res, std::abs(s - d.vectors(i, j) * d.values[j]));
      }
    CHECK(res <= 1e-10 * a.max_abs());
    CHECK(orthonormality_defect(d.vectors, 0) <= 1e-12);
    CHECK(std::is_sorted(d.values.begin(), d.values.end()));
  }
}

TEST_CASE("sym_eigen of a projection") {
  RealMatrix y = orthonormal_columns(10, 4, 3);
  RealMatrix p = matmul(y, y.transpose());
  for (double v : sym_eigen(p).values) CHECK(std::min(std::abs(v), std::abs(v - 1)) <= 1e-10);
}

TEST_CASE("sym_eigen rejects asymmetric input") {
  RealMatrix a{{1, 2}, {0, 1}};
  CHECK(code_of([&] { sym_eigen(a); }) == Errc::invalid_argument);
}

TEST_CASE("herm_eigenvalues agree with the real embedding") {
  Rng rng(9);
  const std::size_t n = 12;
  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = rng.normal();
    for (std::size_t j = 0; j < i; ++j) {
      h(i, j) = {rng.normal(), rng.normal()};
      h(j, i) = std::conj(h(i, j));
    }
  }
  // [[Re, -Im], [Im, Re]] has every eigenvalue of h twice.
  RealMatrix e(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      e(i, j) = e(i + n, j + n) = h(i, j).real();
      e(i + n, j) = h(i, j).imag();
      e(i, j + n) = -h(i, j).imag();
    }
  auto ev = herm_eigenvalues(h);
  auto er = sym_eigen(e).values;
  for (std::size_t k = 0; k < n; ++k) CHECK(ev[k] == doctest::Approx(er[2 * k]).epsilon(1e-12));
}

TEST_CASE("lu_det and lu_solve") {
  CHECK(lu_det(RealMatrix::identity(4)) == 1.0);
  CHECK(lu_det(RealMatrix{{2, 1}, {1, 2}}) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(lu_det(RealMatrix{{0, 1}, {1, 0}}) == -1.0);

  RealMatrix s = random_symmetric(6, 77);
  double prod = 1;
  for (double v : sym_eigen(s).values) prod *= v;
  CHECK(std::abs(lu_det(s) - prod) <= 1e-9 * std::abs(prod));

  RealMatrix a = random_matrix(7, 7, 5), b = random_matrix(7, 3, 6);
  RealMatrix x = lu_solve(a, b);
  CHECK(max_abs_diff(matmul(a, x), b) <= 1e-10 * a.max_abs() * b.max_abs());

  RealMatrix sing{{1, 2}, {2, 4}};
  CHECK(code_of([&] { lu_det(sing); }) == Errc::singular);
  CHECK(code_of([&] { lu_solve(sing, RealMatrix::identity(2)); }) == Errc::singular);
}
