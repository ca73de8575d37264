#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rmtdpp {

struct AiryValue {
  double ai;
  double aip;
};

// Ai(x) and Ai'(x). Taylor continuation from a table of extended-precision
// anchors on [-12, 10], asymptotic expansions outside.
AiryValue airy(double x) noexcept;

// Harmonic-oscillator wavefunction exp(-x^2/2) H_j(x) / sqrt(2^j sqrt(pi) j!).
double hermite_phi(unsigned j, double x) noexcept;

// Writes phi_0(x) .. phi_{out.size()-1}(x).
void hermite_phi_all(double x, std::span<double> out) noexcept;

struct BesselValue {
  double j;
  double jp;
};

// J_alpha(x) and J_alpha'(x) for integer alpha >= 0, x >= 0.
// Throws UnsupportedOrder for non-integer or negative alpha.
BesselValue bessel_j(double alpha, double x);

// J_0(x) .. J_{out.size()-1}(x), x >= 0.
void bessel_j_seq(double x, std::span<double> out);

struct QuadratureRule {
  std::size_t order = 0;
  std::vector<double> nodes;    // ascending, in (-1, 1)
  std::vector<double> weights;  // positive
};

// m-point Gauss-Legendre rule on (-1, 1). Rules are computed once per order
// and cached; the returned reference stays valid for the program lifetime.
const QuadratureRule& gauss_legendre(std::size_t m);

}  // namespace rmtdpp
