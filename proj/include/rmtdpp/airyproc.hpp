#pragma once

// The Airy process: sampling from the discretised extended Airy kernel,
// two-time distribution functions, and a Dyson Brownian motion reference.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rmtdpp/matrix.hpp"
#include "rmtdpp/rng.hpp"

namespace rmtdpp {

// Times (sorted, duplicates removed) and M cells of width (hi - lo) / M
// on [lo, hi], represented by their midpoints.
struct MultitimeGrid {
  MultitimeGrid(std::vector<double> times, double lo = -5.0, double hi = 2.5, std::size_t cells = 150);

  std::vector<double> times;
  double lo, hi;
  std::size_t cells;
  double dx;
  std::vector<double> mids;  // ascending

  std::size_t dim() const noexcept { return times.size() * cells; }
};

// Block (j, k) holds K_ext(t_j, x_a; t_k, x_b) dx; index j * M + a.
// Throws InvalidArgument when M < 16.
RealMatrix build_block_kernel(const MultitimeGrid& g);

struct ProcessPath {
  std::vector<double> times, values;
};

// In each time block the cells are observed from the top down until the
// first point, whose midpoint is recorded; lower cells are skipped. Throws
// NoEigenvalueFound when a whole block is empty.
ProcessPath sample_airy_path(const MultitimeGrid& g, const RealMatrix& kernel, Rng& rng);
ProcessPath sample_airy_path(const MultitimeGrid& g, Rng& rng);

// P(A(0) <= s1, A(t_gap) <= s2) by an m-point Nystrom rule per block on
// (s_i, 8). Equal times give F2(min(s1, s2)).
double two_time_prob(double t_gap, double s1, double s2, std::size_t m = 20);

// Largest eigenvalue of stationary N x N GUE diffusion (equilibrium
// exp(-tr H^2), so lambda_max ~ sqrt(2N)), observed at DBM times
// N^{-1/3} t and rescaled to sqrt2 N^{1/6} (lambda_max - sqrt(2N)).
ProcessPath simulate_dbm(std::size_t n, const std::vector<double>& times, Rng& rng);

// "t,value" rows after a "# seed=<seed>" line.
std::string path_csv(const ProcessPath& p, std::uint64_t seed);

}  // namespace rmtdpp
