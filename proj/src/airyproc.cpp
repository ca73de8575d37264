#include "rmtdpp/airyproc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "rmtdpp/error.hpp"
#include "rmtdpp/kernels.hpp"
#include "rmtdpp/numlin.hpp"
#include "rmtdpp/samplers.hpp"
#include "rmtdpp/simd.hpp"
#include "rmtdpp/specfun.hpp"

namespace rmtdpp {

MultitimeGrid::MultitimeGrid(std::vector<double> t, double lo_, double hi_, std::size_t m)
    : times(std::move(t)), lo(lo_), hi(hi_), cells(m) {
  if (times.empty()) fail(Errc::invalid_argument, "multitime grid needs at least one time");
  if (!(hi > lo) || m == 0) fail(Errc::invalid_argument, "multitime grid needs lo < hi and at least one cell");
  for (double v : times)
    if (!std::isfinite(v)) fail(Errc::invalid_argument, "multitime grid: non-finite time");
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  dx = (hi - lo) / static_cast<double>(m);
  mids.resize(m);
  for (std::size_t a = 0; a < m; ++a) mids[a] = lo + (static_cast<double>(a) + 0.5) * dx;
}

namespace {

// Rows Ai(x_a + lambda_l) for a fixed lambda rule.
RealMatrix airy_table(const std::vector<double>& xs, const std::vector<double>& nodes) {
  RealMatrix a(xs.size(), nodes.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t l = 0; l < nodes.size(); ++l) a(i, l) = airy(xs[i] + nodes[l]).ai;
  return a;
}

// out(a, b) = sign * sum_l A(a,l) A(b,l) w_l e^{-lambda_l tau}
void gram_block(const RealMatrix& a, const std::vector<double>& nodes, const std::vector<double>& weights, double tau,
                double sign, RealMatrix& out) {
  std::vector<double> w(nodes.size());
  for (std::size_t l = 0; l < nodes.size(); ++l) w[l] = sign * weights[l] * std::exp(-tau * nodes[l]);
  out = RealMatrix(a.rows(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.rows(); ++j)
      out(i, j) = simd::dot_weighted(nodes.size(), a.row(i).data(), a.row(j).data(), w.data());
}

// K_ext(s, x_a; t, x_b) for all pairs of grid points.
RealMatrix ext_block(double s, double t, const std::vector<double>& xs, const RealMatrix& pos_table,
                     const ExtendedAiryKernel::LambdaRule& pos) {
  const double tau = s - t;
  RealMatrix out;
  if (tau == 0.0) return AiryKernel().matrix(xs);
  if (tau > 0.0) {
    gram_block(pos_table, pos.nodes, pos.weights, tau, 1.0, out);
    return out;
  }
  const double g = -tau;
  if (g < 1.0) {
    gram_block(pos_table, pos.nodes, pos.weights, tau, 1.0, out);
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < xs.size(); ++j) out(i, j) -= ExtendedAiryKernel::heat_term(g, xs[i], xs[j]);
    return out;
  }
  const auto neg = ExtendedAiryKernel::negative_rule(g);
  gram_block(airy_table(xs, neg.nodes), neg.nodes, neg.weights, tau, -1.0, out);
  return out;
}

}  // namespace

RealMatrix build_block_kernel(const MultitimeGrid& g) {
  if (g.cells < 16) fail(Errc::invalid_argument, "block kernel needs at least 16 cells per time");
  const std::size_t m = g.cells, n = g.times.size();
  const auto pos = ExtendedAiryKernel::lambda_rule(g.lo);
  const RealMatrix table = airy_table(g.mids, pos.nodes);
  RealMatrix k(n * m, n * m);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < n; ++l) {
      const RealMatrix b = ext_block(g.times[j], g.times[l], g.mids, table, pos);
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t c = 0; c < m; ++c) k(j * m + a, l * m + c) = b(a, c) * g.dx;
    }
  }
  return k;
}

ProcessPath sample_airy_path(const MultitimeGrid& g, const RealMatrix& kernel, Rng& rng) {
  if (kernel.rows() != g.dim() || !kernel.square()) fail(Errc::invalid_argument, "kernel does not match the grid");
  LazyDpp<double> dpp([&kernel](std::size_t i, std::size_t j) { return kernel(i, j); });
  ProcessPath p;
  p.times = g.times;
  for (std::size_t j = 0; j < g.times.size(); ++j) {
    bool found = false;
    for (std::size_t a = g.cells; a-- > 0;) {
      if (dpp.observe(j * g.cells + a, rng) == Outcome::in) {
        p.values.push_back(g.mids[a]);
        found = true;
        break;
      }
    }
    if (!found) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", g.times[j]);
      fail(Errc::no_eigenvalue_found, std::string("no point in the block at t = ") + buf);
    }
  }
  return p;
}

ProcessPath sample_airy_path(const MultitimeGrid& g, Rng& rng) {
  return sample_airy_path(g, build_block_kernel(g), rng);
}

double two_time_prob(double t_gap, double s1, double s2, std::size_t m) {
  if (m < 2) fail(Errc::invalid_argument, "two_time_prob: order must be >= 2");
  if (!std::isfinite(t_gap) || std::isnan(s1) || std::isnan(s2)) fail(Errc::invalid_argument, "two_time_prob: bad arguments");
  constexpr double kCut = 8.0;
  if (t_gap < 0.0) {
    t_gap = -t_gap;
    std::swap(s1, s2);
  }
  if (t_gap == 0.0) {
    s1 = std::min(s1, s2);
    s2 = kCut;
  }
  const auto& rule = gauss_legendre(m);
  std::vector<double> xs[2], sw[2];
  const double ss[2] = {s1, s2};
  for (int b = 0; b < 2; ++b) {
    if (ss[b] >= kCut) continue;
    const double half = 0.5 * (kCut - ss[b]), mid = 0.5 * (kCut + ss[b]);
    for (std::size_t i = 0; i < m; ++i) {
      xs[b].push_back(mid + half * rule.nodes[i]);
      sw[b].push_back(std::sqrt(half * rule.weights[i]));
    }
  }
  const double times[2] = {0.0, t_gap};
  const std::size_t n0 = xs[0].size(), dim = n0 + xs[1].size();
  if (dim == 0) return 1.0;
  RealMatrix a(dim, dim);
  for (int bi = 0; bi < 2; ++bi) {
    for (int bj = 0; bj < 2; ++bj) {
      if (xs[bi].empty() || xs[bj].empty()) continue;
      const RealMatrix k = bi == bj ? AiryKernel().matrix(xs[bi], xs[bj])
                                    : ExtendedAiryKernel(times[bi], times[bj]).matrix(xs[bi], xs[bj]);
      const std::size_t oi = bi ? n0 : 0, oj = bj ? n0 : 0;
      for (std::size_t i = 0; i < xs[bi].size(); ++i)
        for (std::size_t j = 0; j < xs[bj].size(); ++j)
          a(oi + i, oj + j) = (i + oi == j + oj ? 1.0 : 0.0) - sw[bi][i] * k(i, j) * sw[bj][j];
    }
  }
  LuFactor<double> lu(a);
  return lu.det();
}

ProcessPath simulate_dbm(std::size_t n, const std::vector<double>& times, Rng& rng) {
  if (n < 2) fail(Errc::invalid_argument, "simulate_dbm: N must be >= 2");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] >= times[i - 1])) fail(Errc::invalid_argument, "simulate_dbm: times must be ascending");
  const double nd = static_cast<double>(n);
  // Equilibrium entries: diagonal N(0, 1/2), off-diagonal real and imaginary
  // parts N(0, 1/4).
  auto gue = [&](ComplexMatrix& z) {
    for (std::size_t i = 0; i < n; ++i) {
      z(i, i) = rng.normal() * std::sqrt(0.5);
      for (std::size_t j = 0; j < i; ++j) {
        const double re = rng.normal() * 0.5, im = rng.normal() * 0.5;
        z(i, j) = {re, im};
        z(j, i) = {re, -im};
      }
    }
  };
  ComplexMatrix h(n, n), z(n, n);
  gue(h);
  ProcessPath p;
  p.times = times;
  const double time_scale = std::pow(nd, -1.0 / 3.0), edge = std::sqrt(2.0 * nd), zoom = std::sqrt(2.0) * std::pow(nd, 1.0 / 6.0);
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (k > 0) {
      // Exact Ornstein-Uhlenbeck step dH = -H dt + dB, E|dB_ij|^2 = dt.
      const double dt = (times[k] - times[k - 1]) * time_scale;
      if (dt > 0.0) {
        gue(z);
        const double decay = std::exp(-dt), noise = std::sqrt(-std::expm1(-2.0 * dt));
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) h(i, j) = decay * h(i, j) + noise * z(i, j);
      }
    }
    p.values.push_back(zoom * (herm_eigenvalues(h).back() - edge));
  }
  return p;
}

std::string path_csv(const ProcessPath& p, std::uint64_t seed) {
  std::string s = "# seed=" + std::to_string(seed) + "\nt,value\n";
  char buf[64];
  for (std::size_t i = 0; i < p.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.times[i], p.values[i]);
    s += buf;
  }
  return s;
}

}  // namespace rmtdpp
