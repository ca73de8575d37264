// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Usage: acceptance <path-to-rmtdpp-cli>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "dpp_oracle.hpp"
#include "rmtdpp/airyproc.hpp"
#include "rmtdpp/aztec.hpp"
#include "rmtdpp/rmtstats.hpp"
#include "rmtdpp/samplers.hpp"
#include "support.hpp"

using namespace rmtdpp;
namespace ts = testsupport;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

template <class F>
auto timed(double& secs, F f) {
  const auto t0 = Clock::now();
  auto r = f();
  secs = seconds_since(t0);
  return r;
}

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("criterion %2d %s  %s: %s\n", id, pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

// Accumulates sub-checks of one criterion and the worst observed margins.
struct Check {
  bool ok = true;
  std::ostringstream log;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      log << "[failed] ";
    }
    log << what << "; ";
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void moments_within(Check& c, const std::string& label, const MomentSummary& got, const double want[4], double tol) {
  const double vals[4] = {got.mean, got.variance, got.skewness, got.excess_kurtosis};
  double worst = 0;
  for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(vals[i] - want[i]));
  c.require(worst <= tol, label + " max err " + fmt(worst));
}

void criterion_1() {
  Check c;
  struct Case {
    const char* label;
    EnsembleEdge e;
    double rho;
  };
  const Case cases[] = {{"soft", EnsembleEdge::soft(), 0.50564723159},
                        {"hard a=0", EnsembleEdge::hard(0), 0.33761908522},
                        {"hard a=1", EnsembleEdge::hard(1), 0.39173569302},
                        {"hard a=2", EnsembleEdge::hard(2), 0.41718791541}};
  for (const auto& k : cases) {
    double secs = 0;
    auto r = timed(secs, [&] { return corr_coeff(k.e); });
    c.require(std::abs(r.rho - k.rho) <= 1e-8 && secs <= 600,
              std::string(k.label) + " err " + fmt(std::abs(r.rho - k.rho)) + " in " + fmt(secs) + " s");
  }
  report(1, "correlation coefficients", c.ok, c.log.str());
}

void criterion_2() {
  Check c;
  double secs = 0;
  auto m = timed(secs, [] { return bulk_gap_moments(); });
  const double want[4] = {1.0, 0.1799938776918, 0.4970636204918, 0.1266998480399};
  moments_within(c, "bulk gap", m, want, 1e-9);
  c.require(secs <= 10, "runtime " + fmt(secs) + " s");
  report(2, "bulk gap moments", c.ok, c.log.str());
}

void criterion_3() {
  Check c;
  struct Row {
    const char* label;
    EnsembleEdge e;
    double first[4], second[4];
  };
  const Row rows[] = {
      {"soft", EnsembleEdge::soft(), {-1.771087, 0.813195, 0.224084, 0.093448}, {-3.675437, 0.540545, 0.125027, 0.021740}},
      {"hard a=0", EnsembleEdge::hard(0), {4, 16, 2, 6}, {24.362715, 140.367319, 0.924147, 1.225112}},
      {"hard a=1", EnsembleEdge::hard(1), {10.873127, 55.745139, 1.320312, 2.541266}, {40.812203, 259.898510, 0.737801, 0.764990}},
      {"hard a=2", EnsembleEdge::hard(2), {20.362715, 124.367319, 1.015815, 1.461306}, {60.112814, 416.851440, 0.622605, 0.532483}},
  };
  const auto t0 = Clock::now();
  for (const auto& r : rows) {
    const MomentSummary first = extreme_moments(r.e), second = second_moments(r.e);
    moments_within(c, std::string(r.label) + " l1", first, r.first, 1e-4);
    moments_within(c, std::string(r.label) + " l2", second, r.second, 1e-4);
    if (r.e.variant == EnsembleEdge::Variant::hard && r.e.alpha == 0) moments_within(c, "hard a=0 l1 exact", first, r.first, 1e-8);
  }
  const double secs = seconds_since(t0);
  c.require(secs <= 60, "runtime " + fmt(secs) + " s");
  report(3, "extreme eigenvalue moments", c.ok, c.log.str());
}

void criterion_4() {
  Check c;
  double secs = 0;
  auto m = timed(secs, [] { return spacing_moments(EnsembleEdge::soft()); });
  const double want[4] = {1.904350489721, 0.683252055105, 0.562291976040, 0.270091960715};
  moments_within(c, "first spacing", m, want, 1e-8);
  c.require(secs <= 600, "runtime " + fmt(secs) + " s");
  report(4, "first spacing moments", c.ok, c.log.str());
}

void criterion_5() {
  Check c;
  const auto t0 = Clock::now();
  double worst = 0;
  for (int k = 0; k <= 8; ++k) {
    const double s = -4.0 + 0.5 * k;
    const double ref = extreme_pdf(EnsembleEdge::soft(), s, 80);
    worst = std::max(worst, std::abs(extreme_pdf(EnsembleEdge::soft(), s, 20) / ref - 1));
  }
  const double secs = seconds_since(t0);
  c.require(worst <= 1e-7, "max rel err " + fmt(worst));
  c.require(secs <= 30, "runtime " + fmt(secs) + " s");
  report(5, "Tracy-Widom pdf at m=20", c.ok, c.log.str());
}

void criterion_6() {
  Check c;
  const double h = 1e-4;
  auto central = [&](const std::function<double(double)>& f, double s) { return (f(s + h) - f(s - h)) / (2 * h); };
  auto worst_over = [&](const std::vector<double>& grid, const std::function<double(double)>& f, const std::function<double(double)>& df) {
    double w = 0;
    for (double s : grid) w = std::max(w, std::abs(central(f, s) - df(s)));
    return w;
  };
  const auto soft = EnsembleEdge::soft(), hard = EnsembleEdge::hard(1);
  const std::vector<double> soft_grid = {-5, -4, -3, -2, -1, 0, 1, 2};
  const std::vector<double> hard_grid = {0.5, 1, 2, 5, 10, 20, 40};
  const std::vector<double> bulk_grid = {0.25, 0.5, 1, 1.5, 2, 3};
  const double e_soft = worst_over(soft_grid, [&](double s) { return extreme_cdf(soft, s); }, [&](double s) { return extreme_pdf(soft, s); });
  const double e_hard = worst_over(hard_grid, [&](double s) { return extreme_cdf(hard, s); }, [&](double s) { return extreme_pdf(hard, s); });
  const double e_bulk = std::max(worst_over(bulk_grid, [](double s) { return -bulk_empty_prob(s); }, [](double s) { return bulk_gap_ccdf(s); }),
                                 worst_over(bulk_grid, [](double s) { return -bulk_gap_ccdf(s); }, [](double s) { return bulk_gap_pdf(s); }));
  const double e_second =
      std::max(worst_over(soft_grid, [&](double s) { return second_cdf(soft, s); }, [&](double s) { return second_pdf(soft, s); }),
               worst_over(hard_grid, [&](double s) { return second_cdf(hard, s); }, [&](double s) { return second_pdf(hard, s); }));
  c.require(e_soft <= 2e-6, "soft " + fmt(e_soft));
  c.require(e_hard <= 2e-6, "hard a=1 " + fmt(e_hard));
  c.require(e_bulk <= 2e-6, "bulk " + fmt(e_bulk));
  c.require(e_second <= 2e-6, "second eigenvalue " + fmt(e_second));
  report(6, "derivative identities", c.ok, c.log.str());
}

void criterion_7() {
  Check c;
  const std::size_t draws = 200000;

  // (a) atom law on 4x4 kernels: symmetric, and a nonsymmetric similarity transform of it.
  RealMatrix k = ts::with_spectrum({0.15, 0.4, 0.7, 0.9}, 71);
  RealMatrix nk(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) nk(i, j) = k(i, j) * (1.0 + i) / (1.0 + j);
  const auto p = ts::atom_probs(k);
  Rng ra(700);
  auto fa = ts::atom_fit(p, draws, [&](std::size_t t) {
    Rng g = ra.split(t + 1);
    return sample_general(k, g);
  });
  auto fn = ts::atom_fit(p, draws, [&](std::size_t t) {
    Rng g = ra.split(draws + t + 1);
    return sample_general(nk, g);
  });
  c.require(fa.max_z <= 4 && fa.impossible == 0, "(a) symmetric max z " + fmt(fa.max_z));
  c.require(fn.max_z <= 4 && fn.impossible == 0, "(a) nonsymmetric max z " + fmt(fn.max_z));

  // (b) projection kernels of rank 3 on 8 points.
  {
    const std::size_t n = 8, r = 3;
    RealMatrix q = ts::random_orthogonal(n, 72);
    std::vector<std::size_t> rows(n), cols(r);
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    RealMatrix y = q.submatrix(rows, cols), pk = matmul(y, y.transpose()), npk(n, n);
    ComplexMatrix cpk(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        npk(i, j) = pk(i, j) * (1.0 + i) / (1.0 + j);
        cpk(i, j) = pk(i, j) * std::polar(1.0, 0.4 * (double(i) - double(j)));
      }
    std::size_t bad = 0, total = 0;
    Rng rb(701);
    for (std::size_t t = 0; t < 2000; ++t) {
      Rng g[5] = {rb.split(5 * t + 1), rb.split(5 * t + 2), rb.split(5 * t + 3), rb.split(5 * t + 4), rb.split(5 * t + 5)};
      bad += sample_ortho_proj(y, g[0]).size() != r;
      bad += sample_hermitian(pk, g[1]).size() != r;
      bad += sample_nonherm_proj(npk, g[2]).size() != r;
      bad += sample_nonherm_proj(cpk, g[3]).size() != r;
      bad += sample_general(pk, g[4]).size() != r;
      total += 5;
    }
    c.require(bad == 0, "(b) " + std::to_string(total - bad) + "/" + std::to_string(total) + " draws of rank size");
  }

  // (c), (d) on a 6x6 kernel with known spectrum.
  {
    const std::vector<double> spec = {0.1, 0.3, 0.5, 0.6, 0.8, 0.2};
    RealMatrix kk = ts::with_spectrum(spec, 73);
    double tr = 0, var = 0;
    for (std::size_t i = 0; i < 6; ++i) tr += kk(i, i);
    for (double l : spec) var += l * (1 - l);
    const double empty = lu_det(RealMatrix::identity(6) - kk);
    double size = 0, zeros = 0;
    Rng rc(702);
    for (std::size_t t = 0; t < draws; ++t) {
      Rng g = rc.split(t + 1);
      auto s = sample_general(kk, g);
      size += static_cast<double>(s.size());
      zeros += s.empty();
    }
    const double n = static_cast<double>(draws);
    const double zc = std::abs(size / n - tr) / std::sqrt(var / n);
    const double zd = std::abs(zeros / n - empty) / std::sqrt(empty * (1 - empty) / n);
    c.require(zc <= 3, "(c) E|J| z " + fmt(zc));
    c.require(zd <= 3, "(d) P(empty) z " + fmt(zd));
  }

  // (e) fixed and random observation orders against the same atom law.
  {
    const std::vector<std::size_t> reversed = {3, 2, 1, 0};
    Rng re(703);
    auto fr = ts::atom_fit(p, draws, [&](std::size_t t) {
      Rng g = re.split(t + 1);
      return sample_general(k, g, reversed);
    });
    auto fp = ts::atom_fit(p, draws, [&](std::size_t t) {
      Rng g = re.split(draws + t + 1);
      std::vector<std::size_t> order = {0, 1, 2, 3};
      for (std::size_t i = 3; i > 0; --i) std::swap(order[i], order[static_cast<std::size_t>(g.uniform() * (i + 1))]);
      return sample_general(k, g, order);
    });
    c.require(fr.max_z <= 4 && fr.impossible == 0, "(e) reversed order max z " + fmt(fr.max_z));
    c.require(fp.max_z <= 4 && fp.impossible == 0, "(e) random order max z " + fmt(fp.max_z));
  }
  report(7, "sampler correctness", c.ok, c.log.str());
}

std::vector<std::size_t> edge_set(const Tiling& t) {
  std::vector<std::size_t> e;
  for (const auto& d : t.dominoes) e.push_back(d.edge);
  return e;
}

std::string path_key(const DrPath& p) {
  std::string s;
  for (const auto& g : p.segments) s += g.step == Step::rise ? 'r' : g.step == Step::fall ? 'f' : '-';
  return s;
}

void criterion_8() {
  Check c;
  const std::size_t draws = 20000;
  for (int n : {1, 2}) {
    AztecKernel k(n);
    const std::size_t tilings = n == 1 ? 2 : 8;
    std::map<std::vector<std::size_t>, double> counts;
    std::size_t wrong_size = 0;
    Rng root(800 + n);
    for (std::size_t t = 0; t < draws; ++t) {
      Rng r = root.split(t + 1);
      Tiling s = sample_tiling(k, r);
      wrong_size += s.dominoes.size() != static_cast<std::size_t>(n * (n + 1));
      counts[edge_set(s)] += 1;
    }
    std::vector<double> cnt, prob;
    for (auto& [key, v] : counts) cnt.push_back(v), prob.push_back(1.0 / tilings);
    const double stat = ts::chi2_stat(cnt, prob);
    c.require(counts.size() == tilings && stat <= ts::chi2_crit_99(tilings - 1) && wrong_size == 0,
              "n=" + std::to_string(n) + " " + std::to_string(counts.size()) + " tilings chi2 " + fmt(stat));
  }
  {
    std::size_t wrong = 0;
    Rng root(803);
    for (int n = 3; n <= 12; ++n) {
      AztecKernel k(n);
      for (int t = 0; t < 10; ++t) {
        Rng r = root.split(100 * n + t);
        wrong += sample_tiling(k, r).dominoes.size() != static_cast<std::size_t>(n * (n + 1));
      }
    }
    c.require(wrong == 0, "n(n+1) dominoes for n=3..12");
  }
  {
    AztecKernel k(3);
    std::map<std::string, double> partial, full;
    Rng a(804), b(805);
    for (std::size_t t = 0; t < draws; ++t) {
      Rng r = a.split(t + 1);
      partial[path_key(sample_top_dr_path(k, r))] += 1;
      Rng q = b.split(t + 1);
      full[path_key(extract_paths(sample_tiling(k, q))[0])] += 1;
    }
    auto h = ts::chi2_two_sample(partial, full);
    c.require(h.stat <= ts::chi2_crit_99(h.df), "top path n=3 chi2 " + fmt(h.stat) + " df " + std::to_string(h.df));
  }
  {
    auto median_time = [](int n) {
      AztecKernel k(n);
      std::vector<double> ts_;
      Rng root(810 + n);
      for (int rep = 0; rep < 41; ++rep) {
        Rng r = root.split(rep + 1);
        const auto t0 = Clock::now();
        sample_top_dr_path(k, r);
        ts_.push_back(seconds_since(t0));
      }
      return ts::median(ts_);
    };
    const double t16 = median_time(16), t32 = median_time(32);
    c.require(t32 / t16 <= 12, "time ratio n=32/n=16 " + fmt(t32 / t16));
  }
  report(8, "Aztec diamond", c.ok, c.log.str());
}

void criterion_9() {
  Check c;
  auto f2 = [](double s) { return extreme_cdf(EnsembleEdge::soft(), s); };
  {
    MultitimeGrid g({0.0}, -5, 2.5, 60);
    RealMatrix k = build_block_kernel(g);
    const std::size_t n = 2000;
    std::vector<double> xs;
    Rng root(900);
    for (std::size_t i = 0; i < n; ++i) {
      Rng r = root.split(i + 1);
      xs.push_back(sample_airy_path(g, k, r).values[0]);
    }
    // Recorded values are cell midpoints; P(value <= mid) is F2 at the cell's upper edge.
    const double d = ts::ks_distance_lattice(xs, g.mids, [&](double x) { return f2(x + 0.5 * g.dx); });
    c.require(d <= ts::ks_crit_99(n), "KS " + fmt(d) + " (1% critical " + fmt(ts::ks_crit_99(n)) + ")");
  }
  {
    MultitimeGrid g({-2.0, -1.0, 0.0, 1.0, 2.0}, -5, 2.5, 50);
    RealMatrix k = build_block_kernel(g);
    const std::size_t n = 400;
    std::vector<std::vector<double>> vals(5);
    Rng root(910);
    for (std::size_t i = 0; i < n; ++i) {
      Rng r = root.split(i + 1);
      auto path = sample_airy_path(g, k, r);
      for (std::size_t j = 0; j < 5; ++j) vals[j].push_back(path.values[j]);
    }
    // Sampling sd of a variance is sigma^2 sqrt((kurt + 2) / n); 4 sd band.
    const double var = 0.8132, band = 4 * var * std::sqrt((0.093448 + 2) / n);
    double lo = 1e300, hi = -1e300, off = 0;
    for (const auto& v : vals) {
      const double s2 = ts::variance(v);
      lo = std::min(lo, s2), hi = std::max(hi, s2), off = std::max(off, std::abs(s2 - var));
    }
    c.require(off <= band && hi - lo <= band, "variances in [" + fmt(lo) + ", " + fmt(hi) + "], band " + fmt(band));
  }
  {
    double worst0 = 0, worst10 = 0;
    for (double s : {-3.0, -2.0, -1.0, 0.0}) worst0 = std::max(worst0, std::abs(two_time_prob(0.0, s, s) - f2(s)));
    for (double s1 : {-3.0, -1.5, 0.5})
      for (double s2 : {-2.5, -1.0}) worst0 = std::max(worst0, std::abs(two_time_prob(0.0, s1, s2) - f2(std::min(s1, s2))));
    for (double s1 : {-3.0, -1.5, 0.5})
      for (double s2 : {-2.5, -1.0}) worst10 = std::max(worst10, std::abs(two_time_prob(10.0, s1, s2) - f2(s1) * f2(s2)));
    c.require(worst0 <= 1e-8, "t_gap=0 err " + fmt(worst0));
    c.require(worst10 <= 1e-3, "t_gap=10 max |P - F2 F2| " + fmt(worst10));
  }
  report(9, "Airy process", c.ok, c.log.str());
}

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& cli, const std::string& args) {
  const std::string cmd = "'" + cli + "' " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
  const int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

void criterion_10(const std::string& cli) {
  Check c;
  const char* cmds[] = {
      "sample gue --N 16 --count 4 --seed 101",
      "sample aztec --n 8 --seed 102",
      "sample aztec --n 5 --seed 103 --format json",
      "sample dr-path --n 14 --count 3 --seed 104",
      "sample airy-process --t -1:0.5:1 --grid 40 --count 3 --seed 105",
      "sample dbm --N 30 --t 0:0.25:1 --seed 106",
      "dist --stat extreme-pdf --edge soft --grid -4:0.5:0",
      "moments --stat bulk-gap",
  };
  for (const char* cmd : cmds) {
    auto a = run(cli, cmd), b = run(cli, cmd);
    c.require(a.status == 0 && !a.out.empty() && a.out == b.out, cmd);
  }
  report(10, "CLI determinism", c.ok, c.log.str());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <rmtdpp-cli>\n", argv[0]);
    return 2;
  }
  const std::vector<std::function<void()>> checks = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                                      criterion_6, criterion_7, criterion_8, criterion_9,
                                                      [&] { criterion_10(argv[1]); }};
  for (std::size_t i = 0; i < checks.size(); ++i) {
    try {
      checks[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), "exception", false, e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, checks.size());
  return failures ? 1 : 0;
}
