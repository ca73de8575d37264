#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rmtdpp/aztec.hpp"
#include "rmtdpp/error.hpp"
#include "rmtdpp/numlin.hpp"
#include "support.hpp"

using namespace rmtdpp;

namespace {

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

}  // namespace

TEST_CASE("graph sizes") {
  for (int n = 1; n <= 6; ++n) {
    AztecGraph g(n);
    CHECK(g.cells().size() == static_cast<std::size_t>(2 * n * (n + 1)));
    CHECK(g.black_count() == static_cast<std::size_t>(n * (n + 1)));
    CHECK(g.white_count() == static_cast<std::size_t>(n * (n + 1)));
    CHECK(g.edges().size() == static_cast<std::size_t>(4 * n * n));
    for (const auto& c : g.cells()) CHECK(std::abs(2 * c.x + 1) + std::abs(2 * c.y + 1) <= 2 * n);
  }
}

TEST_CASE("kernel is a projection with trace n(n+1)") {
  for (int n = 1; n <= 6; ++n) {
    ComplexMatrix k = build_kernel(n);
    cplx tr = 0;
    for (std::size_t i = 0; i < k.rows(); ++i) {
      tr += k(i, i);
      CHECK(std::abs(k(i, i).imag()) <= 1e-10);
      CHECK(k(i, i).real() >= -1e-10);
      CHECK(k(i, i).real() <= 1 + 1e-10);
    }
    CHECK(std::abs(tr.real() - n * (n + 1)) <= 1e-8);
    CHECK(max_abs_diff(matmul(k, k), k) <= 1e-8);
  }
}

TEST_CASE("order one tilings each have probability one half") {
  AztecKernel k(1);
  const AztecGraph& g = k.graph();
  std::vector<std::size_t> hor, ver;
  for (const auto& e : g.edges()) (e.orient == Orientation::horizontal ? hor : ver).push_back(e.id);
  REQUIRE(hor.size() == 2);
  REQUIRE(ver.size() == 2);
  ComplexMatrix dense = k.dense();
  for (const auto& pair : {hor, ver}) CHECK(std::abs(lu_det(dense.submatrix(pair, pair)) - 0.5) <= 1e-10);
}

TEST_CASE("order one and two tilings are uniform") {
  for (int n : {1, 2}) {
    AztecKernel k(n);
    const std::size_t draws = 20000, tilings = n == 1 ? 2 : 8;
    std::map<std::vector<std::size_t>, double> counts;
    Rng root(200 + n);
    for (std::size_t t = 0; t < draws; ++t) {
      Rng r = root.split(t + 1);
      Tiling s = sample_tiling(k, r);
      CHECK(s.dominoes.size() == static_cast<std::size_t>(n * (n + 1)));
      counts[edge_set(s)] += 1;
    }
    REQUIRE(counts.size() == tilings);
    std::vector<double> c, p;
    for (auto& [key, v] : counts) c.push_back(v), p.push_back(1.0 / tilings);
    const double stat = testsupport::chi2_stat(c, p);
    INFO("n = " << n << " chi2 = " << stat);
    CHECK(stat <= testsupport::chi2_crit_99(tilings - 1));
  }
}

TEST_CASE("samples tile the diamond") {
  Rng root(210);
  for (int n = 1; n <= 6; ++n) {
    AztecKernel k(n);
    for (int t = 0; t < 20; ++t) {
      Rng r = root.split(100 * n + t);
      Tiling s = sample_tiling(k, r);
      CHECK(s.dominoes.size() == static_cast<std::size_t>(n * (n + 1)));
      CHECK_NOTHROW(validate_tiling(k.graph(), s));
    }
  }
}

TEST_CASE("order one paths") {
  AztecKernel k(1);
  Rng root(220);
  std::set<std::string> seen;
  for (int t = 0; t < 50; ++t) {
    Rng r = root.split(t + 1);
    Tiling s = sample_tiling(k, r);
    auto paths = extract_paths(s);
    REQUIRE(paths.size() == 1);
    const bool horizontal = s.dominoes[0].orient == Orientation::horizontal;
    CHECK(path_key(paths[0]) == (horizontal ? "-" : "rf"));
    seen.insert(path_key(paths[0]));
  }
  CHECK(seen.size() == 2);
}

TEST_CASE("paths of a sampled tiling") {
  const int n = 10;
  Rng rng(230);
  Tiling s = sample_tiling(n, rng);
  auto paths = extract_paths(s);
  REQUIRE(paths.size() == static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const DrPath& p = paths[k];
    CHECK(p.x0 == -n + k);
    CHECK(p.y0 == -0.5 - k);
    CHECK(p.x_end() == n - k);
    CHECK(p.y_end() == p.y0);
    int rises = 0, falls = 0;
    int x = p.x0;
    double y = p.y0;
    for (const auto& g : p.segments) {
      CHECK(g.x == x);
      CHECK(g.y == y);
      if (g.step == Step::rise) ++rises, x += 1, y += 1;
      if (g.step == Step::fall) ++falls, x += 1, y -= 1;
      if (g.step == Step::flat) x += 2;
    }
    CHECK(rises == falls);
  }
  // No N domino lies on a path.
  std::map<std::size_t, Label> label;
  for (const auto& d : s.dominoes) label[d.edge] = d.label;
  for (const auto& p : paths)
    for (const auto& g : p.segments) CHECK(label.at(g.edge) != Label::N);
  // Extraction is deterministic.
  CHECK(path_json(extract_paths(s)[0]) == path_json(paths[0]));
}

TEST_CASE("top path sampler matches full-tiling extraction") {
  const int n = 3;
  AztecKernel k(n);
  const std::size_t draws = 20000;
  std::map<std::string, double> partial, full;
  Rng a(240), b(241);
  for (std::size_t t = 0; t < draws; ++t) {
    Rng r = a.split(t + 1);
    partial[path_key(sample_top_dr_path(k, r))] += 1;
    Rng q = b.split(t + 1);
    full[path_key(extract_paths(sample_tiling(k, q))[0])] += 1;
  }
  auto h = testsupport::chi2_two_sample(partial, full);
  INFO("chi2 = " << h.stat << " df = " << h.df);
  CHECK(h.df >= 3);
  CHECK(h.stat <= testsupport::chi2_crit_99(h.df));
}

TEST_CASE("order one top path law") {
  AztecKernel k(1);
  Rng root(250);
  double flat = 0;
  const std::size_t draws = 10000;
  for (std::size_t t = 0; t < draws; ++t) {
    Rng r = root.split(t + 1);
    flat += path_key(sample_top_dr_path(k, r)) == "-";
  }
  CHECK(std::abs(flat - draws / 2.0) <= 4 * std::sqrt(draws / 4.0));
}

TEST_CASE("top path runtime grows like n^3") {
  auto median_time = [](int n) {
    AztecKernel k(n);
    std::vector<double> ts;
    Rng root(260 + n);
    for (int rep = 0; rep < 41; ++rep) {
      Rng r = root.split(rep + 1);
      auto t0 = std::chrono::steady_clock::now();
      auto p = sample_top_dr_path(k, r);
      ts.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      CHECK(p.x_end() == n);
    }
    return testsupport::median(ts);
  };
  const double t16 = median_time(16), t32 = median_time(32);
  MESSAGE("median top path: n=16 " << t16 << " s, n=32 " << t32 << " s");
  CHECK(t32 / t16 <= 12.0);
}

TEST_CASE("serialisation") {
  Rng rng(270);
  Tiling s = sample_tiling(2, rng);
  const std::string text = tiling_text(s);
  CHECK(text.rfind("aztec n=2\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  CHECK(lines == 1 + s.dominoes.size());
  CHECK(tiling_json(s).find("\"dominoes\"") != std::string::npos);
  CHECK(path_json(extract_paths(s)[0]).find("\"end\"") != std::string::npos);
}

TEST_CASE("malformed tilings are rejected") {
  AztecGraph g(2);
  Tiling t;
  t.n = 2;
  try {
    validate_tiling(g, t);
    FAIL("expected MalformedTiling");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::malformed_tiling);
  }
}

TEST_CASE("arctic circle: the north polar region is frozen" * doctest::skip(std::getenv("RMTDPP_ARCTIC") == nullptr)) {
  const int n = 30, samples = 20, rows = 6;  // top 10% of the 2n rows
  AztecKernel k(n);
  double frac = 0;
  Rng root(280);
  for (int t = 0; t < samples; ++t) {
    Rng r = root.split(t + 1);
    Tiling s = sample_tiling(k, r);
    double top = 0, north = 0;
    for (const auto& d : s.dominoes) {
      if (d.y < n - rows) continue;
      top += 1;
      north += d.label == Label::N;
    }
    frac += north / top;
  }
  frac /= samples;
  MESSAGE("mean N fraction in the top rows: " << frac);
  CHECK(frac > 0.9);
}
