#include "rmtdpp/aztec.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include "rmtdpp/error.hpp"
#include "rmtdpp/numlin.hpp"
#include "rmtdpp/samplers.hpp"

namespace rmtdpp {

char label_char(Label l) noexcept {
  switch (l) {
    case Label::N: return 'N';
    case Label::S: return 'S';
    case Label::E: return 'E';
    case Label::W: return 'W';
  }
  return '?';
}

namespace {

Label classify(Orientation o, int first_parity) {
  if (o == Orientation::horizontal) return first_parity == 0 ? Label::N : Label::S;
  return first_parity == 1 ? Label::W : Label::E;
}

const char* step_name(Step s) {
  switch (s) {
    case Step::rise: return "rise";
    case Step::fall: return "fall";
    case Step::flat: return "flat";
  }
  return "?";
}

}  // namespace

// ------------------------------------------------------------------ graph

std::size_t AztecGraph::slot(int x, int y) const noexcept {
  return static_cast<std::size_t>(x + n_) * static_cast<std::size_t>(2 * n_) + static_cast<std::size_t>(y + n_);
}

bool AztecGraph::contains(int x, int y) const noexcept {
  return std::abs(2 * x + 1) + std::abs(2 * y + 1) <= 2 * n_;
}

std::size_t AztecGraph::cell_index(int x, int y) const noexcept {
  return contains(x, y) ? grid_[slot(x, y)] : npos;
}

std::size_t AztecGraph::edge_at(int x, int y, Orientation o) const noexcept {
  if (!contains(x, y)) return npos;
  return o == Orientation::horizontal ? hedge_[slot(x, y)] : vedge_[slot(x, y)];
}

AztecGraph::AztecGraph(int n) : n_(n) {
  if (n < 1) fail(Errc::invalid_argument, "Aztec diamond order must be >= 1");
  const std::size_t side = static_cast<std::size_t>(2 * n);
  grid_.assign(side * side, npos);
  hedge_.assign(side * side, npos);
  vedge_.assign(side * side, npos);
  std::vector<std::size_t> colour_slot;
  for (int y = -n; y < n; ++y) {
    for (int x = -n; x < n; ++x) {
      if (!contains(x, y)) continue;
      const int parity = ((x + y + n) % 2 + 2) % 2;
      grid_[slot(x, y)] = cells_.size();
      auto& cls = parity == 1 ? black_ : white_;
      colour_slot.push_back(cls.size());
      cls.push_back(cells_.size());
      cells_.push_back({x, y, parity});
    }
  }
  auto add = [&](int x, int y, int x2, int y2, Orientation o) {
    if (!contains(x2, y2)) return;
    const std::size_t a = grid_[slot(x, y)], b = grid_[slot(x2, y2)];
    const bool a_black = cells_[a].parity == 1;
    Edge e{edges_.size(), x, y, o, classify(o, cells_[a].parity), colour_slot[a_black ? a : b],
           colour_slot[a_black ? b : a]};
    (o == Orientation::horizontal ? hedge_ : vedge_)[slot(x, y)] = e.id;
    edges_.push_back(e);
  };
  for (const Cell& c : std::vector<Cell>(cells_)) {
    add(c.x, c.y, c.x + 1, c.y, Orientation::horizontal);
    add(c.x, c.y, c.x, c.y + 1, Orientation::vertical);
  }
}

// ----------------------------------------------------------------- kernel

namespace {

ComplexMatrix invert(const ComplexMatrix& m, int n) {
  LuFactor<cplx> lu(m);
  if (lu.singular()) fail(Errc::singular_kasteleyn, "Kasteleyn matrix of order " + std::to_string(n));
  return lu.solve(ComplexMatrix::identity(m.rows()));
}

// Max-norm balancing: s with max_j a(b,j) s_b / s_j ~ max_j a(j,b) s_j / s_b.
std::vector<double> balance(const RealMatrix& a) {
  const std::size_t nb = a.rows();
  std::vector<double> s(nb, 1.0);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double change = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      double r = 0.0, c = 0.0;
      for (std::size_t j = 0; j < nb; ++j) {
        if (j == b) continue;
        r = std::max(r, a(b, j) * s[b] / s[j]);
        c = std::max(c, a(j, b) * s[j] / s[b]);
      }
      if (r > 0.0 && c > 0.0) {
        const double f = std::sqrt(c / r);
        s[b] *= f;
        change = std::max(change, std::abs(std::log(f)));
      }
    }
    if (change < 1e-2) break;
  }
  return s;
}

}  // namespace

// Entries of Kast^{-1} grow like exp(c n), which both loses accuracy in the
// inverse and wrecks later Schur updates. Rescaling black vertex b by s_b
// and white vertex w by t_w is a gauge change (same dimer measure) that maps
// K to D K D^{-1} with D_e = s_{b_e}, leaving principal minors unchanged.
// s balances the black-to-black coupling of a first inverse; t_w undoes the
// geometric mean of s around w so the rescaled Kasteleyn matrix, which is
// then inverted again, stays well conditioned.
AztecKernel::AztecKernel(int n) : g_(n) {
  const std::size_t nb = g_.black_count();
  ComplexMatrix kast(nb, nb);
  for (const Edge& e : g_.edges()) {
    kast(e.black, e.white) = e.orient == Orientation::horizontal ? cplx{1.0, 0.0} : cplx{0.0, 1.0};
  }
  const ComplexMatrix rough = invert(kast, n);

  std::vector<std::vector<std::size_t>> wn(nb), bn(nb);
  for (const Edge& e : g_.edges()) {
    wn[e.black].push_back(e.white);
    bn[e.white].push_back(e.black);
  }
  RealMatrix a(nb, nb);
  for (std::size_t b = 0; b < nb; ++b)
    for (std::size_t w : wn[b])
      for (std::size_t c = 0; c < nb; ++c) a(b, c) = std::max(a(b, c), std::abs(rough(w, c)));
  const std::vector<double> s = balance(a);
  std::vector<double> t(nb);
  for (std::size_t w = 0; w < nb; ++w) {
    double lg = 0.0;
    for (std::size_t b : bn[w]) lg += std::log(s[b]);
    t[w] = std::exp(-lg / static_cast<double>(bn[w].size()));
  }
  for (std::size_t b = 0; b < nb; ++b)
    for (std::size_t w : wn[b]) kast(b, w) *= s[b] * t[w];
  kinv_ = invert(kast, n);
  kast_ = std::move(kast);
}

cplx AztecKernel::operator()(std::size_t e, std::size_t f) const noexcept {
  const Edge& a = g_.edges()[e];
  return kast_(a.black, a.white) * kinv_(a.white, g_.edges()[f].black);
}

ComplexMatrix AztecKernel::dense() const {
  const std::size_t m = size();
  ComplexMatrix k(m, m);
  for (std::size_t e = 0; e < m; ++e)
    for (std::size_t f = 0; f < m; ++f) k(e, f) = (*this)(e, f);
  return k;
}

ComplexMatrix build_kernel(int n) { return AztecKernel(n).dense(); }

// ----------------------------------------------------------------- tilings

void validate_tiling(const AztecGraph& g, const Tiling& t) {
  const int n = g.order();
  if (t.dominoes.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1)) {
    fail(Errc::malformed_tiling, "expected " + std::to_string(n * (n + 1)) + " dominoes, got " +
                                     std::to_string(t.dominoes.size()));
  }
  std::vector<char> covered(g.cells().size(), 0);
  for (const Domino& d : t.dominoes) {
    const int x2 = d.orient == Orientation::horizontal ? d.x + 1 : d.x;
    const int y2 = d.orient == Orientation::horizontal ? d.y : d.y + 1;
    for (std::size_t c : {g.cell_index(d.x, d.y), g.cell_index(x2, y2)}) {
      if (c == AztecGraph::npos || covered[c]) fail(Errc::malformed_tiling, "dominoes overlap or leave the diamond");
      covered[c] = 1;
    }
  }
}

Tiling sample_tiling(const AztecKernel& k, Rng& rng) {
  const auto chosen = sample_nonherm_proj(k.dense(), rng);
  Tiling t;
  t.n = k.graph().order();
  for (std::size_t id : chosen) {
    const Edge& e = k.graph().edges()[id];
    t.dominoes.push_back({id, e.x, e.y, e.orient, e.label});
  }
  std::sort(t.dominoes.begin(), t.dominoes.end(), [](const Domino& a, const Domino& b) { return a.edge < b.edge; });
  validate_tiling(k.graph(), t);
  return t;
}

Tiling sample_tiling(int n, Rng& rng) { return sample_tiling(AztecKernel(n), rng); }

// ------------------------------------------------------------------- paths

int DrPath::x_end() const noexcept {
  if (segments.empty()) return x0;
  const Segment& s = segments.back();
  return s.x + (s.step == Step::flat ? 2 : 1);
}

double DrPath::y_end() const noexcept {
  if (segments.empty()) return y0;
  const Segment& s = segments.back();
  return s.y + (s.step == Step::rise ? 1.0 : s.step == Step::fall ? -1.0 : 0.0);
}

namespace {

// Candidate continuing a path from point (x, y), whose cell to the right
// is (x, y - 1/2).
struct Candidate {
  Step step;
  std::size_t edge;
};

std::vector<Candidate> candidates(const AztecGraph& g, int x, double y) {
  const int cy = static_cast<int>(std::lround(y - 0.5));
  std::vector<Candidate> out;
  if (std::size_t e = g.edge_at(x, cy, Orientation::vertical); e != AztecGraph::npos) out.push_back({Step::rise, e});
  if (std::size_t e = g.edge_at(x, cy - 1, Orientation::vertical); e != AztecGraph::npos) out.push_back({Step::fall, e});
  if (std::size_t e = g.edge_at(x, cy, Orientation::horizontal); e != AztecGraph::npos) out.push_back({Step::flat, e});
  return out;
}

void advance(int& x, double& y, Step s) {
  x += s == Step::flat ? 2 : 1;
  y += s == Step::rise ? 1.0 : s == Step::fall ? -1.0 : 0.0;
}

}  // namespace

std::vector<DrPath> extract_paths(const Tiling& t) {
  const AztecGraph g(t.n);
  validate_tiling(g, t);
  std::vector<char> present(g.edges().size(), 0), used(g.edges().size(), 0);
  for (const Domino& d : t.dominoes) present[d.edge] = 1;

  std::vector<DrPath> paths;
  for (int k = 0; k < t.n; ++k) {
    DrPath p{-t.n + k, -0.5 - k, {}};
    int x = p.x0;
    double y = p.y0;
    while (x < t.n - k) {
      bool moved = false;
      for (const Candidate& c : candidates(g, x, y)) {
        if (!present[c.edge]) continue;
        if (used[c.edge]) fail(Errc::malformed_tiling, "DR paths share a domino");
        used[c.edge] = 1;
        p.segments.push_back({c.step, x, y, c.edge});
        advance(x, y, c.step);
        moved = true;
        break;
      }
      if (!moved) fail(Errc::malformed_tiling, "DR path " + std::to_string(k) + " stops inside the diamond");
    }
    if (x != t.n - k || y != -0.5 - k) fail(Errc::malformed_tiling, "DR path " + std::to_string(k) + " misses its end");
    paths.push_back(std::move(p));
  }
  for (const Domino& d : t.dominoes) {
    if (d.label != Label::N && !used[d.edge]) fail(Errc::malformed_tiling, "domino off every DR path");
  }
  return paths;
}

DrPath sample_top_dr_path(const AztecKernel& k, Rng& rng) {
  const AztecGraph& g = k.graph();
  const int n = g.order();
  LazyDpp<cplx> dpp([&k](std::size_t i, std::size_t j) { return k(i, j); });
  DrPath p{-n, -0.5, {}};
  int x = p.x0;
  double y = p.y0;
  while (x < n) {
    const auto cands = candidates(g, x, y);
    bool moved = false;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      // The last remaining candidate is forced in whenever the others
      // were rejected; the observation still carries probability ~1.
      if (dpp.observe(cands[i].edge, rng) == Outcome::in) {
        p.segments.push_back({cands[i].step, x, y, cands[i].edge});
        advance(x, y, cands[i].step);
        moved = true;
        break;
      }
    }
    if (!moved) fail(Errc::dead_end, "no domino continues the top DR path at x = " + std::to_string(x));
  }
  return p;
}

DrPath sample_top_dr_path(int n, Rng& rng) { return sample_top_dr_path(AztecKernel(n), rng); }

// ------------------------------------------------------------------ output

std::string tiling_text(const Tiling& t) {
  std::string s = "aztec n=" + std::to_string(t.n) + "\n";
  for (const Domino& d : t.dominoes) {
    s += std::to_string(d.x) + ' ' + std::to_string(d.y) + ' ' + (d.orient == Orientation::horizontal ? 'h' : 'v') +
         ' ' + label_char(d.label) + '\n';
  }
  return s;
}

std::string tiling_json(const Tiling& t) {
  nlohmann::ordered_json j;
  j["n"] = t.n;
  j["dominoes"] = nlohmann::ordered_json::array();
  for (const Domino& d : t.dominoes) {
    j["dominoes"].push_back({{"x", d.x},
                             {"y", d.y},
                             {"orient", d.orient == Orientation::horizontal ? "h" : "v"},
                             {"label", std::string(1, label_char(d.label))}});
  }
  return j.dump(1) + "\n";
}

std::string path_json(const DrPath& p) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const Segment& s : p.segments) {
    j.push_back({{"step", step_name(s.step)}, {"x", s.x}, {"y", s.y}});
  }
  j.push_back({{"step", "end"}, {"x", p.x_end()}, {"y", p.y_end()}});
  return j.dump(1) + "\n";
}

}  // namespace rmtdpp
