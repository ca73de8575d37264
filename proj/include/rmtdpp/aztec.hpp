#pragma once

// Domino tilings of the Aztec diamond as a projection DPP on domino
// positions. The marginal kernel comes from the inverse Kasteleyn matrix
// and is complex and non-Hermitian.

#include <cstddef>
#include <string>
#include <vector>

#include "rmtdpp/matrix.hpp"
#include "rmtdpp/rng.hpp"

namespace rmtdpp {

enum class Orientation { horizontal, vertical };
enum class Label { N, S, E, W };

char label_char(Label l) noexcept;

// Unit cell [x, x+1] x [y, y+1]; parity (x + y + n) mod 2.
struct Cell {
  int x, y;
  int parity;
};

// A domino position: the first cell is the left one (horizontal) or the
// lower one (vertical). Black cells have odd parity.
struct Edge {
  std::size_t id;
  int x, y;
  Orientation orient;
  Label label;
  std::size_t black, white;  // indices into the colour classes
};

// Cells with centres |cx| + |cy| <= n.
class AztecGraph {
 public:
  explicit AztecGraph(int n);

  int order() const noexcept { return n_; }
  const std::vector<Cell>& cells() const noexcept { return cells_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t black_count() const noexcept { return black_.size(); }
  std::size_t white_count() const noexcept { return white_.size(); }

  bool contains(int x, int y) const noexcept;
  // Index into cells(), or npos.
  std::size_t cell_index(int x, int y) const noexcept;
  // Edge id of the domino with first cell (x, y), or npos.
  std::size_t edge_at(int x, int y, Orientation o) const noexcept;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  int n_;
  std::vector<Cell> cells_;
  std::vector<std::size_t> black_, white_;  // cell indices
  std::vector<Edge> edges_;
  std::vector<std::size_t> grid_;           // (x, y) -> cell index
  std::vector<std::size_t> hedge_, vedge_;  // (x, y) -> edge id
  std::size_t slot(int x, int y) const noexcept;
};

// Kasteleyn matrix (black x white; 1 on horizontal, i on vertical edges),
// its inverse, and on-demand entries of the edge kernel
// K(e, f) = Kast(b_e, w_e) Kast^{-1}(w_e, b_f), up to a diagonal similarity
// that keeps entries O(1).
class AztecKernel {
 public:
  explicit AztecKernel(int n);

  const AztecGraph& graph() const noexcept { return g_; }
  std::size_t size() const noexcept { return g_.edges().size(); }
  cplx operator()(std::size_t e, std::size_t f) const noexcept;
  ComplexMatrix dense() const;

 private:
  AztecGraph g_;
  ComplexMatrix kast_;  // black x white, gauge-rescaled
  ComplexMatrix kinv_;  // its inverse, white x black
};

// Dense edge kernel. Throws SingularKasteleyn (should not happen).
ComplexMatrix build_kernel(int n);

struct Domino {
  std::size_t edge;
  int x, y;
  Orientation orient;
  Label label;
};

struct Tiling {
  int n = 0;
  std::vector<Domino> dominoes;  // ascending edge id
};

// Full tiling from the non-Hermitian projection sampler. Throws
// MalformedTiling if the sample does not partition the diamond.
Tiling sample_tiling(const AztecKernel& k, Rng& rng);
Tiling sample_tiling(int n, Rng& rng);

// Throws MalformedTiling unless the dominoes tile the diamond exactly.
void validate_tiling(const AztecGraph& g, const Tiling& t);

enum class Step { rise, fall, flat };

struct Segment {
  Step step;
  int x;     // start point
  double y;
  std::size_t edge;
};

// Lattice path through W (rise), E (fall) and S (flat) dominoes. Path k
// runs from (-n+k, -1/2-k) to (n-k, -1/2-k); path 0 is the top one.
struct DrPath {
  int x0;
  double y0;
  std::vector<Segment> segments;
  int x_end() const noexcept;
  double y_end() const noexcept;
};

// The n DR paths, top first. Throws MalformedTiling when a path hits a
// cell that no W, E or S domino continues, or when W/E/S dominoes are left
// over.
std::vector<DrPath> extract_paths(const Tiling& t);

// Samples only the top DR path: at each point the candidate dominoes W, E,
// S extending it are observed in that order, conditioning on all earlier
// observations. Cost O(n^3) beyond the kernel setup. Throws DeadEnd if no
// candidate is present.
DrPath sample_top_dr_path(const AztecKernel& k, Rng& rng);
DrPath sample_top_dr_path(int n, Rng& rng);

std::string tiling_text(const Tiling& t);
std::string tiling_json(const Tiling& t);
std::string path_json(const DrPath& p);

}  // namespace rmtdpp
