#pragma once

#include <map>

#include "mtd/decompose.hpp"
#include "mtd/linalg.hpp"

namespace mtd {

struct geometry_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Wedge of two vectors of R^{d+1} in the signed-minor coordinatization:
// slot (i,j), 1 <= i < j <= d+1, lex order, value (-1)^{i+j+1} * det.
struct Extensor2 {
  int d = 0;
  VecQ coords;  // size C(d+1,2)
};

// A screw (w, pdot) packed as C(d,2) rotation coordinates followed by d
// translation coordinates.
struct Screw {
  int d = 0;
  VecQ coords;  // size C(d+1,2)
};

inline int screw_dim(int d) { return d * (d + 1) / 2; }

// signed-minor wedge of two equal-length vectors (length n -> C(n,2) slots)
VecQ wedge_pair(const VecQ& a, const VecQ& b);
Extensor2 wedge2(int d, const VecQ& a, const VecQ& b);

// The bilinear form under which a bar between two bodies constrains their
// screws. The coefficient table is solved once per dimension from the
// first-order length constraint and verified on fresh samples.
Rational pairing(const Screw& s, const Extensor2& x);
// coefficients of m(v) |-> pairing(m(v), b) as a row over screw coordinates
VecQ pairing_row(const Extensor2& b);
// the matrix P with pairing(s, x) = <x, P s>
const MatrixQ& pairing_table(int d);

// d = 2 projective helpers. Points are homogeneous triples; a point lies on
// a line iff the reversed-slot dot product vanishes.
Rational incidence(const VecQ& point_h, const Extensor2& line);
VecQ line_intersection(const Extensor2& a, const Extensor2& b);  // canonical
Screw dangling_screw(const VecQ& point_h);  // pairs with every line through the point as 0
bool lines_in_general_position(const std::vector<Extensor2>& lines);

// ---------------------------------------------------------------------------

enum class FrameworkKind {
  body_bar_bar,
  body_bar_pin,
  bar_joint_bar,
  bar_joint_pin,
  bar_joint_slider,
};

struct FrameworkModel {
  FrameworkKind kind = FrameworkKind::body_bar_bar;
  int d = 2;
  GraphWithRoots graph;
  std::map<int, Extensor2> boundary_bars;  // root elem -> b°
  std::map<int, VecQ> pins;                // root elem -> point of Q^d
  std::map<int, VecQ> sliders;             // root elem -> direction ratio (2)
  std::vector<int> pinned;                 // vertex ids (bar_joint_pin)
  std::map<int, VecQ> placements;          // vertex -> homogeneous triple
  std::map<int, Extensor2> bars;           // edge id -> realized bar

  int D() const { return screw_dim(d); }
};

struct RankCertificate {
  long long rows = 0, cols = 0, rank = 0, kernel_dim = 0;
  std::vector<VecQ> kernel_basis;
};

// Screw-space constraint matrix: D columns per vertex, one row per bar and
// per boundary bar. Requires fm.bars for every edge.
MatrixQ rigidity_matrix(const FrameworkModel& fm);
RankCertificate certify_rank(const MatrixQ& m);

// Classical 2d matrices (columns are joint velocities).
MatrixQ pinned_rigidity_matrix(const FrameworkModel& fm);  // columns for V \ X
MatrixQ slider_rigidity_matrix(const FrameworkModel& fm);

// body-bar with bar-boundary
ConditionReport check_body_bar_bar(const FrameworkModel& fm, int jobs = 1);
FrameworkModel realize_body_bar(const FrameworkModel& fm, int jobs = 1);

// pinned body-bar
FrameworkModel reduce_pins_to_bars(const FrameworkModel& fm);
ConditionReport check_body_bar_pin(const FrameworkModel& fm, int jobs = 1);
FrameworkModel realize_body_bar_pin(const FrameworkModel& fm, int jobs = 1);
// direct partition-formula verdict by enumeration (small |V| only)
std::optional<std::vector<std::vector<int>>> body_bar_pin_violating_partition(
    const FrameworkModel& fm);

// bar-joint with bar-boundary (d = 2)
ConditionReport check_bar_joint_bar(const FrameworkModel& fm, int jobs = 1);
FrameworkModel realize_bar_joint_bar(const FrameworkModel& fm, int jobs = 1);

// pinned bar-joint (combinatorial; the colored-matroid reduction)
ConditionReport check_pinned_bar_joint(const GraphWithRoots& g, const std::vector<int>& pinned,
                                       int jobs = 1);

// bar-joint with sliders
ConditionReport check_bar_slider(const FrameworkModel& fm, int jobs = 1);
FrameworkModel slider_to_pinned(const FrameworkModel& fm);

}  // namespace mtd
