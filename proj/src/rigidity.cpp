#include "mtd/rigidity.hpp"

#include <algorithm>
#include <set>

#include "mtd/oracles.hpp"
#include <mutex>
#include <unordered_map>
#include <unordered_set>

namespace mtd {

// ---------------------------------------------------------------------------
// exterior algebra

VecQ wedge_pair(const VecQ& a, const VecQ& b) {
  if (a.size() != b.size()) throw input_error("wedge of vectors with different lengths");
  const int n = (int)a.size();
  VecQ out;
  out.reserve(n * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Rational minor = a[i] * b[j] - a[j] * b[i];
      // 1-based slot (i+1, j+1): sign (-1)^{i+j+3} = (-1)^{i+j+1}
      if ((i + j) % 2 == 0) minor = -minor;
      out.push_back(minor);
    }
  return out;
}

Extensor2 wedge2(int d, const VecQ& a, const VecQ& b) {
  if ((int)a.size() != d + 1 || (int)b.size() != d + 1)
    throw input_error("wedge2 expects vectors of length d+1");
  return Extensor2{d, wedge_pair(a, b)};
}

namespace {

// deterministic small rationals for table construction and self-checks
struct Lcg {
  unsigned long long s = 0x243f6a8885a308d3ull;
  long next() {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return (long)((s >> 33) % 19) - 9;
  }
  VecQ vec(int n) {
    VecQ v(n);
    for (auto& q : v) q = Rational(next());
    return v;
  }
};

// value of the differentiated length constraint for a bar from q1 to q2
Rational constraint_value(int d, const VecQ& q1, const VecQ& q2, const VecQ& screw) {
  const int wn = d * (d - 1) / 2;
  VecQ w(screw.begin(), screw.begin() + wn);
  VecQ pdot(screw.begin() + wn, screw.end());
  Rational val = 0;
  for (int i = 0; i < d; ++i) val += (q2[i] - q1[i]) * pdot[i];
  if (wn > 0) {
    VecQ qq = wedge_pair(q2, q1);
    for (int i = 0; i < wn; ++i) val += qq[i] * w[i];
  }
  return val;
}

MatrixQ build_pairing_table(int d) {
  const int D = screw_dim(d);
  Lcg rng;
  // collect D wedge samples spanning the extensor space
  std::vector<VecQ> xs;
  std::vector<std::pair<VecQ, VecQ>> qs;
  int guard = 0;
  while ((int)xs.size() < D) {
    if (++guard > 200) throw internal_error("pairing table: samples failed to span");
    VecQ q1 = rng.vec(d), q2 = rng.vec(d);
    VecQ h1 = q1, h2 = q2;
    h1.push_back(1);
    h2.push_back(1);
    VecQ x = wedge_pair(h2, h1);
    xs.push_back(x);
    qs.emplace_back(q1, q2);
    if (row_space_rank(xs) != xs.size()) {
      xs.pop_back();
      qs.pop_back();
    }
  }
  MatrixQ xmat(D, D);
  for (int i = 0; i < D; ++i) xmat[i] = xs[i];

  MatrixQ table(D, D);  // table[slot][screw coord]
  for (int t = 0; t < D; ++t) {
    VecQ unit(D, Rational(0));
    unit[t] = 1;
    VecQ rhs(D);
    for (int i = 0; i < D; ++i) rhs[i] = constraint_value(d, qs[i].first, qs[i].second, unit);
    VecQ col = solve_square(xmat, rhs);
    for (int s = 0; s < D; ++s) table[s][t] = col[s];
  }

  // verify on fresh samples
  for (int trial = 0; trial < 24; ++trial) {
    VecQ q1 = rng.vec(d), q2 = rng.vec(d), screw = rng.vec(D);
    VecQ h1 = q1, h2 = q2;
    h1.push_back(1);
    h2.push_back(1);
    VecQ x = wedge_pair(h2, h1);
    Rational via_table = 0;
    for (int s = 0; s < D; ++s)
      for (int t = 0; t < D; ++t) via_table += x[s] * table[s][t] * screw[t];
    if (via_table != constraint_value(d, q1, q2, screw))
      throw internal_error("pairing table failed verification");
  }
  return table;
}

}  // namespace

const MatrixQ& pairing_table(int d) {
  static std::mutex mu;
  static std::unordered_map<int, MatrixQ> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, build_pairing_table(d)).first;
  return it->second;
}

Rational pairing(const Screw& s, const Extensor2& x) {
  if (s.d != x.d) throw input_error("pairing: dimension mismatch");
  const MatrixQ& p = pairing_table(x.d);
  const int D = screw_dim(x.d);
  if ((int)s.coords.size() != D || (int)x.coords.size() != D)
    throw input_error("pairing: coordinate length mismatch");
  Rational val = 0;
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b) val += x.coords[a] * p[a][b] * s.coords[b];
  return val;
}

VecQ pairing_row(const Extensor2& b) {
  const MatrixQ& p = pairing_table(b.d);
  const int D = screw_dim(b.d);
  VecQ row(D, Rational(0));
  for (int t = 0; t < D; ++t)
    for (int s = 0; s < D; ++s) row[t] += p[s][t] * b.coords[s];
  return row;
}

Rational incidence(const VecQ& point_h, const Extensor2& line) {
  if (line.d != 2 || point_h.size() != 3) throw input_error("incidence is a d=2 operation");
  return point_h[0] * line.coords[2] + point_h[1] * line.coords[1] + point_h[2] * line.coords[0];
}

VecQ line_intersection(const Extensor2& a, const Extensor2& b) {
  if (a.d != 2 || b.d != 2) throw input_error("line_intersection is a d=2 operation");
  VecQ n1 = {a.coords[2], a.coords[1], a.coords[0]};
  VecQ n2 = {b.coords[2], b.coords[1], b.coords[0]};
  VecQ x = {n1[1] * n2[2] - n1[2] * n2[1], n1[2] * n2[0] - n1[0] * n2[2],
            n1[0] * n2[1] - n1[1] * n2[0]};
  if (x[0] == 0 && x[1] == 0 && x[2] == 0) throw input_error("lines coincide; no unique intersection");
  return canonical_homogeneous(x);
}

Screw dangling_screw(const VecQ& point_h) {
  if (point_h.size() != 3) throw input_error("dangling_screw is a d=2 operation");
  // solve P s = rev(p), so that pairing(s, b) = incidence(p, b) for every b
  MatrixQ p = pairing_table(2);
  VecQ rev = {point_h[2], point_h[1], point_h[0]};
  return Screw{2, solve_square(p, rev)};
}

bool lines_in_general_position(const std::vector<Extensor2>& lines) {
  std::vector<VecQ> distinct;
  for (const auto& l : lines) {
    VecQ c = canonical_homogeneous(l.coords);
    bool seen = false;
    for (const auto& d : distinct) seen = seen || d == c;
    if (!seen) distinct.push_back(c);
  }
  const size_t n = distinct.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = j + 1; k < n; ++k) {
        if (row_space_rank({distinct[i], distinct[j], distinct[k]}) < 3) return false;
      }
  return true;
}

// ---------------------------------------------------------------------------
// constraint matrices

MatrixQ rigidity_matrix(const FrameworkModel& fm) {
  const int D = fm.D();
  const int n = fm.graph.n;
  MatrixQ m(fm.graph.edges.size() + fm.graph.roots.size(), (size_t)D * n);
  size_t row = 0;
  for (size_t e = 0; e < fm.graph.edges.size(); ++e, ++row) {
    auto it = fm.bars.find((int)e);
    if (it == fm.bars.end()) throw input_error("rigidity_matrix: missing bar for an edge");
    VecQ c = pairing_row(it->second);
    auto [u, v] = fm.graph.edges[e];
    for (int t = 0; t < D; ++t) {
      m[row][(size_t)u * D + t] += c[t];
      m[row][(size_t)v * D + t] -= c[t];
    }
  }
  for (const Root& r : fm.graph.roots) {
    auto it = fm.boundary_bars.find(r.elem);
    if (it == fm.boundary_bars.end()) throw input_error("rigidity_matrix: missing boundary bar");
    VecQ c = pairing_row(it->second);
    for (int t = 0; t < D; ++t) m[row][(size_t)r.vertex * D + t] += c[t];
    ++row;
  }
  return m;
}

RankCertificate certify_rank(const MatrixQ& m) {
  RankCertificate cert;
  cert.rows = (long long)m.rows;
  cert.cols = (long long)m.cols;
  cert.kernel_basis = kernel_basis(m);
  cert.kernel_dim = (long long)cert.kernel_basis.size();
  cert.rank = cert.cols - cert.kernel_dim;
  return cert;
}

namespace {

VecQ affine_point(const VecQ& hom) {
  if (hom.size() != 3 || hom[2] == 0) throw input_error("placement is not a finite point");
  return {hom[0] / hom[2], hom[1] / hom[2]};
}

const VecQ& placement_of(const FrameworkModel& fm, int v) {
  auto it = fm.placements.find(v);
  if (it == fm.placements.end()) throw input_error("missing placement for vertex");
  return it->second;
}

}  // namespace

MatrixQ pinned_rigidity_matrix(const FrameworkModel& fm) {
  std::unordered_set<int> pinned(fm.pinned.begin(), fm.pinned.end());
  std::unordered_map<int, int> col_of;
  for (int v = 0; v < fm.graph.n; ++v)
    if (!pinned.count(v)) col_of[v] = (int)col_of.size();
  MatrixQ m(fm.graph.edges.size(), 2 * col_of.size());
  for (size_t e = 0; e < fm.graph.edges.size(); ++e) {
    auto [u, v] = fm.graph.edges[e];
    VecQ pu = affine_point(placement_of(fm, u));
    VecQ pv = affine_point(placement_of(fm, v));
    VecQ diff = {pu[0] - pv[0], pu[1] - pv[1]};
    if (!pinned.count(u)) {
      m[e][2 * col_of[u]] += diff[0];
      m[e][2 * col_of[u] + 1] += diff[1];
    }
    if (!pinned.count(v)) {
      m[e][2 * col_of[v]] -= diff[0];
      m[e][2 * col_of[v] + 1] -= diff[1];
    }
  }
  return m;
}

MatrixQ slider_rigidity_matrix(const FrameworkModel& fm) {
  MatrixQ m(fm.graph.edges.size() + fm.graph.roots.size(), 2 * (size_t)fm.graph.n);
  size_t row = 0;
  for (size_t e = 0; e < fm.graph.edges.size(); ++e, ++row) {
    auto [u, v] = fm.graph.edges[e];
    VecQ pu = affine_point(placement_of(fm, u));
    VecQ pv = affine_point(placement_of(fm, v));
    VecQ diff = {pu[0] - pv[0], pu[1] - pv[1]};
    m[row][2 * u] += diff[0];
    m[row][2 * u + 1] += diff[1];
    m[row][2 * v] -= diff[0];
    m[row][2 * v + 1] -= diff[1];
  }
  for (const Root& r : fm.graph.roots) {
    auto it = fm.sliders.find(r.elem);
    if (it == fm.sliders.end()) throw input_error("missing slider direction");
    // constraint <m(v), d_perp> = 0
    m[row][2 * r.vertex] += -it->second[1];
    m[row][2 * r.vertex + 1] += it->second[0];
    ++row;
  }
  return m;
}

// ---------------------------------------------------------------------------
// body-bar with bar-boundary

namespace {

MatroidHandle boundary_linear_matroid(const FrameworkModel& fm) {
  std::vector<int> ground;
  std::unordered_map<int, VecQ> vectors;
  for (const Root& r : fm.graph.roots) {
    auto it = fm.boundary_bars.find(r.elem);
    if (it == fm.boundary_bars.end()) throw input_error("root without boundary bar");
    if ((int)it->second.coords.size() != fm.D())
      throw input_error("boundary bar has wrong coordinate length");
    ground.push_back(r.elem);
    vectors[r.elem] = it->second.coords;
  }
  return MatroidHandle::linear(std::move(ground), std::move(vectors));
}

// report for the explicit-k count conditions shared by the framework models
ConditionReport framework_count_report(const Instance& inst, int k, int ell, int jobs) {
  ConditionReport rep;
  rep.rank_k = k;
  bool oversized = false;
  for (int v : inst.verts) {
    std::vector<int> rv;
    for (const Root& r : inst.roots)
      if (r.vertex == v) rv.push_back(r.elem);
    if ((int)rv.size() > k) oversized = true;
    if (!inst.m.is_independent(rv) && rep.c1_ok) {
      rep.c1_ok = false;
      rep.offending_vertex = v;
    }
  }
  rep.edge_count = (long long)inst.edge_ids.size();
  rep.root_count = (long long)inst.roots.size();
  rep.k_times_v = (long long)k * (long long)inst.verts.size();
  rep.c3_ok = rep.edge_count + rep.root_count == rep.k_times_v;
  if (oversized) {
    rep.note = "count condition not evaluated: a vertex carries more than k boundary elements";
    return rep;
  }
  std::vector<int> witness;
  rep.c2_ok = count_condition_holds(inst, k, ell, jobs, &witness);
  if (!rep.c2_ok) rep.violating_edges = std::move(witness);
  return rep;
}

}  // namespace

ConditionReport check_body_bar_bar(const FrameworkModel& fm, int jobs) {
  if (fm.kind != FrameworkKind::body_bar_bar) throw input_error("model is not body_bar_bar");
  Instance inst = Instance::from_graph(fm.graph, boundary_linear_matroid(fm));
  return framework_count_report(inst, fm.D(), fm.D(), jobs);
}

FrameworkModel realize_body_bar(const FrameworkModel& fm, int jobs) {
  ConditionReport rep = check_body_bar_bar(fm, jobs);
  if (!rep.ok()) throw infeasible_error("body-bar instance fails the counting conditions", rep);
  Instance inst = Instance::from_graph(fm.graph, boundary_linear_matroid(fm));
  if (inst.m.rank() != fm.D()) throw internal_error("counts hold but boundary rank is below D");

  Decomposition dec = basic_decomposition(inst, jobs);
  FrameworkModel out = fm;
  for (const auto& part : dec.parts) {
    const Extensor2& b = fm.boundary_bars.at(part.root_elem);
    for (int e : part.edges) out.bars[e] = b;
  }
  RankCertificate cert = certify_rank(rigidity_matrix(out));
  if (cert.rank != (long long)fm.D() * fm.graph.n)
    throw internal_error("realized body-bar framework is not rigid");
  return out;
}

// ---------------------------------------------------------------------------
// pinned body-bar

FrameworkModel reduce_pins_to_bars(const FrameworkModel& fm) {
  if (fm.kind != FrameworkKind::body_bar_pin) throw input_error("model is not body_bar_pin");
  FrameworkModel out;
  out.kind = FrameworkKind::body_bar_bar;
  out.d = fm.d;
  out.graph.n = fm.graph.n;
  out.graph.edges = fm.graph.edges;
  out.graph.vertex_names = fm.graph.vertex_names;
  int fresh = 0;
  for (const Root& r : fm.graph.roots) fresh = std::max(fresh, r.elem + 1);
  for (const Root& r : fm.graph.roots) {
    auto it = fm.pins.find(r.elem);
    if (it == fm.pins.end()) throw input_error("pin root without coordinates");
    const VecQ& p = it->second;
    if ((int)p.size() != fm.d) throw input_error("pin point has wrong dimension");
    VecQ ph = p;
    ph.push_back(1);
    // a pin is d bars through the pin point along the coordinate directions
    for (int i = 0; i < fm.d; ++i) {
      VecQ q = p;
      q[i] += 1;
      q.push_back(1);
      Root nr;
      nr.elem = fresh++;
      nr.vertex = r.vertex;
      nr.name = r.name + "." + std::to_string(i + 1);
      out.graph.roots.push_back(nr);
      out.boundary_bars[nr.elem] = wedge2(fm.d, ph, q);
    }
  }
  return out;
}

ConditionReport check_body_bar_pin(const FrameworkModel& fm, int jobs) {
  FrameworkModel bars = reduce_pins_to_bars(fm);
  Instance inst = Instance::from_graph(bars.graph, boundary_linear_matroid(bars));
  const int D = fm.D();
  ConditionReport rep;
  rep.rank_k = D;
  rep.edge_count = (long long)inst.edge_ids.size();
  rep.root_count = (long long)fm.graph.roots.size();
  rep.k_times_v = (long long)D * fm.graph.n;
  // spanning (dual) form: rigid iff E spans the induced count matroid over
  // the per-vertex-reduced boundary
  std::unordered_map<int, std::vector<int>> at;
  for (const Root& r : inst.roots) at[r.vertex].push_back(r.elem);
  std::unordered_set<int> keep;
  for (auto& [v, elems] : at)
    for (int e : inst.m.max_independent_subset(elems)) keep.insert(e);
  Instance reduced = inst;
  reduced.roots.clear();
  std::vector<int> keep_elems;
  for (const Root& r : inst.roots)
    if (keep.count(r.elem)) {
      reduced.roots.push_back(r);
      keep_elems.push_back(r.elem);
    }
  reduced.m = inst.m.restrict_to(keep_elems);
  long long target = (long long)D * fm.graph.n - (long long)keep_elems.size();
  long long rank = (long long)count_basis(reduced, reduced.edge_ids).size();
  rep.c2_ok = rank == target;
  if (!rep.c2_ok)
    rep.note = "edge set spans only rank " + std::to_string(rank) + " of " + std::to_string(target);
  return rep;
}

FrameworkModel realize_body_bar_pin(const FrameworkModel& fm, int jobs) {
  ConditionReport rep = check_body_bar_pin(fm, jobs);
  if (!rep.ok()) throw infeasible_error("pinned body-bar instance is not rigid", rep);
  FrameworkModel bars = reduce_pins_to_bars(fm);
  Instance inst = Instance::from_graph(bars.graph, boundary_linear_matroid(bars));
  Decomposition dec = rooted_component_packing(inst, jobs);
  FrameworkModel out = bars;
  for (const auto& part : dec.parts) {
    const Extensor2& b = bars.boundary_bars.at(part.root_elem);
    for (int e : part.edges) out.bars[e] = b;
  }
  RankCertificate cert = certify_rank(rigidity_matrix(out));
  if (cert.rank != (long long)fm.D() * fm.graph.n)
    throw internal_error("realized pinned body-bar framework is not rigid");
  return out;
}

std::optional<std::vector<std::vector<int>>> body_bar_pin_violating_partition(
    const FrameworkModel& fm) {
  if (fm.graph.n > 9) throw input_error("partition enumeration limited to 9 bodies");
  const int D = fm.D();
  std::unordered_map<int, std::vector<VecQ>> pins_at;
  for (const Root& r : fm.graph.roots) pins_at[r.vertex].push_back(fm.pins.at(r.elem));

  std::optional<std::vector<std::vector<int>>> found;
  std::function<void(const std::vector<int>&)> eval = [&](const std::vector<int>& assign) {
    if (found) return;
    int classes = *std::max_element(assign.begin(), assign.end()) + 1;
    std::vector<std::vector<int>> parts(classes);
    for (int v = 0; v < fm.graph.n; ++v) parts[assign[v]].push_back(v);
    long long crossing = 0;
    for (auto [u, v] : fm.graph.edges)
      if (assign[u] != assign[v]) ++crossing;
    long long allowance = 0;
    for (const auto& cls : parts) {
      std::vector<VecQ> pts;
      for (int v : cls) {
        auto it = pins_at.find(v);
        if (it != pins_at.end()) pts.insert(pts.end(), it->second.begin(), it->second.end());
      }
      if (pts.empty()) continue;
      // affine dimension of the pin points
      std::vector<VecQ> diffs;
      for (size_t i = 1; i < pts.size(); ++i) {
        VecQ d(pts[i].size());
        for (size_t j = 0; j < d.size(); ++j) d[j] = pts[i][j] - pts[0][j];
        diffs.push_back(std::move(d));
      }
      long long dx = diffs.empty() ? 0 : (long long)row_space_rank(diffs);
      for (long long i = 1; i <= dx + 1; ++i) allowance += fm.d - i + 1;
    }
    if (crossing < (long long)D * classes - allowance) found = parts;
  };
  oracles::for_each_partition(fm.graph.n, eval);
  return found;
}

// ---------------------------------------------------------------------------
// bar-joint with bar-boundary (d = 2)

namespace {

void require_bar_joint_geometry(const FrameworkModel& fm) {
  if (fm.d != 2) throw input_error("bar-joint models require d = 2");
  std::vector<Extensor2> lines;
  for (const Root& r : fm.graph.roots) {
    auto it = fm.boundary_bars.find(r.elem);
    if (it == fm.boundary_bars.end()) throw input_error("root without boundary bar");
    lines.push_back(it->second);
  }
  if (!lines_in_general_position(lines))
    throw geometry_error("boundary lines are not in general position (three share a point)");
}

}  // namespace

ConditionReport check_bar_joint_bar(const FrameworkModel& fm, int jobs) {
  if (fm.kind != FrameworkKind::bar_joint_bar) throw input_error("model is not bar_joint_bar");
  require_bar_joint_geometry(fm);
  Instance inst = Instance::from_graph(fm.graph, boundary_linear_matroid(fm));
  ConditionReport rep;
  rep.rank_k = 2;
  for (int v : inst.verts) {
    std::vector<int> rv;
    for (const Root& r : inst.roots)
      if (r.vertex == v) rv.push_back(r.elem);
    if (((int)rv.size() > 2 || !inst.m.is_independent(rv)) && rep.c1_ok) {
      rep.c1_ok = false;
      rep.offending_vertex = v;
    }
  }
  rep.edge_count = (long long)inst.edge_ids.size();
  rep.root_count = (long long)inst.roots.size();
  rep.k_times_v = 2ll * fm.graph.n;
  rep.c3_ok = rep.edge_count + rep.root_count == rep.k_times_v;
  if (!rep.c1_ok) {
    rep.note = "count condition not evaluated: per-vertex boundary condition fails";
    return rep;
  }
  std::vector<int> witness;
  rep.c2_ok = count_condition_holds(inst, 2, 3, jobs, &witness);
  if (!rep.c2_ok) rep.violating_edges = std::move(witness);
  return rep;
}

namespace {

// one coincidence-resolution move of the perturbation loop
struct CoincidenceClass {
  VecQ point;
  std::vector<int> verts;
};

std::vector<CoincidenceClass> coincidence_classes(const FrameworkModel& fm) {
  std::map<VecQ, std::vector<int>> by_point;
  for (const auto& [v, p] : fm.placements) by_point[p].push_back(v);
  std::vector<CoincidenceClass> out;
  for (auto& [p, vs] : by_point)
    if (vs.size() > 1) out.push_back({p, vs});
  return out;
}

// second canonical point on a line (independent of the given one)
VecQ other_point_on_line(const Extensor2& line, const VecQ& avoid) {
  VecQ n = {line.coords[2], line.coords[1], line.coords[0]};
  std::vector<VecQ> candidates = {
      {n[1], -n[0], Rational(0)}, {n[2], Rational(0), -n[0]}, {Rational(0), n[2], -n[1]}};
  for (const VecQ& c : candidates) {
    if (c[0] == 0 && c[1] == 0 && c[2] == 0) continue;
    VecQ canon = canonical_homogeneous(c);
    if (canon != avoid) return canon;
  }
  throw internal_error("line has no second canonical point");
}

void refresh_bars_from_placements(FrameworkModel& fm, const std::map<int, int>& tree_of_edge,
                                  const std::map<int, Extensor2>& tree_line) {
  for (size_t e = 0; e < fm.graph.edges.size(); ++e) {
    auto [u, v] = fm.graph.edges[e];
    const VecQ& pu = fm.placements.at(u);
    const VecQ& pv = fm.placements.at(v);
    if (pu != pv)
      fm.bars[(int)e] = wedge2(2, pu, pv);
    else
      fm.bars[(int)e] = tree_line.at(tree_of_edge.at((int)e));
  }
}

}  // namespace

FrameworkModel realize_bar_joint_bar(const FrameworkModel& fm, int jobs) {
  ConditionReport rep = check_bar_joint_bar(fm, jobs);
  if (!rep.ok()) throw infeasible_error("bar-joint instance fails the counting conditions", rep);

  Instance inst = Instance::from_graph(fm.graph, boundary_linear_matroid(fm).truncate());
  ConditionReport low = check_conditions(inst, jobs);
  if (!low.ok()) {
    // Degenerate corner: rank below 3 (possible only without edges). Place
    // each joint at its own forced intersection.
    if (!fm.graph.edges.empty())
      throw internal_error("truncated conditions fail on an instance with edges");
    FrameworkModel out = fm;
    std::unordered_map<int, std::vector<int>> at;
    for (const Root& r : fm.graph.roots) at[r.vertex].push_back(r.elem);
    for (int v = 0; v < fm.graph.n; ++v) {
      auto it = at.find(v);
      if (it == at.end() || it->second.size() != 2)
        throw internal_error("edgeless instance without two boundary bars per joint");
      out.placements[v] =
          line_intersection(fm.boundary_bars.at(it->second[0]), fm.boundary_bars.at(it->second[1]));
    }
    std::set<VecQ> distinct;
    for (auto& [v, p] : out.placements)
      if (!distinct.insert(p).second)
        throw geometry_error("forced joint placements coincide; no injective realization");
    RankCertificate cert = certify_rank(rigidity_matrix(out));
    if (cert.rank != 2ll * fm.graph.n) throw internal_error("edgeless realization is not rigid");
    return out;
  }

  Decomposition dec = basic_decomposition(inst, jobs);

  // each vertex is spanned by exactly two parts with distinct boundary lines
  FrameworkModel out = fm;
  std::map<int, int> tree_of_edge;
  std::map<int, Extensor2> tree_line;
  std::unordered_map<int, std::vector<int>> spanned_by;  // vertex -> part indices
  std::unordered_map<int, int> root_vertex;
  for (const Root& r : fm.graph.roots) root_vertex[r.elem] = r.vertex;
  for (size_t i = 0; i < dec.parts.size(); ++i) {
    const auto& part = dec.parts[i];
    tree_line.emplace(part.root_elem, fm.boundary_bars.at(part.root_elem));
    for (int e : part.edges) tree_of_edge[e] = part.root_elem;
    std::vector<int> sp;
    if (part.edges.empty()) {
      sp = {root_vertex.at(part.root_elem)};
    } else {
      std::unordered_set<int> vs;
      for (int e : part.edges) {
        vs.insert(fm.graph.edges[e].first);
        vs.insert(fm.graph.edges[e].second);
      }
      sp.assign(vs.begin(), vs.end());
    }
    for (int v : sp) spanned_by[v].push_back((int)i);
  }
  for (int v = 0; v < fm.graph.n; ++v) {
    auto it = spanned_by.find(v);
    if (it == spanned_by.end() || it->second.size() != 2)
      throw internal_error("vertex is not spanned by exactly two rooted trees");
    const Extensor2& l1 = fm.boundary_bars.at(dec.parts[it->second[0]].root_elem);
    const Extensor2& l2 = fm.boundary_bars.at(dec.parts[it->second[1]].root_elem);
    out.placements[v] = line_intersection(l1, l2);
  }
  refresh_bars_from_placements(out, tree_of_edge, tree_line);
  {
    RankCertificate cert = certify_rank(rigidity_matrix(out));
    if (cert.rank != 2ll * fm.graph.n)
      throw internal_error("initial bar-joint realization is not rigid");
  }

  // resolve coincident placements by sliding along one of the two shared
  // lines, certifying the exact rank after every move
  for (int guard = 0; guard < 4 * fm.graph.n + 8; ++guard) {
    auto classes = coincidence_classes(out);
    if (classes.empty()) break;
    const auto& cls = classes.front();
    const std::vector<int>& X = cls.verts;
    int p1 = spanned_by.at(X[0])[0], p2 = spanned_by.at(X[0])[1];

    // edges inside the class belong to the two trees; the non-spanning one
    // yields a proper chunk to move
    auto intra_forest = [&](int part_idx) {
      std::vector<std::pair<int, int>> es;
      for (int e : dec.parts[part_idx].edges) {
        auto [u, v] = fm.graph.edges[e];
        if (std::find(X.begin(), X.end(), u) != X.end() &&
            std::find(X.begin(), X.end(), v) != X.end())
          es.push_back({u, v});
      }
      return es;
    };
    auto spanning_on_x = [&](int part_idx) {
      auto es = intra_forest(part_idx);
      if (es.size() + 1 != X.size()) return false;
      std::unordered_map<int, int> uf;
      std::function<int(int)> find = [&](int a) {
        while (uf.count(a) && uf[a] != a) a = uf[a] = uf[uf[a]];
        if (!uf.count(a)) uf[a] = a;
        return a;
      };
      for (auto [u, v] : es) {
        int a = find(u), b = find(v);
        if (a == b) return false;
        uf[a] = b;
      }
      return true;
    };
    if (spanning_on_x(p2)) std::swap(p1, p2);
    if (spanning_on_x(p2)) throw internal_error("both trees span a coincidence class");

    // X' = a component of tree p2 inside X avoiding the root of p2
    int r2_vertex = root_vertex.at(dec.parts[p2].root_elem);
    std::unordered_map<int, int> uf;
    std::function<int(int)> find = [&](int a) {
      while (uf.count(a) && uf[a] != a) a = uf[a] = uf[uf[a]];
      if (!uf.count(a)) uf[a] = a;
      return a;
    };
    for (auto [u, v] : intra_forest(p2)) uf[find(u)] = find(v);
    std::map<int, std::vector<int>> comps;
    for (int v : X) comps[find(v)].push_back(v);
    std::vector<int> xprime;
    for (auto& [key, comp] : comps) {
      bool has_r2 = std::find(comp.begin(), comp.end(), r2_vertex) != comp.end();
      if (!has_r2) {
        xprime = comp;
        break;
      }
    }
    if (xprime.empty() || xprime.size() >= X.size())
      throw internal_error("no movable chunk in coincidence class");

    const Extensor2& slide_line = fm.boundary_bars.at(dec.parts[p1].root_elem);
    VecQ base = cls.point;
    VecQ dir = other_point_on_line(slide_line, base);
    bool moved = false;
    Rational step(1, 2);
    for (int halving = 0; halving < 64 && !moved; ++halving, step /= 2) {
      VecQ cand = {base[0] + step * dir[0], base[1] + step * dir[1], base[2] + step * dir[2]};
      if (cand[0] == 0 && cand[1] == 0 && cand[2] == 0) continue;
      cand = canonical_homogeneous(cand);
      FrameworkModel trial = out;
      for (int v : xprime) trial.placements[v] = cand;
      refresh_bars_from_placements(trial, tree_of_edge, tree_line);
      RankCertificate cert = certify_rank(rigidity_matrix(trial));
      if (cert.rank == 2ll * fm.graph.n) {
        out = std::move(trial);
        moved = true;
      }
    }
    if (!moved)
      throw geometry_error("perturbation failed to separate coincident joints within 64 halvings");
  }
  if (!coincidence_classes(out).empty())
    throw internal_error("perturbation loop ended with coincident joints");

  RankCertificate cert = certify_rank(rigidity_matrix(out));
  if (cert.rank != 2ll * fm.graph.n) throw internal_error("final bar-joint realization is not rigid");
  return out;
}

// ---------------------------------------------------------------------------
// pinned bar-joint and sliders

ConditionReport check_pinned_bar_joint(const GraphWithRoots& g, const std::vector<int>& pinned,
                                       int jobs) {
  std::unordered_set<int> xs(pinned.begin(), pinned.end());
  if (xs.size() != pinned.size()) throw input_error("duplicate pinned vertex");
  for (int v : pinned)
    if (v < 0 || v >= g.n) throw input_error("pinned vertex outside the graph");

  GraphWithRoots h;
  h.n = g.n;
  h.edges = g.edges;
  h.vertex_names = g.vertex_names;
  std::vector<int> ground;
  std::unordered_map<int, int> colors;
  int elem = 0;
  for (int v : pinned)
    for (int c = 0; c < 2; ++c) {
      Root r;
      r.elem = elem;
      r.vertex = v;
      r.name = "pin" + std::to_string(v) + (c ? "b" : "a");
      h.roots.push_back(r);
      ground.push_back(elem);
      colors[elem] = elem;  // all pin bars pairwise distinct lines
      ++elem;
    }
  Instance inst = Instance::from_graph(h, MatroidHandle::colored(ground, colors, 3));

  ConditionReport rep;
  rep.rank_k = 2;
  rep.edge_count = (long long)inst.edge_ids.size();
  rep.root_count = (long long)inst.roots.size();
  rep.k_times_v = 2ll * g.n;
  rep.c3_ok = rep.edge_count + rep.root_count == rep.k_times_v;
  std::vector<int> witness;
  rep.c2_ok = count_condition_holds(inst, 2, 3, jobs, &witness);
  if (!rep.c2_ok) rep.violating_edges = std::move(witness);
  return rep;
}

ConditionReport check_bar_slider(const FrameworkModel& fm, int jobs) {
  if (fm.kind != FrameworkKind::bar_joint_slider) throw input_error("model is not bar_joint_slider");
  if (fm.d != 2) throw input_error("slider model requires d = 2");

  std::vector<int> ground;
  std::unordered_map<int, int> colors;
  std::map<VecQ, int> color_of_dir;
  for (const Root& r : fm.graph.roots) {
    auto it = fm.sliders.find(r.elem);
    if (it == fm.sliders.end()) throw input_error("root without slider direction");
    if (it->second.size() != 2 || (it->second[0] == 0 && it->second[1] == 0))
      throw input_error("slider direction must be a nonzero 2-vector");
    VecQ canon = canonical_homogeneous(it->second);
    auto [cit, fresh] = color_of_dir.emplace(canon, (int)color_of_dir.size());
    ground.push_back(r.elem);
    colors[r.elem] = cit->second;
  }

  ConditionReport rep;
  rep.rank_k = 2;
  rep.edge_count = (long long)fm.graph.edges.size();
  rep.root_count = (long long)fm.graph.roots.size();
  rep.k_times_v = 2ll * fm.graph.n;
  rep.c3_ok = rep.edge_count + rep.root_count == rep.k_times_v;

  // a joint carrying three or more sliders is always over-constrained and
  // can never be part of a minimally rigid framework
  std::unordered_map<int, int> sliders_at;
  for (const Root& r : fm.graph.roots) ++sliders_at[r.vertex];
  for (auto& [v, c] : sliders_at)
    if (c > 2 && rep.c1_ok) {
      rep.c1_ok = false;
      rep.offending_vertex = v;
    }

  Instance with_dirs = Instance::from_graph(fm.graph, MatroidHandle::colored(ground, colors, 2));
  std::vector<int> witness;
  bool dir_count = count_condition_holds(with_dirs, 2, 2, jobs, &witness);

  GraphWithRoots bare;
  bare.n = fm.graph.n;
  bare.edges = fm.graph.edges;
  Instance laman = Instance::from_graph(bare, MatroidHandle::free_matroid({}));
  std::vector<int> witness2;
  bool laman_ok = count_condition_holds(laman, 2, 3, jobs, &witness2);

  rep.c2_ok = dir_count && laman_ok;
  if (!dir_count)
    rep.violating_edges = std::move(witness);
  else if (!laman_ok)
    rep.violating_edges = std::move(witness2);
  return rep;
}

FrameworkModel slider_to_pinned(const FrameworkModel& fm) {
  if (fm.kind != FrameworkKind::bar_joint_slider) throw input_error("model is not bar_joint_slider");
  FrameworkModel out;
  out.kind = FrameworkKind::bar_joint_pin;
  out.d = 2;
  out.graph.n = fm.graph.n;
  out.graph.edges = fm.graph.edges;
  out.graph.vertex_names = fm.graph.vertex_names;
  out.placements = fm.placements;
  for (const Root& r : fm.graph.roots) {
    const VecQ& dir = fm.sliders.at(r.elem);
    int pv = out.graph.add_vertex("pin_" + r.name);
    out.graph.add_edge(r.vertex, pv);
    out.pinned.push_back(pv);
    // pinned at infinity in the direction orthogonal to the slider
    out.placements[pv] = canonical_homogeneous({-dir[1], dir[0], Rational(0)});
  }
  return out;
}

}  // namespace mtd
