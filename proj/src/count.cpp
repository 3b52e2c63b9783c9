#include "mtd/count.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <deque>
#include <functional>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace mtd {

Instance Instance::from_graph(const GraphWithRoots& g, MatroidHandle m) {
  Instance inst{.verts = {}, .edge_ids = {}, .ends = nullptr, .roots = g.roots, .m = std::move(m)};
  inst.verts.resize(g.n);
  for (int v = 0; v < g.n; ++v) inst.verts[v] = v;
  inst.edge_ids.resize(g.edges.size());
  for (size_t i = 0; i < g.edges.size(); ++i) {
    if (g.edges[i].first == g.edges[i].second) throw input_error("self-loops are not allowed");
    inst.edge_ids[i] = (int)i;
  }
  inst.ends = std::make_shared<std::vector<std::pair<int, int>>>(g.edges);
  if (inst.roots.size() != inst.m.ground().size())
    throw input_error("matroid ground size does not match root count");
  for (const Root& r : inst.roots)
    if (!inst.m.contains(r.elem)) throw input_error("root element missing from matroid ground");
  return inst;
}

const Root& Instance::root_by_elem(int elem) const {
  for (const Root& r : roots)
    if (r.elem == elem) return r;
  throw input_error("unknown root element");
}

// ---------------------------------------------------------------------------
// f values and slacks

namespace {

std::vector<int> touched_vertices(const Instance& inst, const std::vector<int>& edge_ids) {
  std::vector<int> vs;
  vs.reserve(edge_ids.size() * 2);
  for (int e : edge_ids) {
    vs.push_back(inst.edge(e).first);
    vs.push_back(inst.edge(e).second);
  }
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

std::vector<int> roots_on(const Instance& inst, const std::vector<int>& verts_sorted) {
  std::vector<int> elems;
  for (const Root& r : inst.roots)
    if (std::binary_search(verts_sorted.begin(), verts_sorted.end(), r.vertex))
      elems.push_back(r.elem);
  return elems;
}

}  // namespace

long long f_value(const Instance& inst, int c, const std::vector<int>& edge_ids) {
  if (edge_ids.empty()) throw input_error("f value is defined on nonempty edge sets");
  std::vector<int> vf = touched_vertices(inst, edge_ids);
  std::vector<int> rf = roots_on(inst, vf);
  return (long long)c * ((long long)vf.size() - 1) - ((long long)rf.size() - inst.m.rank(rf));
}

long long count_slack(const Instance& inst, int k, int ell, const std::vector<int>& edge_ids) {
  if (edge_ids.empty()) throw input_error("count slack is defined on nonempty edge sets");
  std::vector<int> vf = touched_vertices(inst, edge_ids);
  std::vector<int> rf = roots_on(inst, vf);
  return (long long)k * (long long)vf.size() - ell + inst.m.rank(rf) - (long long)rf.size() -
         (long long)edge_ids.size();
}

// ---------------------------------------------------------------------------
// matching state

struct MatchingState::Impl {
  // instance data (owned copies; the state survives instance edits)
  int k = 0;
  MatroidHandle m;
  std::vector<int> vert_ids;
  std::unordered_map<int, int> vlocal;
  std::vector<int> edge_ids;                  // by plus position
  std::vector<std::array<int, 2>> edge_ends;  // local endpoints by plus position
  std::vector<char> edge_disabled;
  std::vector<int> loop_elem, loop_vertex;  // loops, indexed 0..L-1

  // minus layout: vertex copies (vc_off prefix sums), then loop copies
  std::vector<int> vc_off;
  int vc_total = 0;

  // plus layout: edges [0, E), loops [E, E+L), copies [E+L, E+L+copies)
  int copies_edge = -1;
  int num_copies = 0;

  std::vector<int> match_plus, match_minus;
  std::vector<int> covered_loops;  // minus indices of matched loop copies

  struct Undo {
    int8_t kind;  // 0 match_plus, 1 match_minus, 2 covered push, 3 covered erase
    int idx, old_val;
  };
  std::vector<Undo> undo;

  // scratch
  mutable std::vector<int> vis_plus, vis_minus, vert_mark;
  mutable int epoch = 0;
  std::vector<std::pair<int8_t, int>> parent_minus;  // (0: from plus, 1: from minus)

  explicit Impl(MatroidHandle mm) : m(std::move(mm)) {}

  int num_edges() const { return (int)edge_ids.size(); }
  int num_loops() const { return (int)loop_elem.size(); }
  int plus_count() const { return num_edges() + num_loops() + num_copies; }
  int minus_count() const { return vc_total + num_loops(); }

  bool plus_active(int p) const { return p >= num_edges() || !edge_disabled[p]; }
  bool is_loop_minus(int y) const { return y >= vc_total; }

  std::vector<int> covered_elems() const {
    std::vector<int> es;
    es.reserve(covered_loops.size());
    for (int y : covered_loops) es.push_back(loop_elem[y - vc_total]);
    return es;
  }

  bool loop_minus_in_exit(int y) const {  // unmatched and outside the span of covered loops
    std::vector<int> es = covered_elems();
    es.push_back(loop_elem[y - vc_total]);
    return m.is_independent(es);
  }

  void set_match(int p, int y) {
    undo.push_back({0, p, match_plus[p]});
    undo.push_back({1, y, match_minus[y]});
    match_plus[p] = y;
    match_minus[y] = p;
    if (is_loop_minus(y)) {
      covered_loops.push_back(y);
      undo.push_back({2, y, 0});
    }
  }
  void unset_match(int p, int y) {
    undo.push_back({0, p, match_plus[p]});
    undo.push_back({1, y, match_minus[y]});
    match_plus[p] = -1;
    match_minus[y] = -1;
    if (is_loop_minus(y)) {
      auto it = std::find(covered_loops.begin(), covered_loops.end(), y);
      covered_loops.erase(it);
      undo.push_back({3, y, 0});
    }
  }

  void rollback_to(size_t mark) {
    while (undo.size() > mark) {
      Undo u = undo.back();
      undo.pop_back();
      switch (u.kind) {
        case 0: match_plus[u.idx] = u.old_val; break;
        case 1: match_minus[u.idx] = u.old_val; break;
        case 2: covered_loops.erase(std::find(covered_loops.begin(), covered_loops.end(), u.idx)); break;
        case 3: covered_loops.push_back(u.idx); break;
      }
    }
  }

  template <class Fn>
  void for_each_neighbor(int p, Fn&& fn) const {
    auto vertex_copies = [&](int lv) {
      for (int y = vc_off[lv]; y < vc_off[lv + 1]; ++y) fn(y);
    };
    if (p < num_edges()) {
      vertex_copies(edge_ends[p][0]);
      vertex_copies(edge_ends[p][1]);
    } else if (p < num_edges() + num_loops()) {
      int li = p - num_edges();
      vertex_copies(loop_vertex[li]);
      fn(vc_total + li);
    } else {
      vertex_copies(edge_ends[copies_edge][0]);
      vertex_copies(edge_ends[copies_edge][1]);
    }
  }

  void stamp() const {
    ++epoch;
    vis_plus.assign(plus_count(), 0);
    vis_minus.assign(minus_count(), 0);
  }

  bool augment_once();
  bool augment_all();
};

// One BFS phase over the exchangeability digraph; augments along a shortest
// entrance->exit path if one exists.
bool MatchingState::Impl::augment_once() {
  stamp();
  parent_minus.assign(minus_count(), {-1, -1});
  std::deque<std::pair<int8_t, int>> q;  // (0 plus, 1 minus)
  for (int p = 0; p < plus_count(); ++p)
    if (plus_active(p) && match_plus[p] == -1) {
      vis_plus[p] = 1;
      q.emplace_back(0, p);
    }

  int exit_minus = -1;
  std::vector<int> cov = covered_elems();
  while (!q.empty() && exit_minus < 0) {
    auto [side, x] = q.front();
    q.pop_front();
    if (side == 0) {
      for_each_neighbor(x, [&](int y) {
        if (exit_minus >= 0 || vis_minus[y]) return;
        vis_minus[y] = 1;
        parent_minus[y] = {0, x};
        if (match_minus[y] == -1) {
          if (!is_loop_minus(y)) {
            exit_minus = y;  // uncovered vertex copy
            return;
          }
          cov.push_back(loop_elem[y - vc_total]);
          bool indep = m.is_independent(cov);
          cov.pop_back();
          if (indep) {
            exit_minus = y;
            return;
          }
          q.emplace_back(1, y);  // spanned: exchange arcs continue from here
        } else {
          q.emplace_back(1, y);
        }
      });
    } else {
      int y = x;
      if (match_minus[y] != -1) {
        int p = match_minus[y];
        if (!vis_plus[p]) {
          vis_plus[p] = 1;
          q.emplace_back(0, p);
        }
      } else {
        // unmatched loop copy inside the span: exchange with covered loops
        int ye = loop_elem[y - vc_total];
        for (int u : covered_loops) {
          if (vis_minus[u]) continue;
          std::vector<int> probe;
          probe.reserve(cov.size());
          for (int c : cov)
            if (c != loop_elem[u - vc_total]) probe.push_back(c);
          probe.push_back(ye);
          if (m.is_independent(probe)) {
            vis_minus[u] = 1;
            parent_minus[u] = {1, y};
            q.emplace_back(1, u);
          }
        }
      }
    }
  }
  if (exit_minus < 0) return false;

  // Walk back, collecting pair flips; matching arrays still reflect the
  // pre-augmentation state during the walk.
  std::vector<std::pair<int, int>> to_add, to_remove;
  int cur = exit_minus;
  while (true) {
    auto [kind, from] = parent_minus[cur];
    if (kind == 1) {
      cur = from;  // exchange arc: no pair change
      continue;
    }
    int p = from;
    to_add.emplace_back(p, cur);
    if (match_plus[p] == -1) break;
    int y = match_plus[p];
    to_remove.emplace_back(p, y);
    cur = y;
  }
  for (auto [p, y] : to_remove) unset_match(p, y);
  for (auto [p, y] : to_add) set_match(p, y);
  if (!m.is_independent(covered_elems())) throw internal_error("augmentation broke minus independence");
  return true;
}

bool MatchingState::Impl::augment_all() {
  bool progress = true;
  while (progress) {
    bool done = true;
    for (int p = 0; p < plus_count(); ++p)
      if (plus_active(p) && match_plus[p] == -1) {
        done = false;
        break;
      }
    if (done) return true;
    progress = augment_once();
  }
  return false;
}

MatchingState::MatchingState(const Instance& inst, int k) : impl_(std::make_unique<Impl>(inst.m)) {
  Impl& im = *impl_;
  im.k = k;
  im.vert_ids = inst.verts;
  for (size_t i = 0; i < im.vert_ids.size(); ++i) im.vlocal[im.vert_ids[i]] = (int)i;

  im.edge_ids = inst.edge_ids;
  im.edge_ends.resize(im.edge_ids.size());
  for (size_t i = 0; i < im.edge_ids.size(); ++i) {
    auto [u, v] = inst.edge(im.edge_ids[i]);
    im.edge_ends[i] = {im.vlocal.at(u), im.vlocal.at(v)};
  }
  im.edge_disabled.assign(im.edge_ids.size(), 0);

  // Per-vertex surplus folding: loops carry a per-vertex basis of the roots,
  // and a vertex with w redundant roots loses w of its k copies.
  const int nv = (int)im.vert_ids.size();
  std::vector<std::vector<int>> roots_at(nv);
  for (const Root& r : inst.roots) {
    auto it = im.vlocal.find(r.vertex);
    if (it == im.vlocal.end()) throw input_error("root on vertex outside instance");
    roots_at[it->second].push_back(r.elem);
  }
  im.vc_off.assign(nv + 1, 0);
  for (int lv = 0; lv < nv; ++lv) {
    std::vector<int> basis = im.m.max_independent_subset(roots_at[lv]);
    int w = (int)roots_at[lv].size() - (int)basis.size();
    if (k - w < (int)basis.size())
      throw input_error("per-vertex root count exceeds k; matching reduction unavailable");
    im.vc_off[lv + 1] = im.vc_off[lv] + (k - w);
    for (int e : basis) {
      im.loop_elem.push_back(e);
      im.loop_vertex.push_back(lv);
    }
  }
  im.vc_total = im.vc_off[nv];
  im.match_plus.assign(im.plus_count(), -1);
  im.match_minus.assign(im.minus_count(), -1);
}

MatchingState::MatchingState(const MatchingState& o) : impl_(std::make_unique<Impl>(*o.impl_)) {}
MatchingState::~MatchingState() = default;

int MatchingState::plus_count() const { return impl_->plus_count(); }
int MatchingState::minus_count() const { return impl_->minus_count(); }
int MatchingState::matching_size() const {
  int c = 0;
  for (int p = 0; p < impl_->plus_count(); ++p)
    if (impl_->plus_active(p) && impl_->match_plus[p] != -1) ++c;
  return c;
}
bool MatchingState::all_plus_covered() const {
  for (int p = 0; p < impl_->plus_count(); ++p)
    if (impl_->plus_active(p) && impl_->match_plus[p] == -1) return false;
  return true;
}
int MatchingState::partner_of_plus(int p) const { return impl_->match_plus[p]; }

bool MatchingState::augment_to_max() { return impl_->augment_all(); }

bool MatchingState::extend_with_copies(int edge_pos, int ell) {
  Impl& im = *impl_;
  if (im.num_copies != 0) throw internal_error("copies already present");
  im.copies_edge = edge_pos;
  im.num_copies = ell;
  im.match_plus.resize(im.plus_count(), -1);
  return im.augment_all();
}

MatchingState::Checkpoint MatchingState::checkpoint() const {
  return {impl_->undo.size(), impl_->num_copies};
}

void MatchingState::rollback(const Checkpoint& cp) {
  Impl& im = *impl_;
  im.rollback_to(cp.undo_mark);
  if (im.num_copies != cp.copies) {
    im.num_copies = cp.copies;
    if (cp.copies == 0) im.copies_edge = -1;
    im.match_plus.resize(im.plus_count(), -1);
  }
}

void MatchingState::disable_edge(int edge_pos) {
  Impl& im = *impl_;
  if (im.num_copies) throw internal_error("cannot edit state while copies are live");
  int y = im.match_plus[edge_pos];
  if (y != -1) im.unset_match(edge_pos, y);
  im.edge_disabled[edge_pos] = 1;
  im.undo.clear();
}

void MatchingState::add_root_loop(const Root& r, const MatroidHandle& m) {
  Impl& im = *impl_;
  if (im.num_copies) throw internal_error("cannot edit state while copies are live");
  auto it = im.vlocal.find(r.vertex);
  if (it == im.vlocal.end()) throw input_error("root on vertex outside instance");
  im.m = m;
  int li = im.num_loops();
  im.loop_elem.push_back(r.elem);
  im.loop_vertex.push_back(it->second);
  // plus side gains the loop at position E+L; minus side gains its copy
  im.match_plus.insert(im.match_plus.begin() + im.num_edges() + li, -1);
  im.match_minus.push_back(-1);
  im.undo.clear();
}

std::optional<std::vector<int>> MatchingState::closure_edges(const std::vector<int>& seeds,
                                                             bool stop_when_all_verts,
                                                             bool* all_verts) const {
  const Impl& im = *impl_;
  if (all_verts) *all_verts = false;
  im.stamp();
  im.vert_mark.assign(im.vert_ids.size(), 0);
  int verts_seen = 0;
  const int nv = (int)im.vert_ids.size();
  std::deque<std::pair<int8_t, int>> q;
  std::vector<int> cov = im.covered_elems();

  auto mark_vertex = [&](int lv) {
    if (!im.vert_mark[lv]) {
      im.vert_mark[lv] = 1;
      ++verts_seen;
    }
  };
  auto push_plus = [&](int p) {
    if (im.vis_plus[p]) return;
    im.vis_plus[p] = 1;
    if (p < im.num_edges() || p >= im.num_edges() + im.num_loops()) {
      int ep = p < im.num_edges() ? p : im.copies_edge;
      mark_vertex(im.edge_ends[ep][0]);
      mark_vertex(im.edge_ends[ep][1]);
    }
    q.emplace_back(0, p);
  };

  for (int s : seeds) push_plus(s);
  for (int c = 0; c < im.num_copies; ++c) push_plus(im.num_edges() + im.num_loops() + c);
  bool escaped = false;
  while (!q.empty()) {
    if (stop_when_all_verts && verts_seen == nv) {
      if (all_verts) *all_verts = true;
      return std::nullopt;
    }
    auto [side, x] = q.front();
    q.pop_front();
    if (side == 0) {
      im.for_each_neighbor(x, [&](int y) {
        if (!im.vis_minus[y]) {
          im.vis_minus[y] = 1;
          q.emplace_back(1, y);
        }
      });
    } else {
      int y = x;
      if (im.match_minus[y] != -1) {
        push_plus(im.match_minus[y]);
      } else if (!im.is_loop_minus(y)) {
        escaped = true;  // uncovered vertex copy is an exit
        break;
      } else {
        int ye = im.loop_elem[y - im.vc_total];
        cov.push_back(ye);
        bool indep = im.m.is_independent(cov);
        cov.pop_back();
        if (indep) {
          escaped = true;  // exit on the loop side
          break;
        }
        for (int u : im.covered_loops) {
          if (im.vis_minus[u]) continue;
          std::vector<int> probe;
          for (int c : cov)
            if (c != im.loop_elem[u - im.vc_total]) probe.push_back(c);
          probe.push_back(ye);
          if (im.m.is_independent(probe)) {
            im.vis_minus[u] = 1;
            q.emplace_back(1, u);
          }
        }
      }
    }
  }
  if (escaped) return std::nullopt;
  std::vector<int> result;
  for (int p = 0; p < im.num_edges(); ++p)
    if (im.vis_plus[p] && !im.edge_disabled[p]) result.push_back(p);
  return result;
}

std::vector<int> MatchingState::unreaching_edges() const {
  const Impl& im = *impl_;
  im.stamp();
  std::deque<std::pair<int8_t, int>> q;
  std::vector<int> cov = im.covered_elems();

  // per-vertex incidence lists for the reversed edge arcs
  std::vector<std::vector<int>> plus_at(im.vert_ids.size());
  for (int p = 0; p < im.plus_count(); ++p) {
    if (!im.plus_active(p)) continue;
    if (p < im.num_edges()) {
      plus_at[im.edge_ends[p][0]].push_back(p);
      plus_at[im.edge_ends[p][1]].push_back(p);
    } else if (p < im.num_edges() + im.num_loops()) {
      plus_at[im.loop_vertex[p - im.num_edges()]].push_back(p);
    } else {
      plus_at[im.edge_ends[im.copies_edge][0]].push_back(p);
      plus_at[im.edge_ends[im.copies_edge][1]].push_back(p);
    }
  }
  std::vector<int> vc_vertex(im.vc_total);
  for (size_t lv = 0; lv < im.vert_ids.size(); ++lv)
    for (int y = im.vc_off[lv]; y < im.vc_off[lv + 1]; ++y) vc_vertex[y] = (int)lv;

  auto push_minus = [&](int y) {
    if (!im.vis_minus[y]) {
      im.vis_minus[y] = 1;
      q.emplace_back(1, y);
    }
  };
  // seed with the exit set
  for (int y = 0; y < im.minus_count(); ++y) {
    if (im.match_minus[y] != -1) continue;
    if (!im.is_loop_minus(y)) {
      push_minus(y);
    } else {
      cov.push_back(im.loop_elem[y - im.vc_total]);
      bool indep = im.m.is_independent(cov);
      cov.pop_back();
      if (indep) push_minus(y);
    }
  }
  while (!q.empty()) {
    auto [side, x] = q.front();
    q.pop_front();
    if (side == 1) {
      int y = x;
      // reversed forward arcs p -> y
      if (!im.is_loop_minus(y)) {
        for (int p : plus_at[vc_vertex[y]])
          if (!im.vis_plus[p]) {
            im.vis_plus[p] = 1;
            q.emplace_back(0, p);
          }
      } else {
        int p = im.num_edges() + (y - im.vc_total);
        if (p < im.num_edges() + im.num_loops() && !im.vis_plus[p]) {
          im.vis_plus[p] = 1;
          q.emplace_back(0, p);
        }
      }
      // reversed exchange arcs v -> y (y matched loop copy)
      if (im.is_loop_minus(y) && im.match_minus[y] != -1) {
        int ue = im.loop_elem[y - im.vc_total];
        for (int li = 0; li < im.num_loops(); ++li) {
          int v = im.vc_total + li;
          if (im.vis_minus[v] || im.match_minus[v] != -1) continue;
          std::vector<int> probe;
          for (int c : cov)
            if (c != ue) probe.push_back(c);
          probe.push_back(im.loop_elem[li]);
          if (im.m.is_independent(probe)) push_minus(v);
        }
      }
    } else {
      // reversed matching arc: plus -> its partner
      int p = x;
      if (im.match_plus[p] != -1) push_minus(im.match_plus[p]);
    }
  }
  std::vector<int> result;
  for (int p = 0; p < im.num_edges(); ++p)
    if (!im.vis_plus[p] && !im.edge_disabled[p]) result.push_back(p);
  return result;
}

long long MatchingState::rado_min_bruteforce() const {
  const Impl& im = *impl_;
  std::vector<int> active;
  for (int p = 0; p < im.plus_count(); ++p)
    if (im.plus_active(p)) active.push_back(p);
  if (active.size() > 22) throw input_error("rado_min_bruteforce: plus side too large");
  long long best = (long long)active.size();  // F = empty
  for (size_t mask = 1; mask < (size_t(1) << active.size()); ++mask) {
    std::vector<char> vmark(im.vert_ids.size(), 0);
    std::vector<int> loop_elems;
    for (size_t i = 0; i < active.size(); ++i) {
      if (!(mask >> i & 1)) continue;
      int p = active[i];
      if (p < im.num_edges()) {
        vmark[im.edge_ends[p][0]] = vmark[im.edge_ends[p][1]] = 1;
      } else if (p < im.num_edges() + im.num_loops()) {
        int li = p - im.num_edges();
        vmark[im.loop_vertex[li]] = 1;
        loop_elems.push_back(im.loop_elem[li]);
      } else {
        vmark[im.edge_ends[im.copies_edge][0]] = vmark[im.edge_ends[im.copies_edge][1]] = 1;
      }
    }
    long long gamma_rank = 0;
    for (size_t lv = 0; lv < im.vert_ids.size(); ++lv)
      if (vmark[lv]) gamma_rank += im.vc_off[lv + 1] - im.vc_off[lv];
    gamma_rank += im.m.rank(loop_elems);
    long long val = gamma_rank + (long long)active.size() - (long long)__builtin_popcountll(mask);
    best = std::min(best, val);
  }
  return best;
}

// ---------------------------------------------------------------------------
// condition checks

namespace {

// connected components of the edge positions (by shared endpoints)
std::vector<std::vector<int>> edge_components(const Instance& inst, const std::vector<int>& edge_ids) {
  std::unordered_map<int, int> comp_of_vertex;
  std::vector<int> parent(edge_ids.size());
  for (size_t i = 0; i < edge_ids.size(); ++i) parent[i] = (int)i;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (size_t i = 0; i < edge_ids.size(); ++i) {
    auto [u, v] = inst.edge(edge_ids[i]);
    for (int w : {u, v}) {
      auto it = comp_of_vertex.find(w);
      if (it == comp_of_vertex.end())
        comp_of_vertex[w] = (int)i;
      else
        parent[find(it->second)] = find((int)i);
    }
  }
  std::unordered_map<int, std::vector<int>> groups;
  for (size_t i = 0; i < edge_ids.size(); ++i) groups[find((int)i)].push_back(edge_ids[i]);
  std::vector<std::vector<int>> out;
  for (auto& [k, g] : groups) out.push_back(std::move(g));
  std::sort(out.begin(), out.end());
  return out;
}

// Verified violating set from an unaugmentable matching; when edge_pos >= 0
// the returned set contains that edge.
std::vector<int> extract_violating(const Instance& inst, const MatchingState& st, int k, int ell,
                                   int edge_pos) {
  std::vector<int> upos = st.unreaching_edges();
  std::vector<int> uids;
  for (int p : upos) uids.push_back(inst.edge_ids[p]);
  const int eid = edge_pos >= 0 ? inst.edge_ids[edge_pos] : -1;
  if (eid >= 0 && std::find(uids.begin(), uids.end(), eid) == uids.end()) uids.push_back(eid);
  for (const auto& comp : edge_components(inst, uids)) {
    if (eid >= 0 && std::find(comp.begin(), comp.end(), eid) == comp.end()) continue;
    if (count_slack(inst, k, ell, comp) < 0) return comp;
  }
  // Extraction did not verify (can happen off the C1 regime): fall back to
  // enumeration when in reach.
  if (inst.edge_ids.size() <= 20) {
    const size_t m = inst.edge_ids.size();
    for (size_t sz = 1; sz <= m; ++sz)
      for (size_t mask = 1; mask < (size_t(1) << m); ++mask) {
        if ((size_t)__builtin_popcountll(mask) != sz) continue;
        std::vector<int> f;
        for (size_t i = 0; i < m; ++i)
          if (mask >> i & 1) f.push_back(inst.edge_ids[i]);
        if (f.empty() || (eid >= 0 && std::find(f.begin(), f.end(), eid) == f.end())) continue;
        if (count_slack(inst, k, ell, f) < 0) return f;
      }
  }
  throw internal_error("violating set extraction failed to verify");
}

bool run_edge_probes(const Instance& inst, MatchingState& st, int k, int ell, int jobs,
                     int* failing_pos) {
  const int m = (int)inst.edge_ids.size();
  auto probe = [&](MatchingState& s, int pos) {
    auto cp = s.checkpoint();
    bool ok = s.extend_with_copies(pos, ell);
    s.rollback(cp);
    return ok;
  };
  if (jobs <= 1 || m < 32) {
    for (int pos = 0; pos < m; ++pos)
      if (!probe(st, pos)) {
        *failing_pos = pos;
        return false;
      }
    return true;
  }
  std::atomic<int> fail{m};
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&, t] {
      MatchingState local(st);
      for (;;) {
        int pos = next.fetch_add(1);
        if (pos >= m || pos > fail.load()) break;
        if (!probe(local, pos)) {
          int cur = fail.load();
          while (pos < cur && !fail.compare_exchange_weak(cur, pos)) {
          }
        }
      }
    });
  for (auto& th : pool) th.join();
  if (fail.load() < m) {
    *failing_pos = fail.load();
    return false;
  }
  return true;
}

}  // namespace

bool count_condition_holds(const Instance& inst, int k, int ell, int jobs,
                           std::vector<int>* witness) {
  if (ell < 0 || k < 0) throw input_error("count condition: need k >= 0 and ell >= 0");
  if (inst.edge_ids.empty()) return true;
  if (k == 0) {
    // any edge set violates a zero-rank count
    if (witness) *witness = {inst.edge_ids[0]};
    return false;
  }

  // The matching reduction folds per-vertex surplus roots into reduced
  // vertex copies, which needs |R_v| <= k. Beyond that, enumerate.
  {
    std::unordered_map<int, int> root_count;
    for (const Root& r : inst.roots) ++root_count[r.vertex];
    bool oversized = false;
    for (auto& [v, c] : root_count) oversized = oversized || c > k;
    if (oversized) {
      const size_t m = inst.edge_ids.size();
      if (m > 18) throw input_error("a vertex carries more than k roots; instance too large to enumerate");
      for (size_t mask = 1; mask < (size_t(1) << m); ++mask) {
        std::vector<int> f;
        for (size_t i = 0; i < m; ++i)
          if (mask >> i & 1) f.push_back(inst.edge_ids[i]);
        if (count_slack(inst, k, ell, f) < 0) {
          if (witness) *witness = f;
          return false;
        }
      }
      return true;
    }
  }

  MatchingState st(inst, k);
  if (!st.augment_to_max()) {
    // already the ell = 0 condition fails
    if (witness) *witness = extract_violating(inst, st, k, ell, -1);
    return false;
  }
  int failing = -1;
  if (run_edge_probes(inst, st, k, ell, jobs, &failing)) return true;
  if (witness) {
    st.extend_with_copies(failing, ell);
    *witness = extract_violating(inst, st, k, ell, failing);
  }
  return false;
}

ConditionReport check_conditions(const Instance& inst, int jobs) {
  ConditionReport rep;
  const int k = inst.m.rank();
  rep.rank_k = k;

  bool oversized_vertex = false;
  for (int v : inst.verts) {
    std::vector<int> rv;
    for (const Root& r : inst.roots)
      if (r.vertex == v) rv.push_back(r.elem);
    if ((int)rv.size() > k) oversized_vertex = true;
    if (!inst.m.is_independent(rv)) {
      if (rep.c1_ok) {
        rep.c1_ok = false;
        rep.offending_vertex = v;
      }
    }
  }

  rep.edge_count = (long long)inst.edge_ids.size();
  rep.root_count = (long long)inst.roots.size();
  rep.k_times_v = (long long)k * (long long)inst.verts.size();
  rep.c3_ok = rep.edge_count + rep.root_count == rep.k_times_v;

  if (oversized_vertex) {
    rep.note = "C2 not evaluated: a vertex carries more than k roots (C1 already fails)";
    return rep;
  }
  std::vector<int> witness;
  rep.c2_ok = count_condition_holds(inst, k, k, jobs, &witness);
  if (!rep.c2_ok) rep.violating_edges = std::move(witness);
  return rep;
}

// ---------------------------------------------------------------------------
// count matroid rank

namespace {

void require_c1(const Instance& inst) {
  for (int v : inst.verts) {
    std::vector<int> rv;
    for (const Root& r : inst.roots)
      if (r.vertex == v) rv.push_back(r.elem);
    if (!inst.m.is_independent(rv)) throw input_error("C1 precondition violated");
  }
}

}  // namespace

std::vector<int> count_basis(const Instance& inst, const std::vector<int>& edge_ids,
                             std::optional<int> k_opt) {
  require_c1(inst);
  const int k = k_opt.value_or(inst.m.rank());
  if (k < inst.m.rank()) throw input_error("count parameter below the matroid rank");
  Instance sub = inst;
  sub.edge_ids.clear();
  std::vector<int> basis;
  for (int eid : edge_ids) {
    sub.edge_ids = basis;
    sub.edge_ids.push_back(eid);
    std::sort(sub.edge_ids.begin(), sub.edge_ids.end());
    MatchingState st(sub, k);
    bool ok = st.augment_to_max();
    if (ok) {
      int pos = (int)(std::find(sub.edge_ids.begin(), sub.edge_ids.end(), eid) - sub.edge_ids.begin());
      ok = st.extend_with_copies(pos, k);
    }
    if (ok) basis.push_back(eid);
  }
  return basis;
}

int count_rank(const Instance& inst, const std::vector<int>& edge_ids, std::optional<int> k_opt) {
  return (int)count_basis(inst, edge_ids, k_opt).size();
}

std::optional<std::vector<int>> find_tight_set(const Instance& inst, int eid, TightMode mode,
                                               std::optional<int> k_opt) {
  auto it = std::find(inst.edge_ids.begin(), inst.edge_ids.end(), eid);
  if (it == inst.edge_ids.end()) throw input_error("find_tight_set: edge not in instance");
  const int pos = (int)(it - inst.edge_ids.begin());
  const int k = k_opt.value_or(inst.m.rank());

  MatchingState st(inst, k);
  bool base_ok = st.augment_to_max();
  bool covered = base_ok && st.extend_with_copies(pos, k);

  if (mode == TightMode::tight) {
    if (!covered) throw input_error("find_tight_set(tight): C2 precondition violated");
    std::vector<int> upos = st.unreaching_edges();
    std::vector<int> uids;
    for (int p : upos) uids.push_back(inst.edge_ids[p]);
    if (std::find(uids.begin(), uids.end(), eid) == uids.end()) return std::nullopt;
    for (const auto& comp : edge_components(inst, uids)) {
      if (std::find(comp.begin(), comp.end(), eid) == comp.end()) continue;
      if (count_slack(inst, k, k, comp) == 0) return comp;
      break;
    }
    // re-verification failed; derive the maximal tight set by enumeration
    if (inst.edge_ids.size() <= 15) {
      std::vector<int> others;
      for (int id : inst.edge_ids)
        if (id != eid) others.push_back(id);
      std::vector<int> uni;
      for (size_t mask = 0; mask < (size_t(1) << others.size()); ++mask) {
        std::vector<int> f = {eid};
        for (size_t i = 0; i < others.size(); ++i)
          if (mask >> i & 1) f.push_back(others[i]);
        std::sort(f.begin(), f.end());
        if (count_slack(inst, k, k, f) == 0) {
          std::vector<int> merged;
          std::set_union(uni.begin(), uni.end(), f.begin(), f.end(), std::back_inserter(merged));
          uni = std::move(merged);
        }
      }
      if (uni.empty()) return std::nullopt;
      if (count_slack(inst, k, k, uni) != 0) throw internal_error("tight union failed to verify");
      return uni;
    }
    return std::nullopt;
  }

  if (covered) return std::nullopt;  // nothing violating through this edge
  return extract_violating(inst, st, k, k, pos);
}

}  // namespace mtd
