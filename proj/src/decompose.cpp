#include "mtd/decompose.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace mtd {

const Decomposition::Part& Decomposition::part_of(int elem) const {
  for (const Part& p : parts)
    if (p.root_elem == elem) return p;
  throw input_error("no part for root element " + std::to_string(elem));
}

// ---------------------------------------------------------------------------
// helpers

namespace {

std::vector<int> edge_vertex_set(const Instance& inst, const std::vector<int>& edge_ids) {
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

std::vector<int> roots_in(const Instance& inst, const std::vector<int>& verts_sorted) {
  std::vector<int> elems;
  for (const Root& r : inst.roots)
    if (std::binary_search(verts_sorted.begin(), verts_sorted.end(), r.vertex))
      elems.push_back(r.elem);
  return elems;
}

// V(T, r): the root vertex alone for an empty tree
std::vector<int> spanned_vertices(const Instance& inst, const std::vector<int>& tree, int root_vertex) {
  if (tree.empty()) return {root_vertex};
  return edge_vertex_set(inst, tree);
}

bool connected_edge_set(const Instance& inst, const std::vector<int>& edge_ids) {
  if (edge_ids.size() <= 1) return true;
  std::unordered_map<int, int> comp;
  std::vector<int> parent(edge_ids.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = (int)i;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (size_t i = 0; i < edge_ids.size(); ++i) {
    auto [u, v] = inst.edge(edge_ids[i]);
    for (int w : {u, v}) {
      auto it = comp.find(w);
      if (it == comp.end())
        comp[w] = (int)i;
      else
        parent[find(it->second)] = find((int)i);
    }
  }
  int root = find(0);
  for (size_t i = 1; i < edge_ids.size(); ++i)
    if (find((int)i) != root) return false;
  return true;
}

}  // namespace

std::vector<std::vector<int>> vertex_components(const Instance& inst) {
  std::unordered_map<int, int> idx;
  for (size_t i = 0; i < inst.verts.size(); ++i) idx[inst.verts[i]] = (int)i;
  std::vector<int> parent(inst.verts.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = (int)i;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int e : inst.edge_ids) {
    auto [u, v] = inst.edge(e);
    parent[find(idx.at(u))] = find(idx.at(v));
  }
  std::map<int, std::vector<int>> groups;
  for (size_t i = 0; i < inst.verts.size(); ++i) groups[find((int)i)].push_back(inst.verts[i]);
  std::vector<std::vector<int>> out;
  for (auto& [key, g] : groups) out.push_back(std::move(g));
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// validation

ValidationResult validate(const Instance& inst, const Decomposition& dec) {
  auto fail = [](std::string msg) { return ValidationResult{false, std::move(msg)}; };
  const bool tree_kind = dec.kind == Decomposition::Kind::rooted_tree;

  if (dec.parts.size() != inst.roots.size())
    return fail("part count differs from root count");
  std::unordered_map<int, int> root_vertex;
  for (const Root& r : inst.roots) root_vertex[r.elem] = r.vertex;
  std::unordered_set<int> seen_roots;
  std::unordered_map<int, int> edge_owner;
  for (size_t i = 0; i < dec.parts.size(); ++i) {
    const auto& part = dec.parts[i];
    if (!root_vertex.count(part.root_elem)) return fail("part references unknown root");
    if (!seen_roots.insert(part.root_elem).second) return fail("duplicate part for one root");
    for (int e : part.edges) {
      if (!edge_owner.emplace(e, (int)i).second)
        return fail("edge " + std::to_string(e) + " appears in two parts");
    }
  }
  for (int e : inst.edge_ids)
    if (!edge_owner.count(e)) return fail("edge " + std::to_string(e) + " not covered by any part");
  if (edge_owner.size() != inst.edge_ids.size()) return fail("parts use edges outside the instance");

  for (size_t i = 0; i < dec.parts.size(); ++i) {
    const auto& part = dec.parts[i];
    if (part.edges.empty()) continue;
    if (!connected_edge_set(inst, part.edges))
      return fail("part " + std::to_string(i) + " is disconnected");
    std::vector<int> vt = edge_vertex_set(inst, part.edges);
    if (tree_kind && vt.size() != part.edges.size() + 1)
      return fail("part " + std::to_string(i) + " is cyclic");
    if (!std::binary_search(vt.begin(), vt.end(), root_vertex.at(part.root_elem)))
      return fail("part " + std::to_string(i) + " does not contain its root vertex");
  }

  const int k = inst.m.rank();
  std::unordered_map<int, std::vector<int>> spanning_elems;  // vertex -> root elems
  for (const auto& part : dec.parts) {
    for (int v : spanned_vertices(inst, part.edges, root_vertex.at(part.root_elem)))
      spanning_elems[v].push_back(part.root_elem);
  }
  for (int v : inst.verts) {
    auto it = spanning_elems.find(v);
    std::vector<int> sv = it == spanning_elems.end() ? std::vector<int>{} : it->second;
    if (tree_kind) {
      if ((int)sv.size() != k || !inst.m.is_independent(sv))
        return fail("vertex " + std::to_string(v) + ": spanning roots are not a base");
    } else {
      if (inst.m.rank(sv) != k)
        return fail("vertex " + std::to_string(v) + ": spanning roots are not a spanning set");
    }
  }
  return {true, ""};
}

// ---------------------------------------------------------------------------
// tight-set search

namespace {

std::unordered_map<int, int> per_vertex_root_rank(const Instance& inst) {
  std::unordered_map<int, std::vector<int>> at;
  for (const Root& r : inst.roots) at[r.vertex].push_back(r.elem);
  std::unordered_map<int, int> rk;
  for (int v : inst.verts) {
    auto it = at.find(v);
    rk[v] = it == at.end() ? 0 : inst.m.rank(it->second);
  }
  return rk;
}

// sp(R_v) != sp(R_F) for some v in V(F); with R_v contained in R_F this is a
// rank comparison.
bool is_unbalanced(const Instance& inst, const std::vector<int>& F,
                   const std::unordered_map<int, int>& vrank) {
  std::vector<int> vf = edge_vertex_set(inst, F);
  std::vector<int> rf = roots_in(inst, vf);
  int r = inst.m.rank(rf);
  for (int v : vf)
    if (vrank.at(v) < r) return true;
  return false;
}

struct TightSearchResult {
  std::optional<std::vector<int>> F;
};

std::vector<int> positions_to_ids(const Instance& inst, const std::vector<int>& pos) {
  std::vector<int> ids;
  ids.reserve(pos.size());
  for (int p : pos) ids.push_back(inst.edge_ids[p]);
  std::sort(ids.begin(), ids.end());
  return ids;
}

// Full search in stable order: first the minimal tight set through each
// edge, then pairwise extensions (any unbalanced proper tight set contains
// one of these).
std::optional<std::vector<int>> full_tight_search(const Instance& inst) {
  if (inst.edge_ids.empty()) return std::nullopt;
  const int k = inst.m.rank();
  auto vrank = per_vertex_root_rank(inst);
  MatchingState st(inst, k);
  if (!st.augment_to_max()) throw internal_error("tight search: H0 uncoverable (C2 broken?)");

  const int m = (int)inst.edge_ids.size();
  std::vector<int> proper_pos;
  for (int pos = 0; pos < m; ++pos) {
    auto cp = st.checkpoint();
    if (!st.extend_with_copies(pos, k)) throw internal_error("tight search: He uncoverable (C2 broken?)");
    bool allv = false;
    auto cl = st.closure_edges({pos}, true, &allv);
    if (cl) {
      std::vector<int> F = positions_to_ids(inst, *cl);
      if (count_slack(inst, k, k, F) != 0) throw internal_error("closure produced a non-tight set");
      if (is_unbalanced(inst, F, vrank)) return F;
      proper_pos.push_back(pos);
    } else if (!allv) {
      throw internal_error("tight closure escaped to an exit under C1-C3");
    }
    st.rollback(cp);
  }
  for (int pos : proper_pos) {
    auto cp = st.checkpoint();
    st.extend_with_copies(pos, k);
    for (int x = 0; x < m; ++x) {
      if (x == pos) continue;
      bool allv = false;
      auto cl = st.closure_edges({pos, x}, true, &allv);
      if (!cl) continue;
      std::vector<int> F = positions_to_ids(inst, *cl);
      if (count_slack(inst, k, k, F) != 0) throw internal_error("closure produced a non-tight set");
      if (is_unbalanced(inst, F, vrank)) return F;
    }
    st.rollback(cp);
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::vector<int>> find_unbalanced_proper_tight_set(const Instance& inst) {
  if (vertex_components(inst).size() != 1) throw input_error("tight-set search requires a connected instance");
  return full_tight_search(inst);
}

// ---------------------------------------------------------------------------
// the constructive decomposition

namespace {

using Parts = std::map<int, std::vector<int>>;

struct GoodOp {
  int j_elem;      // root whose tree absorbs the removed edge
  int uv_edge;     // edge id removed
  int fresh_elem;  // auxiliary root added parallel to j_elem
};

// Applied in reverse accumulation order once the reduced instance is solved.
void apply_good_ops(Parts& parts, const std::vector<GoodOp>& ops) {
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    auto fresh = parts.find(it->fresh_elem);
    if (fresh == parts.end()) throw internal_error("missing auxiliary part during merge");
    auto& target = parts[it->j_elem];
    target.insert(target.end(), fresh->second.begin(), fresh->second.end());
    target.push_back(it->uv_edge);
    std::sort(target.begin(), target.end());
    parts.erase(fresh);
  }
}

struct TightData {
  Instance snapshot;
  std::vector<GoodOp> ops;
  std::vector<int> F;         // sorted edge ids
  std::vector<int> vF;        // sorted vertices
  std::vector<int> rf_elems;  // snapshot root order
  std::vector<int> coloops;
  int s = 0;
  struct SRec {
    int elem, vertex, tree_elem;
  };
  std::vector<SRec> srecs;
  Parts f_parts;  // R_F root elem -> F_i
};

struct Job {
  enum class K { solve, components_merge, tight_stage_a, tight_stage_b };
  K kind;
  Instance inst;  // solve
  int n_children = 0;
  std::vector<GoodOp> ops;
  TightData td;
};

constexpr size_t kFullSearchMaxEdges = 96;

struct Solver {
  int next_elem = 0;
  std::vector<Job> jobs;
  std::vector<Parts> results;

  Parts pop_result() {
    Parts p = std::move(results.back());
    results.pop_back();
    return p;
  }

  void finish(Parts parts, const std::vector<GoodOp>& ops) {
    apply_good_ops(parts, ops);
    results.push_back(std::move(parts));
  }

  void push_solve(Instance inst) {
    Job j;
    j.kind = Job::K::solve;
    j.inst = std::move(inst);
    jobs.push_back(std::move(j));
  }

  void handle_solve(Instance inst);
  void handle_stage_a(Job j);
  void handle_stage_b(Job j);

  Parts run(Instance inst0) {
    push_solve(std::move(inst0));
    while (!jobs.empty()) {
      Job j = std::move(jobs.back());
      jobs.pop_back();
      switch (j.kind) {
        case Job::K::solve:
          handle_solve(std::move(j.inst));
          break;
        case Job::K::components_merge: {
          Parts acc;
          for (int i = 0; i < j.n_children; ++i)
            for (auto& [elem, edges] : pop_result()) acc[elem] = std::move(edges);
          finish(std::move(acc), j.ops);
          break;
        }
        case Job::K::tight_stage_a:
          handle_stage_a(std::move(j));
          break;
        case Job::K::tight_stage_b:
          handle_stage_b(std::move(j));
          break;
      }
    }
    if (results.size() != 1) throw internal_error("solver finished with a result stack of unexpected size");
    return pop_result();
  }
};

// Good-edge selection per the fixed tie-breaking rules: smallest edge id;
// the endpoint whose roots do not span the other side receives the new
// root; smallest qualifying donor root.
struct GoodEdgeSel {
  int edge_id = -1;
  int receiver = -1;
  int donor_elem = -1;
};

std::optional<GoodEdgeSel> pick_good_edge(const Instance& inst,
                                          const std::unordered_map<int, int>& vrank) {
  std::unordered_map<int, std::vector<int>> at;
  for (const Root& r : inst.roots) at[r.vertex].push_back(r.elem);
  auto roots_at = [&](int v) -> const std::vector<int>& {
    static const std::vector<int> none;
    auto it = at.find(v);
    return it == at.end() ? none : it->second;
  };
  for (int eid : inst.edge_ids) {
    auto [u, v] = inst.edge(eid);
    int ru = vrank.at(u), rv = vrank.at(v);
    std::vector<int> both = roots_at(u);
    const auto& rvv = roots_at(v);
    both.insert(both.end(), rvv.begin(), rvv.end());
    int ruv = inst.m.rank(both);
    if (ruv == ru && ruv == rv) continue;  // sp(R_u) == sp(R_v)
    int receiver = u, donor = v;
    if (ruv == ru) std::swap(receiver, donor);  // sp(R_v) inside sp(R_u): swap roles
    GoodEdgeSel sel;
    sel.edge_id = eid;
    sel.receiver = receiver;
    std::vector<int> probe = roots_at(receiver);
    probe.push_back(-1);
    for (int cand : roots_at(donor)) {
      probe.back() = cand;
      if (inst.m.is_independent(probe)) {
        sel.donor_elem = cand;
        break;
      }
    }
    if (sel.donor_elem < 0) throw internal_error("good edge without a transferable root");
    return sel;
  }
  return std::nullopt;
}

void Solver::handle_solve(Instance inst) {
  std::vector<GoodOp> ops;
  std::optional<MatchingState> engine;
  std::unordered_map<int, int> engine_pos;  // edge id -> engine position

  for (;;) {
    if (inst.edge_ids.empty()) {
      // every root must hold a base at its vertex
      const int k = inst.m.rank();
      std::unordered_map<int, std::vector<int>> at;
      for (const Root& r : inst.roots) at[r.vertex].push_back(r.elem);
      const std::vector<int> no_roots;
      for (int v : inst.verts) {
        auto it = at.find(v);
        const std::vector<int>& rv = it == at.end() ? no_roots : it->second;
        if ((int)rv.size() != k || !inst.m.is_independent(rv))
          throw internal_error("edgeless instance whose roots are not per-vertex bases");
      }
      Parts base;
      for (const Root& r : inst.roots) base[r.elem] = {};
      finish(std::move(base), ops);
      return;
    }

    auto comps = vertex_components(inst);
    if (comps.size() > 1) {
      const int k = inst.m.rank();
      Job merge;
      merge.kind = Job::K::components_merge;
      merge.n_children = (int)comps.size();
      merge.ops = std::move(ops);
      jobs.push_back(std::move(merge));
      for (const auto& comp : comps) {
        Instance sub = inst;
        sub.verts = comp;
        sub.edge_ids.clear();
        for (int e : inst.edge_ids)
          if (std::binary_search(comp.begin(), comp.end(), inst.edge(e).first))
            sub.edge_ids.push_back(e);
        sub.roots.clear();
        std::vector<int> elems;
        for (const Root& r : inst.roots)
          if (std::binary_search(comp.begin(), comp.end(), r.vertex)) {
            sub.roots.push_back(r);
            elems.push_back(r.elem);
          }
        if (inst.m.rank(elems) != k)
          throw internal_error("component roots do not span the matroid");
        sub.m = inst.m.restrict_to(elems);
        push_solve(std::move(sub));
      }
      return;
    }

    const int k = inst.m.rank();
    auto vrank = per_vertex_root_rank(inst);
    std::optional<std::vector<int>> tight;

    if (inst.edge_ids.size() <= kFullSearchMaxEdges) {
      tight = full_tight_search(inst);
    } else {
      // Large instances: validate only the chosen receiver vertex. A proper
      // tight set through it would force the full search; absence of one
      // keeps the good-edge reduction sound.
      auto sel = pick_good_edge(inst, vrank);
      if (!sel) throw internal_error("connected instance without a good edge");
      if (!engine) {
        engine.emplace(inst, k);
        engine_pos.clear();
        for (size_t i = 0; i < inst.edge_ids.size(); ++i) engine_pos[inst.edge_ids[i]] = (int)i;
        if (!engine->augment_to_max()) throw internal_error("H0 uncoverable (C2 broken?)");
      }
      bool needs_full = false;
      for (int eid : inst.edge_ids) {
        auto [a, b] = inst.edge(eid);
        if (a != sel->receiver && b != sel->receiver) continue;
        int pos = engine_pos.at(eid);
        auto cp = engine->checkpoint();
        if (!engine->extend_with_copies(pos, k)) throw internal_error("He uncoverable (C2 broken?)");
        bool allv = false;
        auto cl = engine->closure_edges({pos}, true, &allv);
        engine->rollback(cp);
        if (cl) {
          needs_full = true;
          break;
        }
        if (!allv) throw internal_error("tight closure escaped to an exit under C1-C3");
      }
      if (needs_full) tight = full_tight_search(inst);
    }

    if (tight) {
      TightData td;
      td.snapshot = inst;
      td.ops = std::move(ops);
      td.F = *tight;
      std::sort(td.F.begin(), td.F.end());
      td.vF = edge_vertex_set(inst, td.F);
      td.rf_elems = roots_in(inst, td.vF);
      td.s = inst.m.rank(td.rf_elems);
      if (td.F.size() >= inst.edge_ids.size())
        throw internal_error("proper tight set is not smaller than the edge set");

      Instance a = inst;
      a.verts = td.vF;
      a.edge_ids = td.F;
      a.roots.clear();
      for (const Root& r : inst.roots)
        if (std::binary_search(td.vF.begin(), td.vF.end(), r.vertex)) a.roots.push_back(r);
      MatroidHandle ma = inst.m.restrict_to(td.rf_elems);
      const int v_prime = td.vF.front();
      for (int i = 0; i < k - td.s; ++i) {
        int elem = next_elem++;
        td.coloops.push_back(elem);
        Root cr;
        cr.elem = elem;
        cr.vertex = v_prime;
        cr.name = "aux";
        a.roots.push_back(cr);
      }
      a.m = ma.add_coloops(td.coloops);

      Job stage_a;
      stage_a.kind = Job::K::tight_stage_a;
      stage_a.td = std::move(td);
      jobs.push_back(std::move(stage_a));
      push_solve(std::move(a));
      return;
    }

    // good-edge reduction
    auto sel = pick_good_edge(inst, vrank);
    if (!sel) throw internal_error("connected instance without a good edge");
    GoodOp op;
    op.j_elem = sel->donor_elem;
    op.uv_edge = sel->edge_id;
    op.fresh_elem = next_elem++;
    Root fresh;
    fresh.elem = op.fresh_elem;
    fresh.vertex = sel->receiver;
    fresh.name = "aux";

    inst.edge_ids.erase(std::find(inst.edge_ids.begin(), inst.edge_ids.end(), sel->edge_id));
    inst.roots.push_back(fresh);
    inst.m = inst.m.add_parallel(sel->donor_elem, op.fresh_elem);
    if (engine) {
      engine->disable_edge(engine_pos.at(sel->edge_id));
      engine->add_root_loop(fresh, inst.m);
      if (!engine->augment_to_max()) throw internal_error("reduced instance lost coverage");
    }
    ops.push_back(op);
  }
}

void Solver::handle_stage_a(Job j) {
  TightData& td = j.td;
  Parts a = pop_result();
  const Instance& snap = td.snapshot;

  // coloop parts are edge-disjoint spanning trees on V(F); their union is F'
  std::vector<int> f_prime;
  for (int c : td.coloops) {
    auto it = a.find(c);
    if (it == a.end()) throw internal_error("missing coloop part");
    const std::vector<int>& t = it->second;
    std::vector<int> vt = spanned_vertices(snap, t, -1);
    if (t.size() + 1 != td.vF.size() || vt != td.vF || !connected_edge_set(snap, t))
      throw internal_error("coloop part is not a spanning tree of the tight set");
    f_prime.insert(f_prime.end(), t.begin(), t.end());
  }
  std::sort(f_prime.begin(), f_prime.end());

  std::unordered_map<int, int> root_vertex;
  for (const Root& r : snap.roots) root_vertex[r.elem] = r.vertex;
  for (int re : td.rf_elems) {
    auto it = a.find(re);
    if (it == a.end()) throw internal_error("missing tight-set part");
    td.f_parts[re] = it->second;
    for (int v : spanned_vertices(snap, it->second, root_vertex.at(re)))
      td.srecs.push_back({next_elem++, v, re});
  }
  if ((int)td.srecs.size() != td.s * (int)td.vF.size())
    throw internal_error("unexpected number of substituted roots");

  Instance b = snap;
  {
    // E' = E \ (F \ F')
    std::vector<int> remove;
    std::set_difference(td.F.begin(), td.F.end(), f_prime.begin(), f_prime.end(),
                        std::back_inserter(remove));
    if (remove.empty()) throw internal_error("tight reduction made no progress");
    std::vector<int> kept;
    for (int e : snap.edge_ids)
      if (!std::binary_search(remove.begin(), remove.end(), e)) kept.push_back(e);
    b.edge_ids = std::move(kept);
  }
  {
    std::unordered_set<int> rf(td.rf_elems.begin(), td.rf_elems.end());
    std::vector<Root> roots;
    for (const Root& r : snap.roots)
      if (!rf.count(r.elem)) roots.push_back(r);
    MatroidHandle m2 = snap.m;
    for (const auto& s : td.srecs) {
      m2 = m2.add_parallel(s.tree_elem, s.elem);
      Root nr;
      nr.elem = s.elem;
      nr.vertex = s.vertex;
      nr.name = "aux";
      roots.push_back(nr);
    }
    b.roots = std::move(roots);
    b.m = m2.remove(td.rf_elems);
  }

  Job stage_b;
  stage_b.kind = Job::K::tight_stage_b;
  stage_b.td = std::move(td);
  jobs.push_back(std::move(stage_b));
  push_solve(std::move(b));
}

void Solver::handle_stage_b(Job j) {
  TightData& td = j.td;
  Parts b = pop_result();
  Parts out;
  std::unordered_set<int> rf(td.rf_elems.begin(), td.rf_elems.end());
  for (const Root& r : td.snapshot.roots)
    if (!rf.count(r.elem)) out[r.elem] = std::move(b.at(r.elem));
  for (int re : td.rf_elems) {
    std::vector<int> merged = td.f_parts.at(re);
    for (const auto& s : td.srecs) {
      if (s.tree_elem != re) continue;
      const auto& sub = b.at(s.elem);
      merged.insert(merged.end(), sub.begin(), sub.end());
    }
    std::sort(merged.begin(), merged.end());
    out[re] = std::move(merged);
  }
  finish(std::move(out), td.ops);
}

Decomposition to_decomposition(const Instance& inst, Parts parts, Decomposition::Kind kind) {
  Decomposition dec;
  dec.kind = kind;
  for (const Root& r : inst.roots) {
    auto it = parts.find(r.elem);
    if (it == parts.end()) throw internal_error("missing part for root");
    std::sort(it->second.begin(), it->second.end());
    dec.parts.push_back({r.elem, std::move(it->second)});
  }
  return dec;
}

}  // namespace

Decomposition basic_decomposition(const Instance& inst, int jobs) {
  ConditionReport rep = check_conditions(inst, jobs);
  if (!rep.ok()) throw infeasible_error("instance admits no basic rooted-tree decomposition", rep);
  Solver solver;
  for (const Root& r : inst.roots) solver.next_elem = std::max(solver.next_elem, r.elem + 1);
  Parts parts = solver.run(inst);
  Decomposition dec = to_decomposition(inst, std::move(parts), Decomposition::Kind::rooted_tree);
  ValidationResult vr = validate(inst, dec);
  if (!vr.ok) throw internal_error("constructed decomposition failed validation: " + vr.diagnostics);
  return dec;
}

// ---------------------------------------------------------------------------
// dual form: rooted-component packing

namespace {

long long partition_value(const Instance& inst, int k, const std::vector<std::vector<int>>& parts) {
  // |delta_G(P)| - k|P| + sum r(R_X); nonnegative for all P iff packable
  std::unordered_map<int, int> cls;
  for (size_t i = 0; i < parts.size(); ++i)
    for (int v : parts[i]) cls[v] = (int)i;
  long long crossing = 0;
  for (int e : inst.edge_ids) {
    auto [u, v] = inst.edge(e);
    if (cls.at(u) != cls.at(v)) ++crossing;
  }
  long long rank_sum = 0;
  for (const auto& cl : parts) {
    std::vector<int> sorted = cl;
    std::sort(sorted.begin(), sorted.end());
    rank_sum += inst.m.rank(roots_in(inst, sorted));
  }
  return crossing - (long long)k * (long long)parts.size() + rank_sum;
}

// Candidate violating partition: vertex classes merged along verified tight
// sets of the greedy basis (circuit zones of the non-basis edges).
std::optional<std::vector<std::vector<int>>> violating_partition(const Instance& inst, int k,
                                                                 const std::vector<int>& basis) {
  std::unordered_map<int, int> idx;
  for (size_t i = 0; i < inst.verts.size(); ++i) idx[inst.verts[i]] = (int)i;
  std::vector<int> parent(inst.verts.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = (int)i;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  std::vector<int> basis_sorted = basis;
  std::sort(basis_sorted.begin(), basis_sorted.end());
  Instance with = inst;
  for (int eid : inst.edge_ids) {
    if (std::binary_search(basis_sorted.begin(), basis_sorted.end(), eid)) continue;
    with.edge_ids = basis_sorted;
    with.edge_ids.insert(std::lower_bound(with.edge_ids.begin(), with.edge_ids.end(), eid), eid);
    auto tz = find_tight_set(with, eid, TightMode::violating);
    if (!tz) continue;
    std::vector<int> vs = edge_vertex_set(inst, *tz);
    for (size_t i = 1; i < vs.size(); ++i) parent[find(idx.at(vs[0]))] = find(idx.at(vs[i]));
  }
  std::map<int, std::vector<int>> groups;
  for (size_t i = 0; i < inst.verts.size(); ++i) groups[find((int)i)].push_back(inst.verts[i]);
  std::vector<std::vector<int>> partition;
  for (auto& [key, g] : groups) partition.push_back(std::move(g));
  if (partition_value(inst, k, partition) < 0) return partition;

  // fallback: exhaustive partition search at small size
  if (inst.verts.size() <= 9) {
    const int n = (int)inst.verts.size();
    std::vector<int> assign(n, 0);
    std::function<std::optional<std::vector<std::vector<int>>>(int, int)> rec =
        [&](int i, int maxc) -> std::optional<std::vector<std::vector<int>>> {
      if (i == n) {
        std::vector<std::vector<int>> ps(maxc);
        for (int t = 0; t < n; ++t) ps[assign[t]].push_back(inst.verts[t]);
        if (partition_value(inst, k, ps) < 0) return ps;
        return std::nullopt;
      }
      for (int c = 0; c <= maxc && c < n; ++c) {
        assign[i] = c;
        auto r = rec(i + 1, std::max(maxc, c + 1));
        if (r) return r;
      }
      return std::nullopt;
    };
    return rec(1, 1);
  }
  return std::nullopt;
}

}  // namespace

Decomposition rooted_component_packing(const Instance& inst, int jobs) {
  const int k = inst.m.rank();

  // maximal per-vertex independent sub-multiset of the roots
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

  const long long target = (long long)k * (long long)inst.verts.size() - (long long)keep_elems.size();
  std::vector<int> basis = count_basis(reduced, reduced.edge_ids);
  if ((long long)basis.size() != target) {
    ConditionReport rep;
    rep.rank_k = k;
    rep.c2_ok = false;
    rep.note = "edge set does not span the induced count matroid";
    infeasible_error err("instance admits no rooted-component packing", rep);
    err.partition = violating_partition(reduced, k, basis);
    throw err;
  }

  Instance core = reduced;
  core.edge_ids = basis;
  std::sort(core.edge_ids.begin(), core.edge_ids.end());
  Decomposition trees = basic_decomposition(core, jobs);

  // attach leftover edges to the first part spanning an endpoint
  std::unordered_map<int, int> root_vertex;
  for (const Root& r : core.roots) root_vertex[r.elem] = r.vertex;
  std::vector<std::vector<int>> part_edges;
  for (const auto& p : trees.parts) part_edges.push_back(p.edges);
  std::vector<int> leftovers;
  std::set_difference(inst.edge_ids.begin(), inst.edge_ids.end(), core.edge_ids.begin(),
                      core.edge_ids.end(), std::back_inserter(leftovers));
  for (int eid : leftovers) {
    auto [u, v] = inst.edge(eid);
    bool placed = false;
    for (size_t i = 0; i < trees.parts.size() && !placed; ++i) {
      std::vector<int> sp = spanned_vertices(inst, part_edges[i], root_vertex.at(trees.parts[i].root_elem));
      if (std::binary_search(sp.begin(), sp.end(), u) || std::binary_search(sp.begin(), sp.end(), v)) {
        part_edges[i].push_back(eid);
        std::sort(part_edges[i].begin(), part_edges[i].end());
        placed = true;
      }
    }
    if (!placed) throw internal_error("leftover edge touches no rooted component");
  }

  Decomposition dec;
  dec.kind = Decomposition::Kind::rooted_component;
  size_t core_idx = 0;
  for (const Root& r : inst.roots) {
    if (keep.count(r.elem)) {
      dec.parts.push_back({r.elem, part_edges[core_idx]});
      ++core_idx;
    } else {
      dec.parts.push_back({r.elem, {}});
    }
  }
  ValidationResult vr = validate(inst, dec);
  if (!vr.ok) throw internal_error("constructed packing failed validation: " + vr.diagnostics);
  return dec;
}

}  // namespace mtd
