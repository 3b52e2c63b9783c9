#include "mtd/oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace mtd::oracles {

namespace {

void enforce(const Instance& inst, const OracleBudget& b) {
  if ((int)inst.verts.size() > b.max_vertices || (int)inst.edge_ids.size() > b.max_edges ||
      (int)inst.roots.size() > b.max_roots)
    throw budget_error("oracle budget exceeded");
}

std::vector<int> verts_of(const Instance& inst, const std::vector<int>& F) {
  std::vector<int> vs;
  for (int e : F) {
    vs.push_back(inst.edge(e).first);
    vs.push_back(inst.edge(e).second);
  }
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

std::vector<int> roots_on(const Instance& inst, const std::vector<int>& vs) {
  std::vector<int> out;
  for (const Root& r : inst.roots)
    if (std::binary_search(vs.begin(), vs.end(), r.vertex)) out.push_back(r.elem);
  return out;
}

long long f_of(const Instance& inst, int c, const std::vector<int>& F) {
  std::vector<int> vs = verts_of(inst, F);
  std::vector<int> rf = roots_on(inst, vs);
  return (long long)c * ((long long)vs.size() - 1) - ((long long)rf.size() - inst.m.rank(rf));
}

void check_c1(const Instance& inst) {
  std::unordered_map<int, std::vector<int>> at;
  for (const Root& r : inst.roots) at[r.vertex].push_back(r.elem);
  for (auto& [v, elems] : at)
    if (!inst.m.is_independent(elems)) throw input_error("oracle requires C1");
}

}  // namespace

void for_each_partition(int n, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> assign(n, 0);
  std::function<void(int, int)> rec = [&](int i, int used) {
    if (i == n) {
      fn(assign);
      return;
    }
    for (int c = 0; c <= used && c < n; ++c) {
      assign[i] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  if (n == 0) return;
  rec(0, 0);
}

RankByPartitions rank_by_partitions(const Instance& inst, const std::vector<int>& F,
                                    const OracleBudget& budget, std::optional<int> k_opt) {
  enforce(inst, budget);
  check_c1(inst);
  const int k = k_opt.value_or(inst.m.rank());
  const int n = (int)inst.verts.size();

  // vertex-partition formula
  RankByPartitions best;
  best.value = -1;
  for_each_partition(n, [&](const std::vector<int>& assign) {
    int classes = *std::max_element(assign.begin(), assign.end()) + 1;
    std::vector<std::vector<int>> parts(classes);
    for (int i = 0; i < n; ++i) parts[assign[i]].push_back(inst.verts[i]);
    std::unordered_map<int, int> cls;
    for (int i = 0; i < n; ++i) cls[inst.verts[i]] = assign[i];
    long long crossing = 0;
    for (int e : F)
      if (cls.at(inst.edge(e).first) != cls.at(inst.edge(e).second)) ++crossing;
    long long val = crossing + (long long)k * (n - classes) - (long long)inst.roots.size();
    for (auto& p : parts) {
      std::sort(p.begin(), p.end());
      val += inst.m.rank(roots_on(inst, p));
    }
    if (best.value < 0 || val < best.value) {
      best.value = val;
      best.min_partition = parts;
    }
  });
  if (F.empty()) {
    // the vertex-partition formula with the all-singletons partition gives 0
    best.value = 0;
    best.min_partition.clear();
  }

  // edge-partition formula: min |F0| + sum f(F_i) over partitions with F_i nonempty
  long long best_edge = F.empty() ? 0 : -1;
  const int m = (int)F.size();
  for (int f0_mask = 0; f0_mask < (1 << m); ++f0_mask) {
    std::vector<int> rest;
    for (int i = 0; i < m; ++i)
      if (!(f0_mask >> i & 1)) rest.push_back(F[i]);
    long long base = __builtin_popcount((unsigned)f0_mask);
    if (rest.empty()) {
      if (best_edge < 0 || base < best_edge) best_edge = base;
      continue;
    }
    for_each_partition((int)rest.size(), [&](const std::vector<int>& assign) {
      int classes = *std::max_element(assign.begin(), assign.end()) + 1;
      std::vector<std::vector<int>> blocks(classes);
      for (size_t i = 0; i < rest.size(); ++i) blocks[assign[i]].push_back(rest[i]);
      long long val = base;
      for (auto& bl : blocks) val += f_of(inst, k, bl);
      if (best_edge < 0 || val < best_edge) best_edge = val;
    });
  }

  if (best.value != best_edge)
    throw internal_error("rank formulas disagree: partition=" + std::to_string(best.value) +
                         " edge=" + std::to_string(best_edge));
  return best;
}

bool decomposition_is_basic(const Instance& inst, const Decomposition& dec) {
  if (dec.parts.size() != inst.roots.size()) return false;
  std::unordered_map<int, int> root_vertex;
  for (const Root& r : inst.roots) root_vertex[r.elem] = r.vertex;

  std::unordered_set<int> used;
  for (const auto& p : dec.parts)
    for (int e : p.edges)
      if (!used.insert(e).second) return false;
  if (used.size() != inst.edge_ids.size()) return false;
  for (int e : inst.edge_ids)
    if (!used.count(e)) return false;

  std::unordered_map<int, std::vector<int>> spans;  // vertex -> elems
  for (const auto& p : dec.parts) {
    if (!root_vertex.count(p.root_elem)) return false;
    const int rv = root_vertex.at(p.root_elem);
    if (p.edges.empty()) {
      spans[rv].push_back(p.root_elem);
      continue;
    }
    // connected and acyclic, with the root inside
    std::map<int, std::vector<std::pair<int, int>>> adj;  // vertex -> (other, edge)
    std::vector<int> vs = verts_of(inst, p.edges);
    for (int e : p.edges) {
      auto [u, v] = inst.edge(e);
      adj[u].push_back({v, e});
      adj[v].push_back({u, e});
    }
    if (vs.size() != p.edges.size() + 1) return false;
    if (!std::binary_search(vs.begin(), vs.end(), rv)) return false;
    std::unordered_set<int> seen;
    std::vector<int> stack = {vs[0]};
    seen.insert(vs[0]);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (auto [w, e] : adj[v])
        if (seen.insert(w).second) stack.push_back(w);
    }
    if (seen.size() != vs.size()) return false;
    for (int v : vs) spans[v].push_back(p.root_elem);
  }
  const int k = inst.m.rank();
  for (int v : inst.verts) {
    std::vector<int> sv = spans.count(v) ? spans[v] : std::vector<int>{};
    if ((int)sv.size() != k || !inst.m.is_independent(sv)) return false;
  }
  return true;
}

std::optional<Decomposition> exhaustive_basic_decomposition(const Instance& inst,
                                                            const OracleBudget& budget) {
  enforce(inst, budget);
  const int t = (int)inst.roots.size();
  const int m = (int)inst.edge_ids.size();
  if (m > 0 && t == 0) return std::nullopt;

  std::vector<int> assign(m, 0);
  for (;;) {
    Decomposition dec;
    dec.kind = Decomposition::Kind::rooted_tree;
    dec.parts.resize(t);
    for (int i = 0; i < t; ++i) dec.parts[i].root_elem = inst.roots[i].elem;
    for (int i = 0; i < m; ++i) dec.parts[assign[i]].edges.push_back(inst.edge_ids[i]);
    if (decomposition_is_basic(inst, dec)) return dec;
    if (m == 0) break;
    int i = 0;
    while (i < m && assign[i] == t - 1) assign[i++] = 0;
    if (i == m) break;
    ++assign[i];
  }
  if (m == 0) {
    Decomposition dec;
    dec.kind = Decomposition::Kind::rooted_tree;
    for (const Root& r : inst.roots) dec.parts.push_back({r.elem, {}});
    if (decomposition_is_basic(inst, dec)) return dec;
  }
  return std::nullopt;
}

std::vector<Violator> enumerate_violators(const Instance& inst, const OracleBudget& budget) {
  enforce(inst, budget);
  const int k = inst.m.rank();
  const int m = (int)inst.edge_ids.size();
  std::vector<unsigned> bad_masks;
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> f;
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1) f.push_back(inst.edge_ids[i]);
    std::vector<int> vs = verts_of(inst, f);
    std::vector<int> rf = roots_on(inst, vs);
    long long lhs = (long long)f.size() + (long long)rf.size();
    long long rhs = (long long)k * (long long)vs.size() - k + inst.m.rank(rf);
    if (lhs > rhs) bad_masks.push_back(mask);
  }
  std::vector<Violator> out;
  for (unsigned mask : bad_masks) {
    Violator v;
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1) v.edges.push_back(inst.edge_ids[i]);
    v.minimal = v.maximal = true;
    for (unsigned other : bad_masks) {
      if (other == mask) continue;
      if ((other & mask) == other) v.minimal = false;
      if ((other & mask) == mask) v.maximal = false;
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<std::vector<std::vector<int>>> violating_partition_exhaustive(
    const Instance& inst, const OracleBudget& budget) {
  enforce(inst, budget);
  const int k = inst.m.rank();
  const int n = (int)inst.verts.size();
  std::optional<std::vector<std::vector<int>>> found;
  for_each_partition(n, [&](const std::vector<int>& assign) {
    if (found) return;
    int classes = *std::max_element(assign.begin(), assign.end()) + 1;
    std::vector<std::vector<int>> parts(classes);
    std::unordered_map<int, int> cls;
    for (int i = 0; i < n; ++i) {
      parts[assign[i]].push_back(inst.verts[i]);
      cls[inst.verts[i]] = assign[i];
    }
    long long crossing = 0;
    for (int e : inst.edge_ids)
      if (cls.at(inst.edge(e).first) != cls.at(inst.edge(e).second)) ++crossing;
    long long rank_sum = 0;
    for (auto& p : parts) {
      std::sort(p.begin(), p.end());
      rank_sum += inst.m.rank(roots_on(inst, p));
    }
    if (crossing < (long long)k * classes - rank_sum) found = parts;
  });
  return found;
}

AxiomReport check_matroid_axioms(const MatroidHandle& m, const OracleBudget& budget) {
  const auto& g = m.ground();
  if ((int)g.size() > budget.max_ground) throw budget_error("ground set exceeds oracle budget");
  const int n = (int)g.size();
  std::vector<char> indep(1u << n);
  auto set_of = [&](unsigned mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) s.push_back(g[i]);
    return s;
  };
  for (unsigned mask = 0; mask < (1u << n); ++mask) indep[mask] = m.is_independent(set_of(mask));
  if (!indep[0]) return {false, "empty set dependent"};
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (!indep[mask]) continue;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1 && !indep[mask & ~(1u << i)])
        return {false, "hereditary axiom fails"};
  }
  for (unsigned a = 0; a < (1u << n); ++a) {
    if (!indep[a]) continue;
    for (unsigned b = 0; b < (1u << n); ++b) {
      if (!indep[b] || __builtin_popcount(a) <= __builtin_popcount(b)) continue;
      bool exchanged = false;
      for (int i = 0; i < n && !exchanged; ++i)
        if ((a >> i & 1) && !(b >> i & 1) && indep[b | (1u << i)]) exchanged = true;
      if (!exchanged) return {false, "exchange axiom fails"};
    }
  }
  // rank consistency: rank(X) equals the size of a largest independent subset
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    int best = 0;
    for (unsigned sub = mask;; sub = (sub - 1) & mask) {
      if (indep[sub]) best = std::max(best, __builtin_popcount(sub));
      if (sub == 0) break;
    }
    if (m.rank(set_of(mask)) != best) return {false, "rank disagrees with independence table"};
  }
  return {true, ""};
}

}  // namespace mtd::oracles
