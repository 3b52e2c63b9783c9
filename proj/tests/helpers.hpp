#pragma once

#include <random>
#include <set>

#include "mtd/count.hpp"
#include "mtd/decompose.hpp"
#include "mtd/oracles.hpp"

namespace testutil {

inline mtd::GraphWithRoots make_graph(int n, const std::vector<std::pair<int, int>>& edges,
                                      const std::vector<int>& root_vertices) {
  mtd::GraphWithRoots g;
  for (int i = 0; i < n; ++i) g.add_vertex();
  for (auto [u, v] : edges) g.add_edge(u, v);
  for (int v : root_vertices) g.add_root(v);
  return g;
}

inline mtd::Instance make_instance(int n, const std::vector<std::pair<int, int>>& edges,
                                   const std::vector<int>& root_vertices, mtd::MatroidHandle m) {
  return mtd::Instance::from_graph(make_graph(n, edges, root_vertices), std::move(m));
}

inline std::vector<int> iota_elems(int t) {
  std::vector<int> v(t);
  for (int i = 0; i < t; ++i) v[i] = i;
  return v;
}

// Reference matroid as an explicit independence table; modifiers are applied
// by their set-theoretic definitions. Test-only ground truth.
struct TableMatroid {
  std::vector<int> ground;
  std::set<std::set<int>> indep;

  static TableMatroid from_handle(const mtd::MatroidHandle& m) {
    TableMatroid t;
    t.ground = m.ground();
    const int n = (int)t.ground.size();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      std::vector<int> sub;
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1) sub.push_back(t.ground[i]);
      if (m.is_independent(sub)) t.indep.insert(std::set<int>(sub.begin(), sub.end()));
    }
    return t;
  }

  bool is_independent(const std::vector<int>& s) const {
    return indep.count(std::set<int>(s.begin(), s.end())) != 0;
  }

  int rank(const std::set<int>& s) const {
    int best = 0;
    for (const auto& i : indep) {
      if (!std::includes(s.begin(), s.end(), i.begin(), i.end())) continue;
      best = std::max(best, (int)i.size());
    }
    return best;
  }
  int rank_all() const {
    std::set<int> s(ground.begin(), ground.end());
    return rank(s);
  }

  TableMatroid apply(const mtd::Modifier& mod) const {
    TableMatroid out;
    switch (mod.op) {
      case mtd::ModifierOp::truncate: {
        out.ground = ground;
        int cap = rank_all() - 1;
        for (const auto& i : indep)
          if ((int)i.size() <= cap) out.indep.insert(i);
        if (cap < 0) out.indep.insert({});
        break;
      }
      case mtd::ModifierOp::restrict: {
        std::set<int> keep(mod.elements.begin(), mod.elements.end());
        for (int g : ground)
          if (keep.count(g)) out.ground.push_back(g);
        for (const auto& i : indep)
          if (std::includes(keep.begin(), keep.end(), i.begin(), i.end())) out.indep.insert(i);
        break;
      }
      case mtd::ModifierOp::remove: {
        std::set<int> drop(mod.elements.begin(), mod.elements.end());
        for (int g : ground)
          if (!drop.count(g)) out.ground.push_back(g);
        for (const auto& i : indep) {
          bool ok = true;
          for (int x : i) ok = ok && !drop.count(x);
          if (ok) out.indep.insert(i);
        }
        break;
      }
      case mtd::ModifierOp::add_parallel: {
        out.ground = ground;
        out.ground.push_back(mod.fresh);
        for (const auto& i : indep) {
          out.indep.insert(i);
          // sets using the copy instead of the base
          if (i.count(mod.base)) {
            std::set<int> j = i;
            j.erase(mod.base);
            j.insert(mod.fresh);
            out.indep.insert(j);
          }
        }
        // sets not containing the base may add the copy iff base extends them
        for (const auto& i : indep) {
          if (i.count(mod.base) || i.count(mod.fresh)) continue;
          std::set<int> with = i;
          with.insert(mod.base);
          if (indep.count(with)) {
            std::set<int> j = i;
            j.insert(mod.fresh);
            out.indep.insert(j);
          }
        }
        break;
      }
      case mtd::ModifierOp::add_coloops: {
        out.ground = ground;
        for (int c : mod.elements) out.ground.push_back(c);
        std::set<int> cs(mod.elements.begin(), mod.elements.end());
        for (const auto& i : indep) {
          // every subset of the coloops can be added freely
          std::vector<int> cl(cs.begin(), cs.end());
          for (unsigned mask = 0; mask < (1u << cl.size()); ++mask) {
            std::set<int> j = i;
            for (size_t b = 0; b < cl.size(); ++b)
              if (mask >> b & 1) j.insert(cl[b]);
            out.indep.insert(j);
          }
        }
        break;
      }
    }
    return out;
  }
};

// exact rank of rational vectors via minor determinants (independent of the
// production elimination)
inline int minor_rank(const std::vector<mtd::VecQ>& vecs) {
  const int m = (int)vecs.size();
  if (m == 0) return 0;
  const int n = (int)vecs[0].size();
  std::function<mtd::Rational(std::vector<int>, std::vector<int>)> det =
      [&](std::vector<int> rows, std::vector<int> cols) -> mtd::Rational {
    if (rows.size() == 1) return vecs[rows[0]][cols[0]];
    mtd::Rational d = 0;
    std::vector<int> subrows(rows.begin() + 1, rows.end());
    for (size_t j = 0; j < cols.size(); ++j) {
      std::vector<int> subcols;
      for (size_t l = 0; l < cols.size(); ++l)
        if (l != j) subcols.push_back(cols[l]);
      mtd::Rational term = vecs[rows[0]][cols[j]] * det(subrows, subcols);
      d += (j % 2 == 0) ? term : -term;
    }
    return d;
  };
  for (int size = std::min(m, n); size >= 1; --size) {
    std::vector<int> rows(size), cols(size);
    std::function<bool(int, int)> choose_rows = [&](int idx, int from) -> bool {
      if (idx == size) {
        std::function<bool(int, int)> choose_cols = [&](int cidx, int cfrom) -> bool {
          if (cidx == size) return det(rows, cols) != 0;
          for (int c = cfrom; c < n; ++c) {
            cols[cidx] = c;
            if (choose_cols(cidx + 1, c + 1)) return true;
          }
          return false;
        };
        return choose_cols(0, 0);
      }
      for (int r = from; r < m; ++r) {
        rows[idx] = r;
        if (choose_rows(idx + 1, r + 1)) return true;
      }
      return false;
    };
    if (choose_rows(0, 0)) return size;
  }
  return 0;
}

}  // namespace testutil
