// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Everything here is generated; no data files are needed.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "mtd/decompose.hpp"
#include "mtd/io.hpp"
#include "mtd/oracles.hpp"
#include "mtd/rigidity.hpp"

using namespace mtd;

namespace {

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::vector<int> iota_elems(int t) {
  std::vector<int> v(t);
  for (int i = 0; i < t; ++i) v[i] = i;
  return v;
}

Instance make_instance(int n, const std::vector<std::pair<int, int>>& edges,
                       const std::vector<int>& root_vertices, MatroidHandle m) {
  GraphWithRoots g;
  for (int i = 0; i < n; ++i) g.add_vertex();
  for (auto [u, v] : edges) g.add_edge(u, v);
  for (int v : root_vertices) g.add_root(v);
  return Instance::from_graph(g, std::move(m));
}

bool connected(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n <= 1) return true;
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [u, v] : edges) parent[find(u)] = find(v);
  for (int i = 1; i < n; ++i)
    if (find(i) != find(0)) return false;
  return true;
}

std::vector<std::pair<int, int>> random_spanning_tree(std::mt19937& rng, int n) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::pair<int, int>> tree;
  for (int i = 1; i < n; ++i) tree.push_back({order[(int)(rng() % i)], order[i]});
  return tree;
}

// ---------------------------------------------------------------------------

bool criterion1(std::string& detail) {
  struct Shared {
    std::atomic<long long> instances{0};
    std::atomic<bool> ok{true};
    std::string first_failure;
    std::mutex mu;
  } shared;

  auto run_graph = [&](int n, const std::vector<std::pair<int, int>>& edges) {
    const std::pair<int, int> aux_catalog[5] = {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {0, 0}};
    for (int t = 0; t <= 3 && shared.ok; ++t) {
      std::vector<int> placement(t, 0);
      for (;;) {
        int graphic_variants = 1;
        for (int i = 0; i < t; ++i) graphic_variants *= 5;
        for (int fam = 0; fam < 2 + (t ? graphic_variants : 0) && shared.ok; ++fam) {
          MatroidHandle m = MatroidHandle::free_matroid(iota_elems(t));
          if (fam == 1) {
            m = MatroidHandle::uniform(iota_elems(t), 2);
          } else if (fam >= 2) {
            std::unordered_map<int, std::pair<int, int>> aux;
            int code = fam - 2;
            for (int i = 0; i < t; ++i) {
              aux[i] = aux_catalog[code % 5];
              code /= 5;
            }
            m = MatroidHandle::graphic(iota_elems(t), std::move(aux));
          }
          if (m.rank() == 0 && !edges.empty()) continue;
          Instance inst = make_instance(n, edges, placement, m);
          bool cond = check_conditions(inst).ok();
          oracles::OracleBudget b;
          auto found = oracles::exhaustive_basic_decomposition(inst, b);
          bool mismatch = cond != found.has_value();
          bool invalid = false;
          if (cond && !mismatch) {
            auto dec = basic_decomposition(inst);
            invalid = !validate(inst, dec).ok || !oracles::decomposition_is_basic(inst, dec);
          }
          if (mismatch || invalid) {
            std::lock_guard<std::mutex> lock(shared.mu);
            if (shared.ok) {
              std::ostringstream ss;
              ss << (mismatch ? "verdict mismatch" : "invalid decomposition") << " at n=" << n
                 << " |E|=" << edges.size() << " t=" << t << " fam=" << fam;
              shared.first_failure = ss.str();
              shared.ok = false;
            }
          }
          ++shared.instances;
        }
        int i = 0;
        while (i < t && placement[i] == n - 1) placement[i++] = 0;
        if (i == t) break;
        ++placement[i];
      }
    }
  };

  std::vector<std::pair<int, std::vector<std::pair<int, int>>>> graphs;
  for (int n = 1; n <= 4; ++n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
    std::function<void(size_t, std::vector<std::pair<int, int>>&)> rec =
        [&](size_t from, std::vector<std::pair<int, int>>& edges) {
          if (connected(n, edges)) graphs.push_back({n, edges});
          if (edges.size() == 5) return;
          for (size_t p = from; p < pairs.size(); ++p) {
            edges.push_back(pairs[p]);
            rec(p, edges);
            edges.pop_back();
          }
        };
    std::vector<std::pair<int, int>> edges;
    rec(0, edges);
  }

  const int jobs = std::max(2u, std::thread::hardware_concurrency());
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j)
    pool.emplace_back([&] {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= graphs.size() || !shared.ok) break;
        run_graph(graphs[i].first, graphs[i].second);
      }
    });
  for (auto& th : pool) th.join();

  std::ostringstream ss;
  ss << shared.instances.load() << " instances across " << graphs.size() << " graphs";
  if (!shared.ok) ss << "; " << shared.first_failure;
  detail = ss.str();
  return shared.ok;
}

// ---------------------------------------------------------------------------

bool criterion2(std::string& detail) {
  std::mt19937 rng(20260809);
  int done = 0;
  for (int trial = 0; done < 500 && trial < 10000; ++trial) {
    int n = 2 + (int)(rng() % 4);
    int m = (int)(rng() % 8);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < m; ++i) {
      int u = (int)(rng() % n), v = (int)(rng() % n);
      if (u == v) v = (v + 1) % n;
      edges.push_back({u, v});
    }
    int t = (int)(rng() % 5);
    std::vector<int> rv;
    for (int i = 0; i < t; ++i) rv.push_back((int)(rng() % n));
    MatroidHandle mat = [&] {
      switch (rng() % 3) {
        case 0: return MatroidHandle::free_matroid(iota_elems(t));
        case 1: return MatroidHandle::uniform(iota_elems(t), 1 + (int)(rng() % 3));
        default: {
          std::unordered_map<int, std::pair<int, int>> aux;
          for (int i = 0; i < t; ++i) aux[i] = {(int)(rng() % 3), (int)(rng() % 3)};
          return MatroidHandle::graphic(iota_elems(t), std::move(aux));
        }
      }
    }();
    Instance inst = make_instance(n, edges, rv, mat);
    bool c1 = true;
    for (int v = 0; v < n; ++v) {
      std::vector<int> at;
      for (const Root& r : inst.roots)
        if (r.vertex == v) at.push_back(r.elem);
      c1 = c1 && inst.m.is_independent(at) && (int)at.size() <= std::max(1, inst.m.rank());
    }
    if (!c1) continue;
    int k = std::max(inst.m.rank(), 1 + (int)(rng() % 3));
    std::vector<int> f;
    for (int e : inst.edge_ids)
      if (rng() % 2) f.push_back(e);
    for (const auto& query : {inst.edge_ids, f}) {
      auto oracle = oracles::rank_by_partitions(inst, query, {}, k);
      int fast = count_rank(inst, query, k);
      if (fast != oracle.value) {
        std::ostringstream ss;
        ss << "disagreement at trial " << trial << ": greedy " << fast << " vs partitions "
           << oracle.value;
        detail = ss.str();
        return false;
      }
    }
    ++done;
  }
  detail = std::to_string(done) + " instances, three computations each";
  return done == 500;
}

// ---------------------------------------------------------------------------

bool criterion3(std::string& detail) {
  auto complete = [](int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) e.push_back({i, j});
    return e;
  };
  auto spanning_tree_parts = [](const Instance& inst, const Decomposition& dec) {
    for (const auto& p : dec.parts) {
      if (p.edges.size() + 1 != inst.verts.size()) return false;
      std::set<int> vs;
      for (int e : p.edges) {
        vs.insert(inst.edge(e).first);
        vs.insert(inst.edge(e).second);
      }
      if (vs.size() != inst.verts.size()) return false;
    }
    return true;
  };

  for (auto [n, k] : {std::pair<int, int>{4, 2}, {6, 3}}) {
    std::vector<int> roots(k, 0);
    Instance inst = make_instance(n, complete(n), roots, MatroidHandle::free_matroid(iota_elems(k)));
    auto dec = basic_decomposition(inst);
    if (!validate(inst, dec).ok || !spanning_tree_parts(inst, dec)) {
      detail = "K" + std::to_string(n) + " did not split into spanning trees";
      return false;
    }
    for (size_t skip = 0; skip < inst.edge_ids.size(); ++skip) {
      Instance cut = inst;
      cut.edge_ids.clear();
      for (size_t i = 0; i < inst.edge_ids.size(); ++i)
        if (i != skip) cut.edge_ids.push_back(inst.edge_ids[i]);
      auto rep = check_conditions(cut);
      if (rep.ok() || rep.c3_ok) {
        detail = "edge deletion kept the instance feasible";
        return false;
      }
    }
  }
  detail = "K4 into 2 trees, K6 into 3 trees, every edge deletion rejected via the global count";
  return true;
}

// ---------------------------------------------------------------------------

bool criterion4(std::string& detail) {
  std::mt19937 rng(44);
  int done = 0;
  for (int trial = 0; done < 200 && trial < 4000; ++trial) {
    int n = 2 + (int)(rng() % 4);
    int m = (int)(rng() % 9);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < m; ++i) {
      int u = (int)(rng() % n), v = (int)(rng() % n);
      if (u == v) v = (v + 1) % n;
      edges.push_back({u, v});
    }
    int k = 1 + (int)(rng() % 3);
    std::vector<int> roots(k, (int)(rng() % n));
    Instance inst = make_instance(n, edges, roots, MatroidHandle::free_matroid(iota_elems(k)));

    bool classical = true;
    oracles::for_each_partition(n, [&](const std::vector<int>& assign) {
      if (!classical) return;
      int classes = 0;
      for (int a : assign) classes = std::max(classes, a + 1);
      long long crossing = 0;
      for (auto [u, v] : edges)
        if (assign[u] != assign[v]) ++crossing;
      if (crossing < (long long)k * classes - k) classical = false;
    });

    bool packed;
    try {
      auto dec = rooted_component_packing(inst);
      packed = true;
      if (!validate(inst, dec).ok) {
        detail = "packing output failed validation at trial " + std::to_string(trial);
        return false;
      }
    } catch (const infeasible_error&) {
      packed = false;
    }
    if (packed != classical) {
      detail = "packing verdict disagrees with the partition condition at trial " +
               std::to_string(trial);
      return false;
    }
    ++done;
  }
  detail = std::to_string(done) + " random graphs, verdicts and outputs verified";
  return done == 200;
}

// ---------------------------------------------------------------------------

bool criterion5(std::string& detail) {
  std::mt19937 rng(55);
  auto run_dim = [&](int d, int wanted) -> std::optional<std::string> {
    const int D = screw_dim(d);
    int done = 0, attempts = 0;
    while (done < wanted && ++attempts < wanted * 80) {
      int n = 2 + (int)(rng() % 5);
      std::vector<std::pair<int, int>> edges;
      for (int i = 0; i < D; ++i) {
        auto tree = random_spanning_tree(rng, n);
        edges.insert(edges.end(), tree.begin(), tree.end());
      }
      int trade = (int)(rng() % 3);
      for (int i = 0; i < trade && !edges.empty(); ++i)
        edges.erase(edges.begin() + (size_t)(rng() % edges.size()));

      FrameworkModel fm;
      fm.kind = FrameworkKind::body_bar_bar;
      fm.d = d;
      for (int i = 0; i < n; ++i) fm.graph.add_vertex();
      for (auto [u, v] : edges) fm.graph.add_edge(u, v);
      const int t = D * n - (int)edges.size();
      if (t < 0) continue;
      std::vector<int> root_count(n, 0);
      bool ok_roots = true;
      for (int i = 0; i < t; ++i) {
        int v = (int)(rng() % n);
        int guard = 0;
        while (root_count[v] >= D && guard++ < 2 * n) v = (v + 1) % n;
        if (root_count[v] >= D) {
          ok_roots = false;
          break;
        }
        ++root_count[v];
        Root& r = fm.graph.add_root(v);
        VecQ a(d + 1), b(d + 1);
        for (auto& x : a) x = q((long)(rng() % 19) - 9, 1 + (long)(rng() % 3));
        for (auto& x : b) x = q((long)(rng() % 19) - 9, 1 + (long)(rng() % 3));
        fm.boundary_bars[r.elem] = Extensor2{d, wedge_pair(a, b)};
      }
      if (!ok_roots) continue;
      ConditionReport rep;
      try {
        rep = check_body_bar_bar(fm);
      } catch (const input_error&) {
        continue;
      }
      if (!rep.ok()) continue;

      FrameworkModel rz = realize_body_bar(fm);
      MatrixQ full = rigidity_matrix(rz);
      auto cert = certify_rank(full);
      if (cert.rank != (long long)D * n) return "realized rank is not D|V|";
      if ((long long)full.rows != (long long)D * n) return "row count is not D|V|";
      for (size_t skip = 0; skip < full.rows; ++skip) {
        MatrixQ sub(full.rows - 1, full.cols);
        size_t w = 0;
        for (size_t r = 0; r < full.rows; ++r)
          if (r != skip) sub[w++] = full[r];
        if ((long long)rank(sub) != (long long)D * n - 1)
          return "a row deletion did not reduce the rank";
      }
      ++done;
    }
    if (done < wanted) return "could not generate enough feasible instances";
    return std::nullopt;
  };
  if (auto err = run_dim(2, 100)) {
    detail = "d=2: " + *err;
    return false;
  }
  if (auto err = run_dim(3, 50)) {
    detail = "d=3: " + *err;
    return false;
  }
  detail = "100 instances at d=2 and 50 at d=3; exact ranks and per-row minimality verified";
  return true;
}

// ---------------------------------------------------------------------------

bool criterion6(std::string& detail) {
  auto one_body = [&](int d, const std::vector<VecQ>& pins) {
    FrameworkModel fm;
    fm.kind = FrameworkKind::body_bar_pin;
    fm.d = d;
    fm.graph.add_vertex();
    for (const VecQ& p : pins) fm.pins[fm.graph.add_root(0).elem] = p;
    return fm;
  };
  auto kernel_dim = [&](const FrameworkModel& fm) {
    return certify_rank(rigidity_matrix(reduce_pins_to_bars(fm))).kernel_dim;
  };
  struct Case {
    FrameworkModel fm;
    long long expect_kernel;
    bool expect_rigid;
  };
  std::vector<Case> cases;
  cases.push_back({one_body(2, {{q(2), q(3)}}), 1, false});
  cases.push_back({one_body(2, {{q(0), q(0)}, {q(5), q(1)}}), 0, true});
  cases.push_back(
      {one_body(3, {{q(0), q(0), q(0)}, {q(1), q(0), q(0)}, {q(2), q(0), q(0)}}), 1, false});
  for (size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    if (kernel_dim(c.fm) != c.expect_kernel) {
      detail = "kernel dimension mismatch in case " + std::to_string(i);
      return false;
    }
    if (check_body_bar_pin(c.fm).ok() != c.expect_rigid) {
      detail = "checker verdict mismatch in case " + std::to_string(i);
      return false;
    }
    auto part = body_bar_pin_violating_partition(c.fm);
    if (part.has_value() == c.expect_rigid) {
      detail = "partition formula disagrees in case " + std::to_string(i);
      return false;
    }
  }
  detail = "one pin (kernel 1), two pins (kernel 0), three collinear pins at d=3 (kernel 1)";
  return true;
}

// ---------------------------------------------------------------------------

bool criterion7(std::string& detail) {
  std::mt19937 rng(77);
  int done = 0, attempts = 0, checked_verdicts = 0;
  while (done < 50 && ++attempts < 40000) {
    int n = 1 + (int)(rng() % 6);
    int m = n == 1 ? 0 : (int)(rng() % std::max(1, 2 * n - 2));
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < m; ++i) {
      int u = (int)(rng() % n), v = (int)(rng() % n);
      if (u == v) v = (v + 1) % n;
      edges.push_back({u, v});
    }
    int t = 2 * n - m;
    if (t < 0 || t > 2 * n) continue;
    FrameworkModel fm;
    fm.kind = FrameworkKind::bar_joint_bar;
    fm.d = 2;
    for (int i = 0; i < n; ++i) fm.graph.add_vertex();
    for (auto [u, v] : edges) fm.graph.add_edge(u, v);
    std::vector<int> root_count(n, 0);
    std::vector<Extensor2> lines;
    bool ok = true;
    for (int i = 0; i < t && ok; ++i) {
      int v = (int)(rng() % n);
      int guard = 0;
      while (root_count[v] >= 2 && guard++ < 2 * n) v = (v + 1) % n;
      if (root_count[v] >= 2) {
        ok = false;
        break;
      }
      ++root_count[v];
      Extensor2 line;
      int tries = 0;
      for (;;) {
        VecQ a = {q((long)(rng() % 19) - 9), q((long)(rng() % 19) - 9), q(1)};
        VecQ b = {q((long)(rng() % 19) - 9), q((long)(rng() % 19) - 9), q(1)};
        line = Extensor2{2, wedge_pair(a, b)};
        bool zero = line.coords[0] == 0 && line.coords[1] == 0 && line.coords[2] == 0;
        if (!zero) {
          std::vector<Extensor2> with = lines;
          with.push_back(line);
          if (lines_in_general_position(with)) break;
        }
        if (++tries >= 60) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
      lines.push_back(line);
      fm.boundary_bars[fm.graph.add_root(v).elem] = line;
    }
    if (!ok) continue;

    ConditionReport rep = check_bar_joint_bar(fm);

    Instance inst = Instance::from_graph(fm.graph, [&] {
      std::vector<int> ground;
      std::unordered_map<int, VecQ> vectors;
      for (const Root& r : fm.graph.roots) {
        ground.push_back(r.elem);
        vectors[r.elem] = fm.boundary_bars.at(r.elem).coords;
      }
      return MatroidHandle::linear(std::move(ground), std::move(vectors));
    }());
    bool brute = true;
    for (size_t mask = 1; mask < (size_t(1) << m) && brute; ++mask) {
      std::vector<int> f;
      for (int i = 0; i < m; ++i)
        if (mask >> i & 1) f.push_back(i);
      brute = count_slack(inst, 2, 3, f) >= 0;
    }
    bool per_vertex = true;
    for (int v = 0; v < n; ++v) {
      std::vector<int> at;
      for (const Root& r : fm.graph.roots)
        if (r.vertex == v) at.push_back(r.elem);
      per_vertex = per_vertex && (int)at.size() <= 2 && inst.m.is_independent(at);
    }
    bool expected = brute && per_vertex && (long long)m + t == 2ll * n;
    if (rep.ok() != expected) {
      detail = "checker disagrees with brute force at attempt " + std::to_string(attempts);
      return false;
    }
    ++checked_verdicts;
    if (!rep.ok()) continue;

    FrameworkModel rz = realize_bar_joint_bar(fm);
    std::set<VecQ> pts;
    for (auto& [v, p] : rz.placements) pts.insert(p);
    if ((int)pts.size() != n) {
      detail = "realized placement is not injective";
      return false;
    }
    if (certify_rank(rigidity_matrix(rz)).rank != 2ll * n) {
      detail = "realized derived matrix rank is not 2|V|";
      return false;
    }
    ++done;
  }
  std::ostringstream ss;
  ss << done << " feasible instances realized, " << checked_verdicts << " verdicts cross-checked";
  detail = ss.str();
  return done == 50;
}

// ---------------------------------------------------------------------------

bool criterion8(std::string& detail) {
  {
    GraphWithRoots g;
    g.add_vertex();
    g.add_vertex();
    g.add_vertex();
    g.add_edge(0, 1);
    g.add_edge(0, 2);
    if (!check_pinned_bar_joint(g, {1, 2}).ok()) {
      detail = "two-pin instance rejected";
      return false;
    }
    FrameworkModel fm;
    fm.kind = FrameworkKind::bar_joint_pin;
    fm.d = 2;
    fm.graph = g;
    fm.pinned = {1, 2};
    fm.placements[0] = {q(0), q(2), q(1)};
    fm.placements[1] = {q(-1), q(0), q(1)};
    fm.placements[2] = {q(3), q(0), q(1)};
    if (certify_rank(pinned_rigidity_matrix(fm)).rank != 2) {
      detail = "two-pin instance did not certify rank 2";
      return false;
    }
  }
  {
    FrameworkModel fm;
    fm.kind = FrameworkKind::bar_joint_slider;
    fm.d = 2;
    for (int i = 0; i < 3; ++i) fm.graph.add_vertex();
    fm.graph.add_edge(0, 1);
    fm.graph.add_edge(1, 2);
    fm.graph.add_edge(0, 2);
    for (int i = 0; i < 3; ++i) fm.sliders[fm.graph.add_root(i).elem] = {q(2), q(0)};
    auto rep = check_bar_slider(fm);
    if (rep.ok() || rep.violating_edges.size() != 3) {
      detail = "equal-direction triangle did not fail with F = E";
      return false;
    }
    fm.sliders[1] = {q(0), q(1)};
    if (!check_bar_slider(fm).ok()) {
      detail = "two-direction triangle rejected";
      return false;
    }
  }
  {
    std::mt19937 rng(88);
    int done = 0, attempts = 0;
    while (done < 100 && ++attempts < 8000) {
      int n = 1 + (int)(rng() % 4);
      int m = n == 1 ? 0 : (int)(rng() % (2 * n + 1));
      int t = 2 * n - m;
      if (t < 0) continue;
      FrameworkModel fm;
      fm.kind = FrameworkKind::bar_joint_slider;
      fm.d = 2;
      for (int i = 0; i < n; ++i) fm.graph.add_vertex();
      for (int i = 0; i < m; ++i) {
        int u = (int)(rng() % n), v = (int)(rng() % n);
        if (u == v) v = (v + 1) % n;
        fm.graph.add_edge(u, v);
      }
      std::set<VecQ> seen;
      bool ok = true;
      for (int i = 0; i < t && ok; ++i) {
        VecQ dir;
        int guard = 0;
        do {
          dir = {q((long)(rng() % 11) - 5), q((long)(rng() % 11) - 5)};
          if (dir[0] == 0 && dir[1] == 0) dir[0] = 1;
          ok = ++guard < 60;
        } while (ok && !seen.insert(canonical_homogeneous(dir)).second);
        if (ok) fm.sliders[fm.graph.add_root((int)(rng() % n)).elem] = dir;
      }
      if (!ok) continue;
      FrameworkModel pinned = slider_to_pinned(fm);
      if (check_bar_slider(fm).ok() != check_pinned_bar_joint(pinned.graph, pinned.pinned).ok()) {
        detail = "conversion changed the verdict at attempt " + std::to_string(attempts);
        return false;
      }
      ++done;
    }
    if (done != 100) {
      detail = "could not generate 100 conversion instances";
      return false;
    }
  }
  detail = "pin and slider spot checks plus 100 verdict-preserving conversions";
  return true;
}

// ---------------------------------------------------------------------------

bool criterion9(std::string& detail) {
  std::mt19937 rng(99);
  const int n = 1000, k = 6;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < k; ++i) {
    auto tree = random_spanning_tree(rng, n);
    edges.insert(edges.end(), tree.begin(), tree.end());
  }
  std::vector<int> roots;
  for (int i = 0; i < k; ++i) roots.push_back((int)(rng() % n));
  Instance inst = make_instance(n, edges, roots, MatroidHandle::free_matroid(iota_elems(k)));

  auto t0 = std::chrono::steady_clock::now();
  auto rep = check_conditions(inst, (int)std::max(2u, std::thread::hardware_concurrency()));
  if (!rep.ok()) {
    detail = "generated instance unexpectedly infeasible";
    return false;
  }
  auto dec = basic_decomposition(inst);
  auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
          .count();
  if (!validate(inst, dec).ok) {
    detail = "large decomposition failed validation";
    return false;
  }
  detail = "|V|=1000, k=6: check + decompose + validate in " + std::to_string(ms) + " ms";
  return ms < 120000;
}

// ---------------------------------------------------------------------------

bool criterion10(std::string& detail) {
  std::mt19937 rng(1010);
  long long pairs = 0;
  for (int trial = 0; trial < 160; ++trial) {
    int n = 2 + (int)(rng() % 3);
    int m = 1 + (int)(rng() % 6);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < m; ++i) {
      int u = (int)(rng() % n), v = (int)(rng() % n);
      if (u == v) v = (v + 1) % n;
      edges.push_back({u, v});
    }
    int t = (int)(rng() % 4);
    std::vector<int> rv;
    for (int i = 0; i < t; ++i) rv.push_back((int)(rng() % n));
    MatroidHandle mat = rng() % 2 ? MatroidHandle::free_matroid(iota_elems(t))
                                  : MatroidHandle::uniform(iota_elems(t), 2);
    Instance inst = make_instance(n, edges, rv, mat);
    bool c1 = true;
    for (int v = 0; v < n; ++v) {
      std::vector<int> at;
      for (const Root& r : inst.roots)
        if (r.vertex == v) at.push_back(r.elem);
      c1 = c1 && inst.m.is_independent(at);
    }
    if (!c1) continue;
    const int c = std::max(1, inst.m.rank());
    auto fval = [&](unsigned mask) -> std::optional<long long> {
      std::vector<int> f;
      for (int i = 0; i < m; ++i)
        if (mask >> i & 1) f.push_back(i);
      if (f.empty()) return std::nullopt;
      return f_value(inst, c, f);
    };
    auto verts_of_mask = [&](unsigned mask) {
      std::set<int> vs;
      for (int i = 0; i < m; ++i)
        if (mask >> i & 1) {
          vs.insert(edges[i].first);
          vs.insert(edges[i].second);
        }
      return vs;
    };
    for (unsigned a = 1; a < (1u << m); ++a)
      for (unsigned b = 1; b < (1u << m); ++b) {
        auto fa = fval(a), fb = fval(b), fu = fval(a | b), fi = fval(a & b);
        if ((a & b) == a && a != b && *fa > *fb) {
          detail = "monotonicity violated";
          return false;
        }
        if (fi && *fa + *fb < *fu + *fi) {
          detail = "submodularity violated";
          return false;
        }
        if (!fi) {
          auto va = verts_of_mask(a), vb = verts_of_mask(b);
          bool meets = false;
          for (int v : va) meets = meets || vb.count(v);
          if (meets && *fa + *fb < *fu) {
            detail = "locally intersecting inequality violated";
            return false;
          }
        }
        ++pairs;
      }
  }
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + (int)(rng() % 3);
    int m = 1 + (int)(rng() % 5);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < m; ++i) {
      int u = (int)(rng() % n), v = (int)(rng() % n);
      if (u == v) v = (v + 1) % n;
      edges.push_back({u, v});
    }
    int rc = (int)(rng() % 4);
    std::vector<int> rv;
    std::unordered_map<int, int> colors;
    for (int i = 0; i < rc; ++i) {
      rv.push_back((int)(rng() % n));
      colors[i] = (int)(rng() % 2);
    }
    Instance inst = make_instance(n, edges, rv, MatroidHandle::colored(iota_elems(rc), colors, 2));
    bool c1 = true;
    for (int v = 0; v < n; ++v) {
      std::vector<int> at;
      for (const Root& r : inst.roots)
        if (r.vertex == v) at.push_back(r.elem);
      c1 = c1 && inst.m.is_independent(at);
    }
    if (!c1) continue;
    auto hf = [&](unsigned mask) -> long long {
      std::vector<int> f;
      for (int i = 0; i < m; ++i)
        if (mask >> i & 1) f.push_back(i);
      std::set<int> vs;
      for (int e : f) {
        vs.insert(edges[e].first);
        vs.insert(edges[e].second);
      }
      return std::min((long long)f_value(inst, 2, f), 2ll * (long long)vs.size() - 3);
    };
    for (unsigned a = 1; a < (1u << m); ++a)
      for (unsigned b = 1; b < (1u << m); ++b) {
        if ((a & b) == 0) continue;
        if (hf(a) + hf(b) < hf(a | b) + hf(a & b)) {
          detail = "capped slider function not submodular";
          return false;
        }
        ++pairs;
      }
  }
  detail = std::to_string(pairs) + " subset pairs checked";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "theorem-equivalence sweep", criterion1},
      {2, "rank-formula triple agreement", criterion2},
      {3, "Nash-Williams specialization", criterion3},
      {4, "tree-packing dual specialization", criterion4},
      {5, "body-bar realization and minimality", criterion5},
      {6, "pinned body-bar kernel formulas", criterion6},
      {7, "bar-joint bar-boundary realization", criterion7},
      {8, "pinned bar-joint and slider checks", criterion8},
      {9, "large-instance timing", criterion9},
      {10, "submodularity suites", criterion10},
  };

  bool all_ok = true;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    std::string detail;
    bool ok = false;
    auto t0 = std::chrono::steady_clock::now();
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
            .count();
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.name << " ("
              << detail << ") [" << ms << " ms]" << std::endl;
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
