#include "doctest.h"
#include "helpers.hpp"
#include "mtd/count.hpp"

using namespace mtd;
using testutil::make_instance;

namespace {

// K4 on vertices 0..3 (edge order fixed)
const std::vector<std::pair<int, int>> k4_edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

Instance k4_two_roots() {
  return make_instance(4, k4_edges, {0, 0}, MatroidHandle::free_matroid({0, 1}));
}

Instance k4_parallel_violating() {
  auto edges = k4_edges;
  edges.push_back({2, 3});  // parallel copy
  return make_instance(4, edges, {0, 0}, MatroidHandle::free_matroid({0, 1}));
}

// brute force: does the count condition hold for every nonempty F?
bool count_holds_brute(const Instance& inst, int k, int ell) {
  const size_t m = inst.edge_ids.size();
  for (size_t mask = 1; mask < (size_t(1) << m); ++mask) {
    std::vector<int> f;
    for (size_t i = 0; i < m; ++i)
      if (mask >> i & 1) f.push_back(inst.edge_ids[i]);
    if (count_slack(inst, k, ell, f) < 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("f_value formula") {
  const int k = 2;
  {
    Instance inst = make_instance(2, {{0, 1}}, {}, MatroidHandle::free_matroid({}));
    CHECK(f_value(inst, k, {0}) == k);
    CHECK_THROWS_AS(f_value(inst, k, {}), input_error);
  }
  {
    Instance inst = make_instance(2, {{0, 1}}, {0}, MatroidHandle::free_matroid({0}));
    CHECK(f_value(inst, k, {0}) == k);  // |R_F| - r = 0 for an independent root
  }
  {
    // triangle with two parallel roots (rank 1 together) on its vertices
    auto m = MatroidHandle::uniform({0}, 1).add_parallel(0, 1);
    Instance inst = make_instance(3, {{0, 1}, {1, 2}, {0, 2}}, {0, 1}, m);
    CHECK(f_value(inst, 2, {0, 1, 2}) == 3);  // 2*2 - (2-1)
  }
}

TEST_CASE("f is monotone and submodular under C1") {
  // instances with C1 and c >= r_M
  std::vector<Instance> insts;
  insts.push_back(k4_two_roots());
  insts.push_back(make_instance(3, {{0, 1}, {1, 2}, {0, 2}, {0, 1}}, {0, 1, 2},
                                MatroidHandle::uniform({0, 1, 2}, 2)));
  {
    std::unordered_map<int, std::pair<int, int>> aux = {{0, {0, 1}}, {1, {1, 2}}, {2, {0, 2}}};
    insts.push_back(make_instance(3, {{0, 1}, {1, 2}, {0, 2}}, {0, 1, 2},
                                  MatroidHandle::graphic({0, 1, 2}, std::move(aux))));
  }
  for (const Instance& inst : insts) {
    const int c = inst.m.rank();
    const size_t m = inst.edge_ids.size();
    auto fval = [&](size_t mask) {
      std::vector<int> f;
      for (size_t i = 0; i < m; ++i)
        if (mask >> i & 1) f.push_back(inst.edge_ids[i]);
      return f.empty() ? std::optional<long long>{} : std::optional<long long>{f_value(inst, c, f)};
    };
    for (size_t a = 1; a < (size_t(1) << m); ++a)
      for (size_t b = 1; b < (size_t(1) << m); ++b) {
        if ((a & b) == a && a != b) CHECK(*fval(a) <= *fval(b));  // monotone
        auto u = fval(a | b), i = fval(a & b);
        if (i) CHECK(*fval(a) + *fval(b) >= *u + *i);  // submodular
        // locally intersecting variant: shared vertices suffice
        if (!i) {
          std::vector<int> va, vb;
          for (size_t x = 0; x < m; ++x) {
            if (a >> x & 1) {
              va.push_back(inst.edge(inst.edge_ids[x]).first);
              va.push_back(inst.edge(inst.edge_ids[x]).second);
            }
            if (b >> x & 1) {
              vb.push_back(inst.edge(inst.edge_ids[x]).first);
              vb.push_back(inst.edge(inst.edge_ids[x]).second);
            }
          }
          std::sort(va.begin(), va.end());
          std::sort(vb.begin(), vb.end());
          std::vector<int> common;
          std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(),
                                std::back_inserter(common));
          if (!common.empty()) CHECK(*fval(a) + *fval(b) >= *u);
        }
      }
  }
}

TEST_CASE("check_conditions on the spec instances") {
  {
    // single vertex with a base of a rank-2 matroid
    Instance inst = make_instance(1, {}, {0, 0}, MatroidHandle::free_matroid({0, 1}));
    auto rep = check_conditions(inst);
    CHECK(rep.ok());
    CHECK(rep.rank_k == 2);
  }
  {
    auto rep = check_conditions(k4_two_roots());
    CHECK(rep.ok());
  }
  {
    auto rep = check_conditions(k4_parallel_violating());
    CHECK(rep.c1_ok);
    CHECK_FALSE(rep.c2_ok);
    CHECK_FALSE(rep.c3_ok);
    // the only violator is the full edge set
    REQUIRE_FALSE(rep.violating_edges.empty());
    CHECK(rep.violating_edges.size() == 7);
    auto inst = k4_parallel_violating();
    CHECK(count_slack(inst, 2, 2, rep.violating_edges) < 0);
  }
}

TEST_CASE("matching-based C2 equals enumeration on small instances") {
  std::mt19937 rng(777);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    int n = 1 + (int)(rng() % 4);
    int m = (int)(rng() % 6);
    std::vector<std::pair<int, int>> edges;
    if (n >= 2)
      for (int i = 0; i < m; ++i) {
        int u = (int)(rng() % n), v = (int)(rng() % n);
        if (u == v) v = (v + 1) % n;
        edges.push_back({u, v});
      }
    int t = (int)(rng() % 4);
    std::vector<int> rv;
    for (int i = 0; i < t; ++i) rv.push_back((int)(rng() % n));
    MatroidHandle mat = [&]() {
      switch (rng() % 3) {
        case 0: return MatroidHandle::free_matroid(testutil::iota_elems(t));
        case 1: return MatroidHandle::uniform(testutil::iota_elems(t), 1 + (int)(rng() % 3));
        default: {
          std::unordered_map<int, std::pair<int, int>> aux;
          for (int i = 0; i < t; ++i) aux[i] = {(int)(rng() % 3), (int)(rng() % 3)};
          return MatroidHandle::graphic(testutil::iota_elems(t), std::move(aux));
        }
      }
    }();
    Instance inst = make_instance(n, edges, rv, mat);
    const int k = inst.m.rank();
    // keep within the reduction's regime (|R_v| <= k)
    bool oversized = false;
    for (int v : inst.verts) {
      int cnt = 0;
      for (const Root& r : inst.roots) cnt += r.vertex == v;
      oversized = oversized || cnt > k;
    }
    if (oversized || k == 0) continue;
    ++checked;
    std::vector<int> witness;
    bool fast = count_condition_holds(inst, k, k, 1, &witness);
    bool brute = count_holds_brute(inst, k, k);
    CAPTURE(trial);
    REQUIRE(fast == brute);
    if (!fast) REQUIRE(count_slack(inst, k, k, witness) < 0);
  }
  CHECK(checked > 100);
}

TEST_CASE("MatchingState matches the brute-force Rado bound") {
  {
    // empty plus side
    Instance inst = make_instance(2, {}, {}, MatroidHandle::free_matroid({}));
    MatchingState st(inst, 1);
    st.augment_to_max();
    CHECK(st.matching_size() == 0);
  }
  {
    Instance inst = k4_two_roots();
    MatchingState st(inst, 2);
    CHECK(st.augment_to_max());
    CHECK(st.matching_size() == 8);  // covers E and both loops
    CHECK(st.matching_size() == st.rado_min_bruteforce());
  }
  {
    Instance inst = k4_parallel_violating();
    MatchingState st(inst, 2);
    st.augment_to_max();
    int pos = 6;  // the parallel extra edge
    st.extend_with_copies(pos, 2);
    CHECK_FALSE(st.all_plus_covered());
    CHECK(st.matching_size() == st.rado_min_bruteforce());
  }
}

TEST_CASE("count_rank agrees with the partition oracles") {
  {
    Instance inst = make_instance(4, k4_edges, {}, MatroidHandle::free_matroid({}));
    CHECK(count_rank(inst, {}, 2) == 0);
    CHECK(count_rank(inst, inst.edge_ids, 2) == 6);
    auto oracle = oracles::rank_by_partitions(inst, inst.edge_ids, {}, 2);
    CHECK(oracle.value == 6);
  }
  {
    // two disjoint triangles
    Instance inst = make_instance(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}, {},
                                  MatroidHandle::free_matroid({}));
    oracles::OracleBudget wide;
    wide.max_vertices = 6;
    auto oracle = oracles::rank_by_partitions(inst, inst.edge_ids, wide, 2);
    CHECK(count_rank(inst, inst.edge_ids, 2) == oracle.value);
    CHECK(oracle.value == 6);
  }
  {
    // path of 2 edges at k=1: a forest is independent
    Instance inst = make_instance(3, {{0, 1}, {1, 2}}, {}, MatroidHandle::free_matroid({}));
    CHECK(count_rank(inst, inst.edge_ids, 1) == 2);
  }
  std::mt19937 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + (int)(rng() % 3);
    int m = 1 + (int)(rng() % 5);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < m; ++i) {
      int u = (int)(rng() % n), v = (int)(rng() % n);
      if (u == v) v = (v + 1) % n;
      edges.push_back({u, v});
    }
    int t = (int)(rng() % 3);
    std::vector<int> rv;
    for (int i = 0; i < t; ++i) rv.push_back((int)(rng() % n));
    Instance inst = make_instance(n, edges, rv, MatroidHandle::free_matroid(testutil::iota_elems(t)));
    int k = std::max(inst.m.rank(), 1 + (int)(rng() % 3));
    auto oracle = oracles::rank_by_partitions(inst, inst.edge_ids, {}, k);
    CAPTURE(trial);
    REQUIRE(count_rank(inst, inst.edge_ids, k) == oracle.value);
  }
}

TEST_CASE("find_tight_set") {
  {
    Instance inst = k4_two_roots();
    auto f = find_tight_set(inst, 0, TightMode::tight);
    REQUIRE(f.has_value());
    CHECK(f->size() == 6);  // the whole edge set is tight
  }
  {
    // a single edge with no roots is not inside any tight set at k=2
    Instance inst = make_instance(2, {{0, 1}}, {}, MatroidHandle::free_matroid({}));
    auto f = find_tight_set(inst, 0, TightMode::tight, 2);
    CHECK_FALSE(f.has_value());
  }
  {
    Instance inst = k4_parallel_violating();
    auto f = find_tight_set(inst, 6, TightMode::violating);
    REQUIRE(f.has_value());
    CHECK(f->size() == 7);
    CHECK(count_slack(inst, 2, 2, *f) < 0);
    // matches the oracle's maximal violator
    auto viol = oracles::enumerate_violators(inst);
    bool found = false;
    for (const auto& v : viol)
      if (v.maximal) {
        found = true;
        CHECK(v.edges == *f);
      }
    CHECK(found);
  }
}

TEST_CASE("union of vertex-intersecting tight sets is tight") {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 80; ++trial) {
    int n = 2 + (int)(rng() % 3);
    int m = 2 + (int)(rng() % 4);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < m; ++i) {
      int u = (int)(rng() % n), v = (int)(rng() % n);
      if (u == v) v = (v + 1) % n;
      edges.push_back({u, v});
    }
    int t = (int)(rng() % 3);
    std::vector<int> rv;
    for (int i = 0; i < t; ++i) rv.push_back((int)(rng() % n));
    Instance inst = make_instance(n, edges, rv, MatroidHandle::free_matroid(testutil::iota_elems(t)));
    int k = std::max(1, inst.m.rank());
    if (!count_holds_brute(inst, k, k)) continue;
    // collect tight sets
    std::vector<std::pair<unsigned, std::vector<int>>> tights;
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
      std::vector<int> f;
      for (int i = 0; i < m; ++i)
        if (mask >> i & 1) f.push_back(i);
      if (count_slack(inst, k, k, f) == 0) tights.push_back({mask, f});
    }
    for (auto& [ma, fa] : tights)
      for (auto& [mb, fb] : tights) {
        std::set<int> va, vb;
        for (int e : fa) {
          va.insert(inst.edge(e).first);
          va.insert(inst.edge(e).second);
        }
        for (int e : fb) {
          vb.insert(inst.edge(e).first);
          vb.insert(inst.edge(e).second);
        }
        bool meet = false;
        for (int v : va) meet = meet || vb.count(v);
        if (!meet) continue;
        std::vector<int> un;
        for (int i = 0; i < m; ++i)
          if ((ma | mb) >> i & 1) un.push_back(i);
        CHECK(count_slack(inst, k, k, un) == 0);
      }
  }
}
