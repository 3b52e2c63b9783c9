#pragma once

#include "mtd/decompose.hpp"

namespace mtd {

// Deliberately slow, simple, and independent of the production algorithms;
// used as ground truth by property tests and witness re-validation.
namespace oracles {

struct OracleBudget {
  int max_vertices = 5;
  int max_edges = 7;
  int max_roots = 4;
  int max_ground = 8;
};

struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rank of F in the induced count matroid, via full enumeration of both the
// vertex-partition formula and the edge-partition formula; the two are
// asserted equal. Also returns the minimizing vertex partition.
struct RankByPartitions {
  long long value = 0;
  std::vector<std::vector<int>> min_partition;  // vertex classes
};
RankByPartitions rank_by_partitions(const Instance& inst, const std::vector<int>& F,
                                    const OracleBudget& budget = {},
                                    std::optional<int> k = std::nullopt);

// First basic rooted-tree decomposition found by enumerating all edge->root
// assignments, or nullopt.
std::optional<Decomposition> exhaustive_basic_decomposition(const Instance& inst,
                                                            const OracleBudget& budget = {});

struct Violator {
  std::vector<int> edges;
  bool minimal = false, maximal = false;
};
std::vector<Violator> enumerate_violators(const Instance& inst, const OracleBudget& budget = {});

// Dual packing condition: a vertex partition with |delta(P)| < k|P| - sum
// r(R_X), or nullopt if none exists.
std::optional<std::vector<std::vector<int>>> violating_partition_exhaustive(
    const Instance& inst, const OracleBudget& budget = {});

// Independent validity check for decompositions (no code shared with the
// production validator).
bool decomposition_is_basic(const Instance& inst, const Decomposition& dec);

// Matroid axioms by exhaustion over all subsets of the ground set.
struct AxiomReport {
  bool ok = true;
  std::string detail;
};
AxiomReport check_matroid_axioms(const MatroidHandle& m, const OracleBudget& budget = {});

// Enumeration helper: calls fn once per partition of {0..n-1} into nonempty
// classes (restricted-growth order).
void for_each_partition(int n, const std::function<void(const std::vector<int>&)>& fn);

}  // namespace oracles
}  // namespace mtd
