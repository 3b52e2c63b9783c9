#pragma once

#include <memory>
#include <optional>

#include "mtd/graph.hpp"
#include "mtd/matroid.hpp"

namespace mtd {

// A vertex-induced view of a master edge table plus roots and their matroid.
// Edge ids stay stable across the decomposition recursion; sub-instances
// share the endpoint table.
struct Instance {
  std::vector<int> verts;     // sorted vertex ids
  std::vector<int> edge_ids;  // ids into *ends
  std::shared_ptr<const std::vector<std::pair<int, int>>> ends;
  std::vector<Root> roots;
  MatroidHandle m;  // ground == multiset of root elems

  static Instance from_graph(const GraphWithRoots& g, MatroidHandle m);
  std::pair<int, int> edge(int eid) const { return (*ends)[eid]; }
  const Root& root_by_elem(int elem) const;
};

struct ConditionReport {
  bool c1_ok = true;
  std::optional<int> offending_vertex;
  bool c2_ok = true;
  std::vector<int> violating_edges;  // edge ids; empty when c2 holds
  bool c3_ok = true;
  long long edge_count = 0, root_count = 0, k_times_v = 0;
  int rank_k = 0;
  std::string note;

  bool ok() const { return c1_ok && c2_ok && c3_ok; }
};

struct infeasible_error : std::runtime_error {
  ConditionReport report;
  // violating vertex partition, when one was extracted (dual form)
  std::optional<std::vector<std::vector<int>>> partition;
  explicit infeasible_error(std::string msg, ConditionReport r)
      : std::runtime_error(std::move(msg)), report(std::move(r)) {}
};

struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

// f_{M,c}(F) = c(|V(F)|-1) - (|R_F| - r(R_F)); F must be nonempty.
long long f_value(const Instance& inst, int c, const std::vector<int>& edge_ids);

// k|V(F)| - ell + r(R_F) - |R_F| - |F|; negative iff F violates the count.
long long count_slack(const Instance& inst, int k, int ell, const std::vector<int>& edge_ids);

// Decides |F| + |R_F| <= k|V(F)| - ell + r(R_F) for every nonempty F,
// via independent matchings on the auxiliary bipartite graphs. Requires
// per-vertex |R_v| <= k (surplus roots are folded into reduced vertex
// copies, so only C1-style inputs are needed).
bool count_condition_holds(const Instance& inst, int k, int ell, int jobs = 1,
                           std::vector<int>* witness = nullptr);

// The three conditions for basic decomposability; k is the matroid rank.
ConditionReport check_conditions(const Instance& inst, int jobs = 1);

// Rank of F in the matroid induced by f_{M,k}; requires C1. The count
// parameter defaults to the matroid rank but may be any k >= r_M.
int count_rank(const Instance& inst, const std::vector<int>& edge_ids,
               std::optional<int> k = std::nullopt);
// Greedy maximal independent-in-N(f_{M,k}) subset of F, in stable edge order.
std::vector<int> count_basis(const Instance& inst, const std::vector<int>& edge_ids,
                             std::optional<int> k = std::nullopt);

enum class TightMode { tight, violating };

// Maximal tight (resp. violating) set containing edge `eid`, or nullopt.
// Extracted from the unaugmentable matching and re-verified by direct
// evaluation before being returned.
std::optional<std::vector<int>> find_tight_set(const Instance& inst, int eid, TightMode mode,
                                               std::optional<int> k = std::nullopt);

// ---------------------------------------------------------------------------
// Independent-matching state on the auxiliary bipartite graph: plus side
// E ∪ L (plus optional copies of one edge), minus side k vertex copies per
// vertex and one copy of each loop. The minus matroid is the direct sum of
// the root matroid on the loop copies and a free matroid on the vertex
// copies; the plus matroid is free.
class MatchingState {
 public:
  MatchingState(const Instance& inst, int k);
  MatchingState(const MatchingState&);
  MatchingState& operator=(const MatchingState&) = delete;
  ~MatchingState();

  int plus_count() const;
  int minus_count() const;
  int matching_size() const;
  bool all_plus_covered() const;
  int partner_of_plus(int p) const;

  // Augments along shortest source->exit paths until no augmenting path
  // remains; returns true when every active plus element is covered.
  bool augment_to_max();

  // Adds ell plus-side copies of the edge at `edge_pos` and augments.
  // Returns true if the copies (and everything else) ended up covered.
  // Undone with rollback to an earlier checkpoint.
  bool extend_with_copies(int edge_pos, int ell);

  struct Checkpoint {
    size_t undo_mark;
    int copies;
  };
  Checkpoint checkpoint() const;
  void rollback(const Checkpoint&);

  // Incremental instance edits. These invalidate outstanding checkpoints and
  // must not be called while copies are live.
  void disable_edge(int edge_pos);
  // Adds the root's self-loop; `m` is the updated matroid containing r.elem.
  void add_root_loop(const Root& r, const MatroidHandle& m);

  // Reachability closure from seed edges (their plus elements; live copies
  // are seeded automatically) in the exchangeability digraph. Returns edge
  // positions, or nullopt if the closure reaches an exit (then no tight set
  // exists here). With stop_when_all_verts, gives up early once every vertex
  // of the instance is touched and reports nullopt via `all_verts`.
  std::optional<std::vector<int>> closure_edges(const std::vector<int>& seed_positions,
                                                bool stop_when_all_verts, bool* all_verts) const;

  // Plus-side elements with no path to an exit (the canonical Rado
  // minimizer), intersected with E; returned as edge positions.
  std::vector<int> unreaching_edges() const;

  // Rado bound r_{N^-}(Γ(F)) + |V^+ \ F| minimized by brute force; test use.
  long long rado_min_bruteforce() const;

  struct Impl;
  Impl& impl() { return *impl_; }
  const Impl& impl() const { return *impl_; }

 private:
  std::unique_ptr<Impl> impl_;
};

inline void max_independent_matching(MatchingState& st) { st.augment_to_max(); }

}  // namespace mtd
