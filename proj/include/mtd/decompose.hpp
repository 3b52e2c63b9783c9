#pragma once

#include "mtd/count.hpp"

namespace mtd {

// Edge partition into rooted trees (or rooted components, for the dual
// packing form). One part per root, in instance root order; empty parts are
// explicit.
struct Decomposition {
  enum class Kind { rooted_tree, rooted_component };
  struct Part {
    int root_elem = -1;
    std::vector<int> edges;  // edge ids, sorted
  };
  Kind kind = Kind::rooted_tree;
  std::vector<Part> parts;

  const Part& part_of(int elem) const;
};

struct ValidationResult {
  bool ok = true;
  std::string diagnostics;
};

// Checks edge-partition, per-part rooted-tree (or rooted-component) shape,
// and the per-vertex base (resp. spanning set) property.
ValidationResult validate(const Instance& inst, const Decomposition& dec);

// Constructs a basic rooted-tree decomposition, or throws infeasible_error
// carrying the failed ConditionReport.
Decomposition basic_decomposition(const Instance& inst, int jobs = 1);

// First unbalanced proper tight edge set in stable search order, if any.
// Pre: conditions hold and the instance is connected.
std::optional<std::vector<int>> find_unbalanced_proper_tight_set(const Instance& inst);

// Rooted-component packing (every vertex ends up spanned by a rank-spanning
// multiset of roots). Throws infeasible_error with a violating vertex
// partition when one can be extracted.
Decomposition rooted_component_packing(const Instance& inst, int jobs = 1);

// Partition of the instance vertices induced by graph connectivity; isolated
// vertices form their own classes.
std::vector<std::vector<int>> vertex_components(const Instance& inst);

}  // namespace mtd
