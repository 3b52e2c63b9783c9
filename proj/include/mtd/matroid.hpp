#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mtd/rational.hpp"

namespace mtd {

// Base matroid families. Elements are integer ids; payloads map element ids
// to whatever the family needs. Multisets of roots are realized as distinct
// ids, so ground sets are plain id sets and multiplicity never lives in the
// representation.
struct MatroidBase;

enum class ModifierOp { truncate, restrict, add_parallel, add_coloops, remove };

struct Modifier {
  ModifierOp op;
  std::vector<int> elements;  // restrict / remove / add_coloops payload
  int base = -1, fresh = -1;  // add_parallel payload
};

// Immutable matroid with an independence oracle. Copies are cheap (shared
// state). rank and span are derived greedily from the oracle.
class MatroidHandle {
 public:
  MatroidHandle();  // free matroid on an empty ground set

  static MatroidHandle free_matroid(std::vector<int> ground);
  static MatroidHandle uniform(std::vector<int> ground, int rank);
  // each element maps to an (u,v) edge of an auxiliary graph; u == v is a loop
  static MatroidHandle graphic(std::vector<int> ground,
                               std::unordered_map<int, std::pair<int, int>> aux_edges);
  static MatroidHandle linear(std::vector<int> ground, std::unordered_map<int, VecQ> vectors);
  static MatroidHandle colored(std::vector<int> ground, std::unordered_map<int, int> colors,
                               int rank_cap);

  bool is_independent(const std::vector<int>& subset) const;
  int rank(const std::vector<int>& subset) const;
  int rank() const;  // rank of the whole ground set
  std::vector<int> span(const std::vector<int>& subset) const;
  // max independent subset, scanned in the given order
  std::vector<int> max_independent_subset(const std::vector<int>& subset) const;

  MatroidHandle derive(const Modifier& mod) const;
  // shorthands
  MatroidHandle truncate() const;
  MatroidHandle restrict_to(std::vector<int> elements) const;
  MatroidHandle add_parallel(int base, int fresh) const;
  MatroidHandle add_coloops(const std::vector<int>& fresh) const;
  MatroidHandle remove(const std::vector<int>& elements) const;

  const std::vector<int>& ground() const;
  bool contains(int elem) const;

  struct Layer;  // implementation detail, defined in matroid.cpp

 private:
  explicit MatroidHandle(std::shared_ptr<const Layer> layer) : layer_(std::move(layer)) {}
  std::shared_ptr<const Layer> layer_;
};

}  // namespace mtd
