#include "mtd/matroid.hpp"

#include <algorithm>

#include "mtd/linalg.hpp"

namespace mtd {

// ---------------------------------------------------------------------------
// base families

struct MatroidBase {
  virtual ~MatroidBase() = default;
  virtual bool indep(const std::vector<int>& elems) const = 0;
};

namespace {

struct FreeBase : MatroidBase {
  bool indep(const std::vector<int>&) const override { return true; }
};

struct UniformBase : MatroidBase {
  int r;
  explicit UniformBase(int rank) : r(rank) {}
  bool indep(const std::vector<int>& e) const override { return (int)e.size() <= r; }
};

struct GraphicBase : MatroidBase {
  std::unordered_map<int, std::pair<int, int>> aux;

  bool indep(const std::vector<int>& elems) const override {
    std::unordered_map<int, int> parent;
    auto find = [&](int x) {
      while (parent.count(x) && parent[x] != x) x = parent[x] = parent[parent[x]];
      if (!parent.count(x)) parent[x] = x;
      return x;
    };
    for (int e : elems) {
      auto [u, v] = aux.at(e);
      int ru = find(u), rv = find(v);
      if (ru == rv) return false;  // loop or cycle
      parent[ru] = rv;
    }
    return true;
  }
};

struct LinearBase : MatroidBase {
  std::unordered_map<int, VecQ> vectors;

  bool indep(const std::vector<int>& elems) const override {
    if (elems.empty()) return true;
    std::vector<VecQ> rows;
    rows.reserve(elems.size());
    for (int e : elems) rows.push_back(vectors.at(e));
    if (rows.size() > rows[0].size()) return false;
    return row_space_rank(rows) == rows.size();
  }
};

struct ColoredBase : MatroidBase {
  std::unordered_map<int, int> colors;
  int cap;

  bool indep(const std::vector<int>& elems) const override {
    if ((int)elems.size() > cap) return false;
    std::unordered_set<int> seen;
    for (int e : elems)
      if (!seen.insert(colors.at(e)).second) return false;
    return true;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// modifier layers
//
// A layer represents truncate^t( extend(parent, parallels + coloops) | ground ).
// Parallel substitutions are resolved at derive time, so query chains stay as
// deep as the number of truncation boundaries, not the number of modifiers.

struct MatroidHandle::Layer {
  std::shared_ptr<const Layer> parent;         // null for the base layer
  std::shared_ptr<const MatroidBase> base;     // set when parent is null
  std::vector<int> ground;                     // ordered
  std::unordered_set<int> ground_set;
  std::unordered_map<int, int> subst;          // parallel copy -> its target
  std::unordered_set<int> coloops;
  int trunc = 0;
  mutable std::optional<int> rank_cache;       // rank of ground (truncated)
  mutable std::optional<int> untrunc_rank;     // rank of ground before truncation
  mutable std::once_flag rank_once, untrunc_once;

  // independence without this layer's truncation cap
  bool indep_untruncated(const std::vector<int>& elems) const {
    std::unordered_set<int> seen;
    std::vector<int> pass_down;
    pass_down.reserve(elems.size());
    for (int e : elems) {
      auto it = subst.find(e);
      int t = it == subst.end() ? e : it->second;
      if (!seen.insert(t).second) return false;  // parallel pair
      if (!coloops.count(t)) pass_down.push_back(t);
    }
    if (parent) return parent->indep(pass_down);
    return base->indep(pass_down);
  }

  bool indep(const std::vector<int>& elems) const {
    if (trunc > 0 && (int)elems.size() > untruncated_ground_rank() - trunc) return false;
    return indep_untruncated(elems);
  }

  int greedy_rank(const std::vector<int>& elems, bool truncated) const {
    std::vector<int> basis;
    for (int e : elems) {
      basis.push_back(e);
      bool ok = truncated ? indep(basis) : indep_untruncated(basis);
      if (!ok) basis.pop_back();
    }
    return (int)basis.size();
  }

  int untruncated_ground_rank() const {
    std::call_once(untrunc_once, [&] { untrunc_rank = greedy_rank(ground, false); });
    return *untrunc_rank;
  }
  int ground_rank() const {
    std::call_once(rank_once, [&] {
      rank_cache = trunc > 0 ? std::max(0, untruncated_ground_rank() - trunc)
                             : greedy_rank(ground, true);
    });
    return *rank_cache;
  }

  void require_known(const std::vector<int>& elems) const {
    std::unordered_set<int> seen;
    for (int e : elems) {
      if (!ground_set.count(e)) throw input_error("unknown matroid element id " + std::to_string(e));
      if (!seen.insert(e).second) throw input_error("duplicate element id in query: " + std::to_string(e));
    }
  }
};

namespace {

std::shared_ptr<MatroidHandle::Layer> base_layer(std::vector<int> ground,
                                                 std::shared_ptr<const MatroidBase> base) {
  auto l = std::make_shared<MatroidHandle::Layer>();
  l->base = std::move(base);
  l->ground_set.insert(ground.begin(), ground.end());
  if (l->ground_set.size() != ground.size()) throw input_error("duplicate id in ground set");
  l->ground = std::move(ground);
  return l;
}

// copy everything except the caches
std::shared_ptr<MatroidHandle::Layer> clone_layer(const MatroidHandle::Layer& src) {
  auto l = std::make_shared<MatroidHandle::Layer>();
  l->parent = src.parent;
  l->base = src.base;
  l->ground = src.ground;
  l->ground_set = src.ground_set;
  l->subst = src.subst;
  l->coloops = src.coloops;
  l->trunc = src.trunc;
  return l;
}

std::shared_ptr<MatroidHandle::Layer> child_layer(std::shared_ptr<const MatroidHandle::Layer> parent) {
  auto l = std::make_shared<MatroidHandle::Layer>();
  l->ground = parent->ground;
  l->ground_set = parent->ground_set;
  l->parent = std::move(parent);
  return l;
}

}  // namespace

MatroidHandle::MatroidHandle() : layer_(base_layer({}, std::make_shared<FreeBase>())) {}

MatroidHandle MatroidHandle::free_matroid(std::vector<int> ground) {
  return MatroidHandle(base_layer(std::move(ground), std::make_shared<FreeBase>()));
}
MatroidHandle MatroidHandle::uniform(std::vector<int> ground, int rank) {
  if (rank < 0) throw input_error("uniform matroid needs rank >= 0");
  return MatroidHandle(base_layer(std::move(ground), std::make_shared<UniformBase>(rank)));
}
MatroidHandle MatroidHandle::graphic(std::vector<int> ground,
                                     std::unordered_map<int, std::pair<int, int>> aux_edges) {
  auto b = std::make_shared<GraphicBase>();
  b->aux = std::move(aux_edges);
  for (int e : ground)
    if (!b->aux.count(e)) throw input_error("graphic matroid: element without auxiliary edge");
  return MatroidHandle(base_layer(std::move(ground), b));
}
MatroidHandle MatroidHandle::linear(std::vector<int> ground, std::unordered_map<int, VecQ> vectors) {
  auto b = std::make_shared<LinearBase>();
  b->vectors = std::move(vectors);
  size_t len = 0;
  for (int e : ground) {
    auto it = b->vectors.find(e);
    if (it == b->vectors.end()) throw input_error("linear matroid: element without vector");
    if (len == 0) len = it->second.size();
    if (it->second.size() != len || len == 0) throw input_error("linear matroid: vector length mismatch");
  }
  return MatroidHandle(base_layer(std::move(ground), b));
}
MatroidHandle MatroidHandle::colored(std::vector<int> ground, std::unordered_map<int, int> colors,
                                     int rank_cap) {
  auto b = std::make_shared<ColoredBase>();
  b->colors = std::move(colors);
  b->cap = rank_cap;
  for (int e : ground)
    if (!b->colors.count(e)) throw input_error("colored matroid: element without color");
  if (rank_cap < 0) throw input_error("colored matroid needs rank cap >= 0");
  return MatroidHandle(base_layer(std::move(ground), b));
}

bool MatroidHandle::is_independent(const std::vector<int>& subset) const {
  layer_->require_known(subset);
  return layer_->indep(subset);
}

int MatroidHandle::rank(const std::vector<int>& subset) const {
  layer_->require_known(subset);
  return layer_->greedy_rank(subset, true);
}

int MatroidHandle::rank() const { return layer_->ground_rank(); }

std::vector<int> MatroidHandle::max_independent_subset(const std::vector<int>& subset) const {
  layer_->require_known(subset);
  std::vector<int> basis;
  for (int e : subset) {
    basis.push_back(e);
    if (!layer_->indep(basis)) basis.pop_back();
  }
  return basis;
}

std::vector<int> MatroidHandle::span(const std::vector<int>& subset) const {
  std::vector<int> basis = max_independent_subset(subset);
  std::unordered_set<int> in_subset(subset.begin(), subset.end());
  std::vector<int> result;
  for (int y : layer_->ground) {
    if (in_subset.count(y)) {
      result.push_back(y);
      continue;
    }
    basis.push_back(y);
    if (!layer_->indep(basis)) result.push_back(y);
    basis.pop_back();
  }
  return result;
}

const std::vector<int>& MatroidHandle::ground() const { return layer_->ground; }
bool MatroidHandle::contains(int elem) const { return layer_->ground_set.count(elem) != 0; }

MatroidHandle MatroidHandle::derive(const Modifier& mod) const {
  switch (mod.op) {
    case ModifierOp::truncate: {
      auto l = clone_layer(*layer_);
      l->trunc += 1;
      return MatroidHandle(std::move(l));
    }
    case ModifierOp::restrict: {
      std::unordered_set<int> keep(mod.elements.begin(), mod.elements.end());
      for (int e : mod.elements)
        if (!layer_->ground_set.count(e)) throw input_error("restrict outside ground");
      auto l = layer_->trunc > 0 ? child_layer(layer_) : clone_layer(*layer_);
      std::vector<int> g;
      for (int e : l->ground)
        if (keep.count(e)) g.push_back(e);
      l->ground = std::move(g);
      l->ground_set = std::move(keep);
      return MatroidHandle(std::move(l));
    }
    case ModifierOp::remove: {
      std::unordered_set<int> drop(mod.elements.begin(), mod.elements.end());
      for (int e : mod.elements)
        if (!layer_->ground_set.count(e)) throw input_error("delete outside ground");
      auto l = layer_->trunc > 0 ? child_layer(layer_) : clone_layer(*layer_);
      std::vector<int> g;
      for (int e : l->ground)
        if (!drop.count(e)) g.push_back(e);
      l->ground = std::move(g);
      l->ground_set.clear();
      l->ground_set.insert(l->ground.begin(), l->ground.end());
      return MatroidHandle(std::move(l));
    }
    case ModifierOp::add_parallel: {
      if (!layer_->ground_set.count(mod.base)) throw input_error("add_parallel: unknown base element");
      if (layer_->ground_set.count(mod.fresh)) throw input_error("add_parallel: id collision");
      auto l = layer_->trunc > 0 ? child_layer(layer_) : clone_layer(*layer_);
      auto it = l->subst.find(mod.base);
      l->subst[mod.fresh] = it == l->subst.end() ? mod.base : it->second;
      l->ground.push_back(mod.fresh);
      l->ground_set.insert(mod.fresh);
      return MatroidHandle(std::move(l));
    }
    case ModifierOp::add_coloops: {
      auto l = layer_->trunc > 0 ? child_layer(layer_) : clone_layer(*layer_);
      for (int e : mod.elements) {
        if (l->ground_set.count(e)) throw input_error("add_coloops: id collision");
        l->coloops.insert(e);
        l->ground.push_back(e);
        l->ground_set.insert(e);
      }
      return MatroidHandle(std::move(l));
    }
  }
  throw input_error("unknown modifier");
}

MatroidHandle MatroidHandle::truncate() const { return derive({ModifierOp::truncate, {}, -1, -1}); }
MatroidHandle MatroidHandle::restrict_to(std::vector<int> elements) const {
  return derive({ModifierOp::restrict, std::move(elements), -1, -1});
}
MatroidHandle MatroidHandle::add_parallel(int base, int fresh) const {
  return derive({ModifierOp::add_parallel, {}, base, fresh});
}
MatroidHandle MatroidHandle::add_coloops(const std::vector<int>& fresh) const {
  return derive({ModifierOp::add_coloops, fresh, -1, -1});
}
MatroidHandle MatroidHandle::remove(const std::vector<int>& elements) const {
  return derive({ModifierOp::remove, elements, -1, -1});
}

}  // namespace mtd
