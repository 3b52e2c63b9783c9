#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mtd {

// Multigraph with a multiset of root placements. Parallel edges are allowed,
// self-loops are not. Edge list order defines stable edge ids; root list
// order defines stable root ids. `elem` is the matroid element id of a root.
struct Root {
  int elem = -1;
  int vertex = -1;
  std::string name;  // external name, used only by I/O
};

struct GraphWithRoots {
  int n = 0;  // vertices are 0..n-1
  std::vector<std::pair<int, int>> edges;
  std::vector<Root> roots;
  std::vector<std::string> vertex_names;  // optional, I/O only

  int add_vertex(const std::string& name = {}) {
    vertex_names.resize(n);
    vertex_names.push_back(name);
    return n++;
  }
  int add_edge(int u, int v) {
    edges.emplace_back(u, v);
    return (int)edges.size() - 1;
  }
  Root& add_root(int vertex, int elem = -1, const std::string& name = {}) {
    Root r;
    r.vertex = vertex;
    r.elem = elem >= 0 ? elem : (int)roots.size();
    r.name = name.empty() ? "r" + std::to_string(roots.size() + 1) : name;
    roots.push_back(r);
    return roots.back();
  }

  std::vector<int> roots_at(int v) const {
    std::vector<int> elems;
    for (const Root& r : roots)
      if (r.vertex == v) elems.push_back(r.elem);
    return elems;
  }
  std::string vertex_name(int v) const {
    if (v >= 0 && v < (int)vertex_names.size() && !vertex_names[v].empty()) return vertex_names[v];
    return "v" + std::to_string(v);
  }
};

}  // namespace mtd
