#include "mtd/io.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_map>
#include <unordered_set>

namespace mtd::io {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw input_error(where + ": " + what);
}

const Json& need(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string need_string(const Json& j, const char* key, const std::string& where) {
  const Json& v = need(j, key, where);
  if (!v.is_string()) bad(where, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

VecQ parse_vec(const Json& arr, const std::string& where) {
  if (!arr.is_array()) bad(where, "expected an array of rationals");
  VecQ v;
  for (const auto& x : arr) {
    if (x.is_number_integer())
      v.push_back(Rational((long)x.get<long long>()));
    else if (x.is_string())
      v.push_back(parse_rational(x.get<std::string>()));
    else
      bad(where, "rationals must be strings like \"3/4\" or integers");
  }
  return v;
}

Json vec_json(const VecQ& v) {
  Json arr = Json::array();
  for (const auto& q : v) arr.push_back(rational_str(q));
  return arr;
}

struct NameTables {
  std::unordered_map<std::string, int> vertex_of;
  std::unordered_map<std::string, int> elem_of;
};

}  // namespace

ParsedInstance parse_instance_json(const Json& j) {
  if (!j.is_object()) bad("instance", "top level must be an object");
  if (need(j, "version", "instance").get<int>() != 1) bad("instance", "unsupported version");

  ParsedInstance pi;
  NameTables names;
  const Json& graph = need(j, "graph", "instance");

  for (const auto& vn : need(graph, "vertices", "graph")) {
    std::string name = vn.get<std::string>();
    if (names.vertex_of.count(name)) bad("graph.vertices", "duplicate vertex '" + name + "'");
    names.vertex_of[name] = pi.graph.add_vertex(name);
  }
  for (const auto& e : need(graph, "edges", "graph")) {
    if (!e.is_array() || e.size() != 2) bad("graph.edges", "each edge is a pair of vertex names");
    auto u = names.vertex_of.find(e[0].get<std::string>());
    auto v = names.vertex_of.find(e[1].get<std::string>());
    if (u == names.vertex_of.end() || v == names.vertex_of.end())
      bad("graph.edges", "edge endpoint is not a declared vertex");
    if (u->second == v->second) bad("graph.edges", "self-loops are not allowed");
    pi.graph.add_edge(u->second, v->second);
  }
  if (graph.contains("roots")) {
    for (const auto& r : graph["roots"]) {
      std::string id = need_string(r, "id", "graph.roots");
      std::string at = need_string(r, "vertex", "graph.roots");
      if (names.elem_of.count(id)) bad("graph.roots", "duplicate root id '" + id + "'");
      auto vit = names.vertex_of.find(at);
      if (vit == names.vertex_of.end()) bad("graph.roots", "root on undeclared vertex '" + at + "'");
      int elem = (int)pi.elem_names.size();
      names.elem_of[id] = elem;
      pi.elem_names.push_back(id);
      pi.graph.add_root(vit->second, elem, id);
    }
  }

  // ----- matroid -----
  const Json& mj = need(j, "matroid", "instance");
  pi.raw_matroid = mj;
  std::string kind = need_string(mj, "kind", "matroid");

  // base ground: declared roots except ids introduced by extending modifiers
  std::unordered_set<std::string> introduced;
  if (mj.contains("modifiers")) {
    for (const auto& mod : mj["modifiers"]) {
      std::string op = need_string(mod, "op", "matroid.modifiers");
      if (op == "add_parallel") introduced.insert(need_string(mod, "id", "matroid.modifiers"));
      if (op == "add_coloops")
        for (const auto& id : need(mod, "ids", "matroid.modifiers"))
          introduced.insert(id.get<std::string>());
    }
  }
  std::vector<int> base_ground;
  for (const Root& r : pi.graph.roots)
    if (!introduced.count(r.name)) base_ground.push_back(r.elem);

  auto elem_by_name = [&](const std::string& name, const std::string& where) {
    auto it = names.elem_of.find(name);
    if (it == names.elem_of.end()) bad(where, "unknown root id '" + name + "'");
    return it->second;
  };

  MatroidHandle m;
  if (kind == "free") {
    m = MatroidHandle::free_matroid(base_ground);
  } else if (kind == "uniform") {
    m = MatroidHandle::uniform(base_ground, need(mj, "rank", "matroid").get<int>());
  } else if (kind == "graphic") {
    std::unordered_map<std::string, int> aux_vertex;
    std::unordered_map<int, std::pair<int, int>> aux;
    for (const auto& [id, pair] : need(mj, "edges", "matroid").items()) {
      if (!pair.is_array() || pair.size() != 2) bad("matroid.edges", "auxiliary edge must be a pair");
      auto vid = [&](const std::string& s) {
        auto [it, fresh] = aux_vertex.emplace(s, (int)aux_vertex.size());
        return it->second;
      };
      aux[elem_by_name(id, "matroid.edges")] = {vid(pair[0].get<std::string>()),
                                                vid(pair[1].get<std::string>())};
    }
    m = MatroidHandle::graphic(base_ground, std::move(aux));
  } else if (kind == "linear") {
    std::unordered_map<int, VecQ> vectors;
    for (const auto& [id, arr] : need(mj, "vectors", "matroid").items())
      vectors[elem_by_name(id, "matroid.vectors")] = parse_vec(arr, "matroid.vectors");
    m = MatroidHandle::linear(base_ground, std::move(vectors));
  } else if (kind == "colored") {
    std::unordered_map<std::string, int> color_ids;
    std::unordered_map<int, int> colors;
    for (const auto& [id, c] : need(mj, "colors", "matroid").items()) {
      auto [it, fresh] = color_ids.emplace(c.get<std::string>(), (int)color_ids.size());
      colors[elem_by_name(id, "matroid.colors")] = it->second;
    }
    m = MatroidHandle::colored(base_ground, std::move(colors), need(mj, "rank", "matroid").get<int>());
  } else {
    bad("matroid", "unknown kind '" + kind + "'");
  }

  if (mj.contains("modifiers")) {
    for (const auto& mod : mj["modifiers"]) {
      std::string op = need_string(mod, "op", "matroid.modifiers");
      if (op == "truncate") {
        m = m.truncate();
      } else if (op == "restrict" || op == "delete") {
        std::vector<int> elems;
        for (const auto& id : need(mod, "elements", "matroid.modifiers"))
          elems.push_back(elem_by_name(id.get<std::string>(), "matroid.modifiers"));
        m = op == "restrict" ? m.restrict_to(elems) : m.remove(elems);
      } else if (op == "add_parallel") {
        m = m.add_parallel(elem_by_name(need_string(mod, "base", "matroid.modifiers"), "matroid.modifiers"),
                           elem_by_name(need_string(mod, "id", "matroid.modifiers"), "matroid.modifiers"));
      } else if (op == "add_coloops") {
        std::vector<int> elems;
        for (const auto& id : need(mod, "ids", "matroid.modifiers"))
          elems.push_back(elem_by_name(id.get<std::string>(), "matroid.modifiers"));
        m = m.add_coloops(elems);
      } else {
        bad("matroid.modifiers", "unknown op '" + op + "'");
      }
    }
  }
  {
    std::unordered_set<int> ground(m.ground().begin(), m.ground().end());
    if (ground.size() != pi.graph.roots.size()) bad("matroid", "ground set does not match the roots");
    for (const Root& r : pi.graph.roots)
      if (!ground.count(r.elem)) bad("matroid", "root '" + r.name + "' missing from the matroid");
  }
  pi.matroid = std::move(m);

  // ----- framework -----
  if (j.contains("framework")) {
    const Json& fj = j["framework"];
    pi.raw_framework = fj;
    FrameworkModel fm;
    std::string model = need_string(fj, "model", "framework");
    if (model == "body_bar_bar")
      fm.kind = FrameworkKind::body_bar_bar;
    else if (model == "body_bar_pin")
      fm.kind = FrameworkKind::body_bar_pin;
    else if (model == "bar_joint_bar")
      fm.kind = FrameworkKind::bar_joint_bar;
    else if (model == "bar_joint_pin")
      fm.kind = FrameworkKind::bar_joint_pin;
    else if (model == "bar_joint_slider")
      fm.kind = FrameworkKind::bar_joint_slider;
    else
      bad("framework", "unknown model '" + model + "'");

    fm.d = fj.contains("dimension") ? fj["dimension"].get<int>() : 2;
    if (fm.d < 1) bad("framework", "dimension must be at least 1");
    if (fm.kind != FrameworkKind::body_bar_bar && fm.kind != FrameworkKind::body_bar_pin && fm.d != 2)
      bad("framework", "bar-joint models require dimension 2");
    fm.graph = pi.graph;

    if (fj.contains("bars")) {
      for (const auto& [id, arr] : fj["bars"].items()) {
        VecQ v = parse_vec(arr, "framework.bars");
        if ((int)v.size() != fm.D()) bad("framework.bars", "expected " + std::to_string(fm.D()) + " coordinates");
        fm.boundary_bars[elem_by_name(id, "framework.bars")] = Extensor2{fm.d, std::move(v)};
      }
    }
    if (fj.contains("pins")) {
      for (const auto& [id, arr] : fj["pins"].items()) {
        VecQ v = parse_vec(arr, "framework.pins");
        if ((int)v.size() != fm.d) bad("framework.pins", "expected a point of R^d");
        fm.pins[elem_by_name(id, "framework.pins")] = std::move(v);
      }
    }
    if (fj.contains("sliders")) {
      for (const auto& [id, arr] : fj["sliders"].items()) {
        VecQ v = parse_vec(arr, "framework.sliders");
        if (v.size() != 2 || (v[0] == 0 && v[1] == 0))
          bad("framework.sliders", "direction must be a nonzero 2-vector");
        fm.sliders[elem_by_name(id, "framework.sliders")] = std::move(v);
      }
    }
    if (fj.contains("pinned")) {
      for (const auto& vn : fj["pinned"]) {
        auto it = names.vertex_of.find(vn.get<std::string>());
        if (it == names.vertex_of.end()) bad("framework.pinned", "unknown vertex");
        fm.pinned.push_back(it->second);
      }
    }
    if (fj.contains("placements")) {
      for (const auto& [vn, arr] : fj["placements"].items()) {
        auto it = names.vertex_of.find(vn);
        if (it == names.vertex_of.end()) bad("framework.placements", "unknown vertex '" + vn + "'");
        VecQ v = parse_vec(arr, "framework.placements");
        if (v.size() != 3) bad("framework.placements", "expected homogeneous triples");
        fm.placements[it->second] = canonical_homogeneous(v);
      }
    }
    // per-model payload presence
    auto require_payload = [&](bool ok, const char* what) {
      if (!ok) bad("framework", std::string("model '") + model + "' requires " + what);
    };
    switch (fm.kind) {
      case FrameworkKind::body_bar_bar:
      case FrameworkKind::bar_joint_bar:
        require_payload(fm.boundary_bars.size() == pi.graph.roots.size(), "a bar for every root");
        break;
      case FrameworkKind::body_bar_pin:
        require_payload(fm.pins.size() == pi.graph.roots.size(), "a pin for every root");
        break;
      case FrameworkKind::bar_joint_slider:
        require_payload(fm.sliders.size() == pi.graph.roots.size(), "a slider for every root");
        break;
      case FrameworkKind::bar_joint_pin:
        require_payload(!fm.pinned.empty() || pi.graph.roots.empty(), "a pinned vertex set");
        break;
    }
    pi.framework = std::move(fm);
  }
  return pi;
}

ParsedInstance parse_instance(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("JSON parse error: ") + e.what());
  }
  try {
    return parse_instance_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("malformed instance: ") + e.what());
  }
}

Json emit_instance(const ParsedInstance& pi) {
  Json j;
  j["version"] = 1;
  Json graph;
  Json verts = Json::array();
  for (int v = 0; v < pi.graph.n; ++v) verts.push_back(pi.graph.vertex_name(v));
  graph["vertices"] = std::move(verts);
  Json edges = Json::array();
  for (auto [u, v] : pi.graph.edges)
    edges.push_back(Json::array({pi.graph.vertex_name(u), pi.graph.vertex_name(v)}));
  graph["edges"] = std::move(edges);
  Json roots = Json::array();
  for (const Root& r : pi.graph.roots)
    roots.push_back(Json{{"id", r.name}, {"vertex", pi.graph.vertex_name(r.vertex)}});
  graph["roots"] = std::move(roots);
  j["graph"] = std::move(graph);
  j["matroid"] = pi.raw_matroid;
  if (!pi.raw_framework.is_null()) j["framework"] = pi.raw_framework;
  return j;
}

// ---------------------------------------------------------------------------
// result emission

namespace {

Json edge_json(const ParsedInstance& pi, int eid) {
  auto [u, v] = pi.graph.edges[eid];
  return Json::array({eid, pi.graph.vertex_name(u), pi.graph.vertex_name(v)});
}

Json edges_json(const ParsedInstance& pi, const std::vector<int>& ids) {
  Json arr = Json::array();
  for (int e : ids) arr.push_back(edge_json(pi, e));
  return arr;
}

Json report_json(const ParsedInstance& pi, const ConditionReport& rep) {
  Json j;
  j["c1"] = rep.c1_ok;
  if (rep.offending_vertex) j["offending_vertex"] = pi.graph.vertex_name(*rep.offending_vertex);
  j["c2"] = rep.c2_ok;
  if (!rep.violating_edges.empty()) j["violating_edges"] = edges_json(pi, rep.violating_edges);
  j["c3"] = rep.c3_ok;
  j["counts"] = Json{{"edges", rep.edge_count}, {"roots", rep.root_count}, {"k_times_v", rep.k_times_v}};
  j["rank_k"] = rep.rank_k;
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

Json decomposition_json(const ParsedInstance& pi, const Decomposition& dec) {
  Json arr = Json::array();
  std::unordered_map<int, std::string> elem_name;
  for (const Root& r : pi.graph.roots) elem_name[r.elem] = r.name;
  for (const auto& part : dec.parts) {
    Json p;
    auto it = elem_name.find(part.root_elem);
    p["root"] = it != elem_name.end() ? it->second : "elem" + std::to_string(part.root_elem);
    p["edges"] = edges_json(pi, part.edges);
    arr.push_back(std::move(p));
  }
  return arr;
}

Json partition_json(const ParsedInstance& pi, const std::vector<std::vector<int>>& parts) {
  Json arr = Json::array();
  for (const auto& cls : parts) {
    Json c = Json::array();
    for (int v : cls) c.push_back(pi.graph.vertex_name(v));
    arr.push_back(std::move(c));
  }
  return arr;
}

Json certificate_json(const RankCertificate& cert, bool include_kernel = true) {
  Json j;
  j["rows"] = cert.rows;
  j["cols"] = cert.cols;
  j["rank"] = cert.rank;
  j["kernel_dim"] = cert.kernel_dim;
  if (include_kernel) {
    Json basis = Json::array();
    for (const auto& v : cert.kernel_basis) basis.push_back(vec_json(v));
    j["kernel_basis"] = std::move(basis);
  }
  return j;
}

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

void attach_timing(Json& j, const CmdOptions& opt, const Stopwatch& sw) {
  if (opt.timing) j["timing_ms"] = sw.ms();
}

// Independent re-evaluation of an emitted violating set; every witness that
// leaves this process must re-check.
void verify_witness(const ParsedInstance& pi, const ConditionReport& rep, int k, int ell) {
  if (rep.c2_ok || rep.violating_edges.empty()) return;
  Instance inst = Instance::from_graph(pi.graph, pi.matroid);
  std::vector<int> vs;
  for (int e : rep.violating_edges) {
    vs.push_back(inst.edge(e).first);
    vs.push_back(inst.edge(e).second);
  }
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  std::vector<int> rf;
  for (const Root& r : inst.roots)
    if (std::binary_search(vs.begin(), vs.end(), r.vertex)) rf.push_back(r.elem);
  long long lhs = (long long)rep.violating_edges.size() + (long long)rf.size();
  long long rhs = (long long)k * (long long)vs.size() - ell + inst.m.rank(rf);
  if (lhs <= rhs) throw internal_error("emitted witness does not violate the count");
}

}  // namespace

std::string decomposition_dot(const ParsedInstance& pi, const Decomposition& dec) {
  static const char* palette[12] = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3",
                                    "#ff7f00", "#a65628", "#f781bf", "#999999",
                                    "#66c2a5", "#fc8d62", "#8da0cb", "#e78ac3"};
  std::unordered_map<int, std::pair<std::string, std::string>> edge_attr;  // eid -> (color, root)
  std::unordered_map<int, std::string> elem_name;
  for (const Root& r : pi.graph.roots) elem_name[r.elem] = r.name;
  int color_idx = 0;
  for (const auto& part : dec.parts) {
    if (part.edges.empty()) continue;  // empty parts stay in the JSON only
    const char* color = palette[color_idx % 12];
    ++color_idx;
    for (int e : part.edges) edge_attr[e] = {color, elem_name[part.root_elem]};
  }
  std::unordered_set<int> root_verts;
  for (const Root& r : pi.graph.roots) root_verts.insert(r.vertex);

  std::string out = "graph decomposition {\n  node [shape=circle];\n";
  for (int v = 0; v < pi.graph.n; ++v) {
    out += "  \"" + pi.graph.vertex_name(v) + "\"";
    if (root_verts.count(v)) out += " [peripheries=2]";
    out += ";\n";
  }
  for (size_t e = 0; e < pi.graph.edges.size(); ++e) {
    auto [u, v] = pi.graph.edges[e];
    out += "  \"" + pi.graph.vertex_name(u) + "\" -- \"" + pi.graph.vertex_name(v) + "\"";
    auto it = edge_attr.find((int)e);
    if (it != edge_attr.end())
      out += " [color=\"" + it->second.first + "\", tooltip=\"" + it->second.second + "\"]";
    out += ";\n";
  }
  out += "}\n";
  return out;
}

// ---------------------------------------------------------------------------
// commands

CommandResult cmd_check(const ParsedInstance& pi, const CmdOptions& opt) {
  Stopwatch sw;
  Instance inst = Instance::from_graph(pi.graph, pi.matroid);
  ConditionReport rep = check_conditions(inst, opt.jobs);
  verify_witness(pi, rep, rep.rank_k, rep.rank_k);

  if (opt.oracle) {
    auto violators = oracles::enumerate_violators(inst);
    if (rep.c2_ok != violators.empty())
      throw internal_error("oracle disagrees with the matching-based C2 decision");
    bool search = oracles::exhaustive_basic_decomposition(inst).has_value();
    if (search != rep.ok()) throw internal_error("oracle decomposition search disagrees with the verdict");
  }

  CommandResult res;
  res.result["command"] = "check";
  res.result["verdict"] = rep.ok() ? "feasible" : "infeasible";
  res.result["conditions"] = report_json(pi, rep);
  attach_timing(res.result, opt, sw);
  res.exit_code = rep.ok() ? exit_ok : exit_infeasible;
  return res;
}

CommandResult cmd_decompose(const ParsedInstance& pi, bool dual, bool want_dot,
                            const CmdOptions& opt) {
  Stopwatch sw;
  Instance inst = Instance::from_graph(pi.graph, pi.matroid);
  CommandResult res;
  res.result["command"] = dual ? "decompose --dual" : "decompose";
  try {
    Decomposition dec = dual ? rooted_component_packing(inst, opt.jobs)
                             : basic_decomposition(inst, opt.jobs);
    if (opt.oracle) {
      if (!dual && !oracles::exhaustive_basic_decomposition(inst))
        throw internal_error("oracle search found no decomposition but construction succeeded");
      if (dual && oracles::violating_partition_exhaustive(inst))
        throw internal_error("oracle found a violating partition but packing succeeded");
      if (!oracles::decomposition_is_basic(inst, dec) && !dual)
        throw internal_error("oracle rejects the constructed decomposition");
    }
    res.result["verdict"] = "feasible";
    res.result["decomposition"] = decomposition_json(pi, dec);
    if (want_dot) res.dot = decomposition_dot(pi, dec);
    res.exit_code = exit_ok;
  } catch (const infeasible_error& err) {
    if (opt.oracle && !dual && oracles::exhaustive_basic_decomposition(inst))
      throw internal_error("oracle search found a decomposition but construction failed");
    res.result["verdict"] = "infeasible";
    res.result["conditions"] = report_json(pi, err.report);
    if (err.partition) res.result["violating_partition"] = partition_json(pi, *err.partition);
    res.exit_code = exit_infeasible;
  }
  attach_timing(res.result, opt, sw);
  return res;
}

namespace {

Json realized_framework_json(const ParsedInstance& pi, const FrameworkModel& fm) {
  Json j;
  if (!fm.placements.empty()) {
    Json pl;
    for (const auto& [v, p] : fm.placements) pl[fm.graph.vertex_name(v)] = vec_json(p);
    j["placements"] = std::move(pl);
  }
  if (!fm.bars.empty()) {
    Json bars;
    for (const auto& [e, b] : fm.bars) bars[std::to_string(e)] = vec_json(b.coords);
    j["bars"] = std::move(bars);
  }
  return j;
}

// direct subset enumeration of the model count, for --oracle cross-checks
void oracle_check_count(const Instance& inst, int k, int ell, bool claimed_ok) {
  if (inst.edge_ids.size() > 20) throw oracles::budget_error("oracle budget exceeded");
  bool ok = true;
  const size_t m = inst.edge_ids.size();
  for (size_t mask = 1; mask < (size_t(1) << m) && ok; ++mask) {
    std::vector<int> f;
    for (size_t i = 0; i < m; ++i)
      if (mask >> i & 1) f.push_back(inst.edge_ids[i]);
    ok = count_slack(inst, k, ell, f) >= 0;
  }
  if (ok != claimed_ok) throw internal_error("oracle disagrees with the framework count decision");
}

}  // namespace

CommandResult cmd_rigidity(const ParsedInstance& pi, bool realize, bool certify,
                           const CmdOptions& opt) {
  Stopwatch sw;
  if (!pi.framework) throw input_error("instance has no framework block");
  const FrameworkModel& fm = *pi.framework;
  CommandResult res;
  res.result["command"] = "rigidity";

  try {
    ConditionReport rep;
    switch (fm.kind) {
      case FrameworkKind::body_bar_bar: {
        res.result["model"] = "body_bar_bar";
        rep = check_body_bar_bar(fm, opt.jobs);
        verify_witness(pi, rep, fm.D(), fm.D());
        if (opt.oracle)
          oracle_check_count(Instance::from_graph(fm.graph, pi.matroid), fm.D(), fm.D(), rep.c2_ok);
        break;
      }
      case FrameworkKind::body_bar_pin: {
        res.result["model"] = "body_bar_pin";
        rep = check_body_bar_pin(fm, opt.jobs);
        if (opt.oracle) {
          if (fm.graph.n > 5) throw oracles::budget_error("oracle budget exceeded");
          bool exhaustive_ok = !body_bar_pin_violating_partition(fm).has_value();
          if (exhaustive_ok != rep.ok())
            throw internal_error("partition enumeration disagrees with the rank decision");
        }
        break;
      }
      case FrameworkKind::bar_joint_bar: {
        res.result["model"] = "bar_joint_bar";
        rep = check_bar_joint_bar(fm, opt.jobs);
        verify_witness(pi, rep, 2, 3);
        break;
      }
      case FrameworkKind::bar_joint_pin: {
        res.result["model"] = "bar_joint_pin";
        rep = check_pinned_bar_joint(fm.graph, fm.pinned, opt.jobs);
        break;
      }
      case FrameworkKind::bar_joint_slider: {
        res.result["model"] = "bar_joint_slider";
        rep = check_bar_slider(fm, opt.jobs);
        break;
      }
    }
    const bool ok = rep.ok();
    res.result["verdict"] = ok ? "rigid" : "flexible";
    res.result["conditions"] = report_json(pi, rep);
    res.exit_code = ok ? exit_ok : exit_infeasible;

    if (realize && ok) {
      FrameworkModel realized = fm;
      switch (fm.kind) {
        case FrameworkKind::body_bar_bar:
          realized = realize_body_bar(fm, opt.jobs);
          break;
        case FrameworkKind::body_bar_pin:
          realized = realize_body_bar_pin(fm, opt.jobs);
          break;
        case FrameworkKind::bar_joint_bar:
          realized = realize_bar_joint_bar(fm, opt.jobs);
          break;
        case FrameworkKind::bar_joint_slider: {
          FrameworkModel pinned = slider_to_pinned(fm);
          Json conv;
          Json pv = Json::array();
          for (int v : pinned.pinned) pv.push_back(pinned.graph.vertex_name(v));
          conv["pinned"] = std::move(pv);
          Json pl;
          for (const auto& [v, p] : pinned.placements) pl[pinned.graph.vertex_name(v)] = vec_json(p);
          conv["placements"] = std::move(pl);
          Json edges = Json::array();
          for (auto [u, v] : pinned.graph.edges)
            edges.push_back(Json::array({pinned.graph.vertex_name(u), pinned.graph.vertex_name(v)}));
          conv["edges"] = std::move(edges);
          res.result["converted_pinned"] = std::move(conv);
          break;
        }
        case FrameworkKind::bar_joint_pin:
          break;  // nothing to construct; the placement is part of the input
      }
      Json rj = realized_framework_json(pi, realized);
      if (!rj.is_null() && !rj.empty()) res.result["realization"] = std::move(rj);
      if (certify && (fm.kind == FrameworkKind::body_bar_bar ||
                      fm.kind == FrameworkKind::body_bar_pin ||
                      fm.kind == FrameworkKind::bar_joint_bar)) {
        res.result["certificate"] = certificate_json(certify_rank(rigidity_matrix(realized)));
        attach_timing(res.result, opt, sw);
        return res;
      }
    }

    if (certify) {
      // certify whatever geometry the instance itself carries
      std::optional<RankCertificate> cert;
      if (fm.kind == FrameworkKind::bar_joint_pin && !fm.placements.empty()) {
        cert = certify_rank(pinned_rigidity_matrix(fm));
        long long target = 2ll * (fm.graph.n - (long long)fm.pinned.size());
        res.result["certified_rigid"] = cert->rank == target;
      } else if (fm.kind == FrameworkKind::bar_joint_slider && !fm.placements.empty()) {
        cert = certify_rank(slider_rigidity_matrix(fm));
        res.result["certified_rigid"] = cert->rank == 2ll * fm.graph.n;
      } else if (!fm.bars.empty() && fm.bars.size() == fm.graph.edges.size()) {
        cert = certify_rank(rigidity_matrix(fm));
      } else if (res.exit_code == exit_ok) {
        res.result["note"] = "use --realize to build geometry before certifying";
      }
      if (cert) res.result["certificate"] = certificate_json(*cert);
    }
  } catch (const geometry_error& e) {
    res.result["verdict"] = "geometry_violation";
    res.result["error"] = e.what();
    res.exit_code = exit_geometry;
  }
  attach_timing(res.result, opt, sw);
  return res;
}

}  // namespace mtd::io
