#pragma once

#include "mtd/oracles.hpp"
#include "mtd/rigidity.hpp"

// vendored single-header nlohmann/json
#include "json.hpp"

namespace mtd::io {

using Json = nlohmann::ordered_json;

// A parsed instance file: the graph, its matroid, optional framework block,
// and the name tables needed to emit results in user vocabulary.
struct ParsedInstance {
  GraphWithRoots graph;
  MatroidHandle matroid;
  std::optional<FrameworkModel> framework;
  std::vector<std::string> elem_names;  // matroid element id -> name
  Json raw_matroid;                     // original block, kept for stable emission
  Json raw_framework;
};

ParsedInstance parse_instance(const std::string& text);
ParsedInstance parse_instance_json(const Json& j);
Json emit_instance(const ParsedInstance& pi);

struct CmdOptions {
  int jobs = 1;
  bool oracle = false;
  bool timing = false;
};

// exit codes: 0 feasible/rigid, 1 infeasible/flexible, 2 input error,
// 3 geometric assumption violated, 4 oracle budget exceeded
enum ExitCode {
  exit_ok = 0,
  exit_infeasible = 1,
  exit_input_error = 2,
  exit_geometry = 3,
  exit_budget = 4,
};

struct CommandResult {
  int exit_code = exit_ok;
  Json result;
  std::string dot;  // nonempty when DOT output was requested
};

CommandResult cmd_check(const ParsedInstance& pi, const CmdOptions& opt);
CommandResult cmd_decompose(const ParsedInstance& pi, bool dual, bool want_dot,
                            const CmdOptions& opt);
CommandResult cmd_rigidity(const ParsedInstance& pi, bool realize, bool certify,
                           const CmdOptions& opt);

std::string decomposition_dot(const ParsedInstance& pi, const Decomposition& dec);

}  // namespace mtd::io
