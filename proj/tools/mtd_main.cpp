#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mtd/io.hpp"

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw mtd::input_error("cannot open instance file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_result(const mtd::io::CommandResult& res, const std::string& out_path) {
  std::string text = res.result.dump(2) + "\n";
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw mtd::input_error("cannot open output file: " + out_path);
    out << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matroid-constrained rooted-tree decompositions and rigidity checks"};
  app.require_subcommand(1);

  std::string instance_path, out_path;
  int jobs = 1;
  bool oracle = false, timing = false;
  app.add_option("-o,--output", out_path, "result file (default: stdout)");
  app.add_option("--jobs", jobs, "worker threads for the per-edge count checks")
      ->check(CLI::PositiveNumber);
  app.add_flag("--oracle", oracle, "cross-check against the brute-force oracles (small inputs)");
  app.add_flag("--timing", timing, "include timing_ms in the result");

  auto* check = app.add_subcommand("check", "decide the decomposability conditions");
  check->add_option("instance", instance_path, "instance JSON file or - for stdin")->required();

  auto* decompose = app.add_subcommand("decompose", "construct a basic rooted-tree decomposition");
  std::string dot_path;
  bool dual = false;
  decompose->add_option("instance", instance_path, "instance JSON file or - for stdin")->required();
  decompose->add_flag("--dual", dual, "rooted-component packing instead of tree partition");
  decompose->add_option("--dot", dot_path, "write a DOT rendering of the parts");

  auto* rigidity = app.add_subcommand("rigidity", "boundary-framework rigidity checks");
  bool realize = false, certify = false;
  rigidity->add_option("instance", instance_path, "instance JSON file or - for stdin")->required();
  rigidity->add_flag("--realize", realize, "construct bar configurations / placements");
  rigidity->add_flag("--certify", certify, "emit an exact rank certificate");

  CLI11_PARSE(app, argc, argv);

  try {
    mtd::io::ParsedInstance pi = mtd::io::parse_instance(read_input(instance_path));
    mtd::io::CmdOptions opt{jobs, oracle, timing};
    mtd::io::CommandResult res;
    if (check->parsed()) {
      res = mtd::io::cmd_check(pi, opt);
    } else if (decompose->parsed()) {
      res = mtd::io::cmd_decompose(pi, dual, !dot_path.empty(), opt);
      if (!dot_path.empty() && !res.dot.empty()) {
        std::ofstream dot(dot_path);
        if (!dot) throw mtd::input_error("cannot open DOT output file: " + dot_path);
        dot << res.dot;
      }
    } else {
      res = mtd::io::cmd_rigidity(pi, realize, certify, opt);
    }
    write_result(res, out_path);
    return res.exit_code;
  } catch (const mtd::oracles::budget_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mtd::io::exit_budget;
  } catch (const mtd::geometry_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mtd::io::exit_geometry;
  } catch (const mtd::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mtd::io::exit_input_error;
  } catch (const mtd::internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;
  }
}
