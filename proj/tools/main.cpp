// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "runner.hpp"

using invacheck::cli::CliOptions;
using invacheck::cli::json;
using invacheck::cli::RunOutcome;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invacheck::UsageError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw invacheck::UsageError(std::string("JSON parse error: ") + e.what());
  }
  return j;
}

void emit(const RunOutcome& out, const std::string& out_path, bool summary) {
  const std::string text = out.report.dump(2) + "\n";
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw invacheck::UsageError("cannot open " + out_path);
    f << text;
  } else {
    std::cout << text;
  }
  if (summary) std::cerr << invacheck::cli::summarize(out.report, out.wall_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invacheck — invariant-set verification for nonlinear dynamical systems"};
  app.require_subcommand(1);

  std::string file;
  std::string out_path;
  bool summary = false;
  CliOptions opts;
  std::vector<double> box_args;
  long long seed_arg = -1;
  int starts_arg = -1;
  std::string dump_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("file", file, "problem file (JSON)")->required();
    cmd->add_option("--out", out_path, "write the JSON report to this path");
    cmd->add_option("--seed", seed_arg, "RNG seed (overrides file and INVACHECK_SEED)");
    cmd->add_option("--box", box_args, "search box LO HI (applied to every coordinate)")
        ->expected(2);
    cmd->add_option("--starts", starts_arg, "multistart count override");
    cmd->add_flag("--summary", summary, "print a human-readable digest to stderr");
    cmd->add_option("--dump-samples", dump_path, "write set samples as CSV for plotting");
  };

  CLI::App* check = app.add_subcommand("check", "verify a supplied certificate (continuous checks need none)");
  CLI::App* certify = app.add_subcommand("certify", "search for a certificate");
  CLI::App* falsify = app.add_subcommand("falsify", "trajectory search for an escape");
  CLI::App* probe = app.add_subcommand("probe", "report curvature of the relevant hypotheses");
  CLI::App* center = app.add_subcommand("center", "shift an off-center ellipsoid problem to the origin");
  for (CLI::App* c : {check, certify, falsify, probe, center}) add_common(c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : invacheck::cli::kExitUsage;
  }

  if (seed_arg >= 0) opts.seed = static_cast<std::uint64_t>(seed_arg);
  if (const char* env = std::getenv("INVACHECK_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') opts.env_seed = v;
  }
  if (box_args.size() == 2) opts.box = {box_args[0], box_args[1]};
  if (starts_arg > 0) opts.starts = starts_arg;
  if (!dump_path.empty()) opts.dump_samples = dump_path;

  try {
    const json input = load_json(file);
    RunOutcome out;
    if (center->parsed())
      out = invacheck::cli::run_center(input);
    else if (check->parsed())
      out = invacheck::cli::run_command("check", input, opts);
    else if (certify->parsed())
      out = invacheck::cli::run_command("certify", input, opts);
    else if (falsify->parsed())
      out = invacheck::cli::run_command("falsify", input, opts);
    else
      out = invacheck::cli::run_command("probe", input, opts);
    emit(out, out_path, summary);
    return out.exit_code;
  } catch (const invacheck::cli::SchemaError& e) {
    std::cerr << "schema error at " << (e.pointer.empty() ? "/" : e.pointer) << ": " << e.what()
              << "\n";
    return invacheck::cli::kExitUsage;
  } catch (const invacheck::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return invacheck::cli::kExitUsage;
  } catch (const invacheck::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return invacheck::cli::kExitUsage;
  }
}
