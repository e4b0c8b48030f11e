#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "jtbound/commands.hpp"

namespace {

void add_common(CLI::App* sub, jtb::RunConfig& c, std::string& format) {
  sub->add_option("--seed", c.seed, "Random seed");
  sub->add_option("--tol", c.tol, "Inequality tolerance (nats)")->check(CLI::NonNegativeNumber);
  sub->add_option("--max-states", c.max_states, "Largest dense state space")->check(CLI::PositiveNumber);
  sub->add_option("--max-vertices", c.max_vertices, "Largest graph to enumerate")->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out_path, "Write the report here instead of stdout");
  sub->add_option("--format", format, "Report format")->check(CLI::IsMember({"structured", "human"}));
  sub->add_flag("--allow-zeros", c.allow_zeros, "Let generated kernels contain zeros");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sub-junction-tree lower bounds on the log partition function"};
  app.require_subcommand(1);
  jtb::RunConfig c;
  std::string format = "human";
  std::string enumerate = "spanning";
  std::string strategy = "exhaustive";
  std::string fault;

  auto* solve = app.add_subcommand("solve", "Exact ln Z and marginals");
  solve->add_option("--model", c.model_path, "Model file")->required();
  add_common(solve, c, format);

  auto* bounds = app.add_subcommand("bounds", "Sub-tree bound catalog");
  bounds->add_option("--model", c.model_path, "Model file")->required();
  bounds->add_option("--enumerate", enumerate, "Sub-tree family")->check(CLI::IsMember({"spanning", "exhaustive"}));
  bounds->add_option("--strategy", strategy, "Min-entropy search")->check(CLI::IsMember({"exhaustive", "greedy"}));
  add_common(bounds, c, format);

  auto* verify = app.add_subcommand("verify", "Run the inequality suite");
  verify->add_option("--family", c.families, "Instance family, repeatable (default: cycle(3) and 2x2..3x3 grids)");
  verify->add_option("--instances", c.instances, "Number of instances");
  verify->add_option("--enumerate", enumerate, "Sub-tree family")->check(CLI::IsMember({"spanning", "exhaustive"}));
  verify->add_option("--inject-fault", fault, "INSTANCE:ENTRY, add 1 to that catalog bound")->group("");
  add_common(verify, c, format);

  auto* gen = app.add_subcommand("gen", "Generate a model file");
  gen->add_option("--family", c.families, "grid(m,n[,lo,hi]) | cycle(k[,lo,hi]) | random_junction(M,max_label)")
      ->required()
      ->expected(1);
  add_common(gen, c, format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : jtb::kExitUsage;
  }

  c.command = app.get_subcommands().front()->get_name();
  c.format = format == "structured" ? jtb::ReportFormat::structured : jtb::ReportFormat::human;
  c.enumerate = enumerate == "exhaustive" ? jtb::EnumerationMode::exhaustive : jtb::EnumerationMode::spanning_only;
  c.strategy = strategy == "greedy" ? jtb::Strategy::greedy : jtb::Strategy::exhaustive;
  if (!fault.empty()) {
    const auto colon = fault.find(':');
    try {
      jtb::FaultInjection f;
      f.instance = std::stoul(fault.substr(0, colon));
      if (colon != std::string::npos) f.entry = std::stoul(fault.substr(colon + 1));
      c.inject_fault = f;
    } catch (const std::exception&) {
      std::cerr << "error: --inject-fault expects INSTANCE:ENTRY\n";
      return jtb::kExitUsage;
    }
  }
  return jtb::run_command(c, std::cout, std::cerr);
}
