#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmlax/cli.hpp"

int main(int argc, char **argv)
{
  using namespace cmlax::cli;

  CLI::App app{"Spin Calogero-Moser systems in matrix and Lax form"};
  app.require_subcommand(1);

  RunOptions options;
  std::string out_dir;
  std::string format;
  std::string direction;
  std::vector<std::string> configs;
  bool parallel = false;

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("configs", configs, "Config file(s)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory (overrides the config)");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--parallel", parallel,
                  "Run several configs concurrently (capped by CM_LAX_THREADS)");
  };

  CLI::App *simulate = app.add_subcommand("simulate", "Run the configured flow");
  add_common(simulate);
  CLI::App *convert = app.add_subcommand("convert", "Convert between particle and quiver form");
  add_common(convert);
  convert->add_option("--to", direction, "Target representation")
    ->required()
    ->check(CLI::IsMember({"particle", "quiver"}));
  CLI::App *invariants =
    app.add_subcommand("invariants", "Evaluate Hamiltonians and Poisson brackets");
  add_common(invariants);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (!out_dir.empty())
  {
    options.out = out_dir;
  }
  if (!format.empty())
  {
    options.format = format;
  }

  Command command;
  if (simulate->parsed())
  {
    command = cmd_simulate;
  }
  else if (invariants->parsed())
  {
    command = cmd_invariants;
  }
  else
  {
    command = [&](const std::string &path, const RunOptions &o, std::ostream &os,
                  std::ostream &es) { return cmd_convert(path, direction, o, os, es); };
  }
  return run_sweep(command, configs, options, parallel, std::cout, std::cerr);
}
