#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "anholonomy/cli.hpp"

namespace cli = anholonomy::cli;

int main(int argc, char** argv) {
  CLI::App app{"hierarchical-circuit anholonomy toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_path = "-";
  std::string format_flag;
  long long steps_flag = -1;
  long long cycles_flag = -1;

  const std::pair<const char*, const char*> subcommands[] = {
      {"spectrum", "eigenangle table over one parameter cycle"},
      {"itinerary", "orbit of the all-zero label under the cycle map"},
      {"invariants", "permutation cycles, sigma, gamma, nu for one parameter set"},
      {"holonomy", "closed-form vs numerically transported cycle matrix"},
      {"winding", "quadrature winding number vs the exact slope"},
      {"subset-sum", "ladder weights, residue decode table, solver work"},
      {"verify", "run the cross-module invariant suite"},
  };
  for (const auto& [name, description] : subcommands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config_path, "configuration file (key = value lines)");
    sub->add_option("--steps", steps_flag, "override the lambda grid size");
    sub->add_option("--cycles", cycles_flag, "override the itinerary cycle count");
    sub->add_option("--format", format_flag, "override the output format (csv | json)");
    sub->add_option("--output", output_path, "output path; '-' is standard output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    cli::emit_error(std::cerr, "usage", e.what());
    return 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();

  cli::RunConfig config;
  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      cli::emit_error(std::cerr, "io", "cannot read config file '" + config_path + "'");
      return 2;
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
      config = cli::parse_config(text.str());
    } catch (const cli::ParseError& e) {
      cli::emit_error(std::cerr, "parse", config_path + ": " + e.what());
      return 2;
    }
  } else if (name != "verify") {
    cli::emit_error(std::cerr, "usage", "the " + name + " subcommand needs --config");
    return 2;
  }

  if (steps_flag != -1) {
    if (steps_flag < 2 || steps_flag > 4194304) {
      cli::emit_error(std::cerr, "usage", "--steps must be between 2 and 4194304");
      return 2;
    }
    config.steps = steps_flag;
  }
  if (cycles_flag != -1) {
    if (cycles_flag < 1 || cycles_flag > 1048576) {
      cli::emit_error(std::cerr, "usage", "--cycles must be between 1 and 1048576");
      return 2;
    }
    config.cycles = cycles_flag;
  }
  if (!format_flag.empty()) {
    if (format_flag == "csv") {
      config.format = cli::Format::csv;
    } else if (format_flag == "json") {
      config.format = cli::Format::json;
    } else {
      cli::emit_error(std::cerr, "usage", "--format must be csv or json");
      return 2;
    }
  }

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (output_path != "-") {
    file.open(output_path, std::ios::binary);
    if (!file) {
      cli::emit_error(std::cerr, "io", "cannot open output file '" + output_path + "'");
      return 2;
    }
    out = &file;
  }

  const int code = cli::run(name, config, *out, std::cerr);
  out->flush();
  if (out == &file && !file) {
    cli::emit_error(std::cerr, "io", "writing '" + output_path + "' failed");
    return 2;
  }
  return code;
}
