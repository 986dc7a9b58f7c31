// Copyright 2026 The btb-equilibria Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "commands.h"

int main(int argc, char** argv) {
  using btb::cli::CliOptions;
  CLI::App app{"Equilibria and ban-the-box welfare analysis for the "
               "qualification/hiring game"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  CliOptions opt;
  app.add_option("--config", opt.config_path, "JSON configuration file");
  app.add_option("--out", opt.out_dir,
                 "Output directory (default: $BTB_OUT_DIR, then ./btb_out)");
  app.add_option("--format", opt.format, "Machine-readable report format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", opt.seed, "Monte Carlo seed");
  app.add_option("--eps", opt.eps, "Boundary tolerance");
  app.add_flag("--quiet,-q", opt.quiet, "Suppress the report on stdout");

  app.add_subcommand("solve", "Enumerate and Pareto-rank single-group equilibria");
  app.add_subcommand("compare", "Compare the market with and without the box");
  CLI::App* verify = app.add_subcommand(
      "verify", "Check solver output against the numerical oracles");
  verify->add_option("--debug-perturb", opt.debug_perturb,
                     "Shift the selected equilibrium's qualification rate "
                     "(negative control; verification must fail)");
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo payoffs of a chosen strategy profile");
  simulate->add_option("--chi", opt.chi, "Qualification probability")
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--eta", opt.eta, "Hiring probability on a garbled result")
      ->check(CLI::Range(0.0, 1.0));
  app.add_subcommand("sweep", "Region map over a parameter grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return btb::cli::kExitValidation;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  return btb::cli::RunCommand(command, opt, std::cout, std::cerr);
}
