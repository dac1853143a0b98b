// Copyright 2026 The mbtlite Authors.
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

// mbt validate --suite S
// mbt generate --suite S [--generator G] [--stop C] [--seed N]
// mbt run      --suite S --sut U --out DIR [--generator G] [--stop C] [--seed N]
//              [--interval SECONDS] [--on-failure abort|continue]
// mbt report   --out DIR

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mbt/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Model-based test generation and execution"};
  app.require_subcommand(1);

  mbt::RunOptions opts;
  std::string suite;

  auto* validate = app.add_subcommand("validate", "Check a suite and print diagnostics");
  validate->add_option("--suite", suite, "Suite JSON file")->required();

  auto* generate = app.add_subcommand("generate", "Print an offline path");
  generate->add_option("--suite", suite, "Suite JSON file")->required();
  generate->add_option("--generator", opts.generator, "random | weighted | quickrandom | "
                                                      "astar:<model>/<element>")
      ->capture_default_str();
  generate->add_option("--stop", opts.stop, "Stop condition")->capture_default_str();
  generate->add_option("--seed", opts.seed, "PRNG seed")->capture_default_str();

  auto* run = app.add_subcommand("run", "Run online against a simulated SUT");
  run->add_option("--suite", suite, "Suite JSON file")->required();
  run->add_option("--sut", opts.sut_path, "SUT spec JSON file")->required();
  run->add_option("--generator", opts.generator, "Path generator")->capture_default_str();
  run->add_option("--stop", opts.stop, "Stop condition")->capture_default_str();
  run->add_option("--seed", opts.seed, "PRNG seed")->capture_default_str();
  run->add_option("--interval", opts.interval_s, "Snapshot interval in seconds")
      ->capture_default_str();
  run->add_option("--on-failure", opts.on_failure, "abort | continue")
      ->check(CLI::IsMember({"abort", "continue"}))
      ->capture_default_str();
  run->add_option("--out", opts.out_dir, "Artifact directory")->required();

  auto* report = app.add_subcommand("report", "Re-derive the summary from run artifacts");
  report->add_option("--out", opts.out_dir, "Artifact directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? mbt::kExitPass : mbt::kExitError;
  }

  if (validate->parsed()) return mbt::cmd_validate(suite, std::cerr);
  if (generate->parsed()) {
    return mbt::cmd_generate(suite, opts.generator, opts.stop, opts.seed, std::cout, std::cerr);
  }
  if (run->parsed()) {
    opts.suite_path = suite;
    return mbt::cmd_run(opts, std::cout, std::cerr);
  }
  return mbt::cmd_report(opts.out_dir, std::cout, std::cerr);
}
