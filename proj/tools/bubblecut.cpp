// Copyright 2026 The BubbleCut Authors.
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


// bubblecut <verb> --config PATH [--out DIR] [--seed N] [--verbose]

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bubblecut/config.hpp"
#include "bubblecut/error.hpp"
#include "bubblecut/run.hpp"

int main(int argc, char** argv) {
  using namespace bubblecut;
  CLI::App app{"Mean-curvature bubbles, exhaustions and convex functions on metric grids"};
  std::string verb;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool verbose = false;
  app.add_option("verb", verb, "operation to run")
      ->required()
      ->check(CLI::IsMember(operation_names()));
  app.add_option("--config", config_path, "JSON run configuration")->required();
  auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides output_dir)");
  auto* seed_opt = app.add_option("--seed", seed, "Morse perturbation seed (overrides seed)");
  app.add_flag("--verbose", verbose, "log progress to stderr");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors share the error status with every other failure.
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  RunConfig config;
  try {
    config = load_config(config_path);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitError;
  }
  if (config.operation != verb) {
    if (config.operation != RunConfig{}.operation) {
      std::cerr << "cli-io: verb '" << verb << "' does not match the configured operation '"
                << config.operation << "'\n";
      return kExitError;
    }
    config.operation = verb;
  }
  if (*out_opt) config.output_dir = out_dir;
  if (*seed_opt) config.seed = seed;

  RunOptions options;
  options.base_dir = std::filesystem::path(config_path).parent_path();
  options.verbose = verbose;
  return run(config, options);
}
