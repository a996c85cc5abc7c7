// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <iostream>

#include "nodal/cli.hpp"
#include "nodal/experiment.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> env_seed;
  if (const char* s = std::getenv("SIM_SEED")) env_seed = s;

  nodal::CliOptions opts;
  try {
    opts = nodal::parse_config(args, env_seed);
  } catch (const nodal::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  if (opts.help) {
    std::cout << opts.help_text;
    return 0;
  }

  std::cout << opts.config.Echo() << "out-dir=" << opts.out_dir.string() << '\n';
  try {
    const nodal::ExperimentResult result = nodal::run_experiment(opts.config, opts.threads);
    nodal::write_outputs(result, opts.out_dir);
    std::cout << result.report.str();
    if (!result.ok()) {
      std::cerr << "invariant check failed: " << result.schedule_mismatches
                << " schedule mismatches, " << result.invariant_failures
                << " bad rows\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
