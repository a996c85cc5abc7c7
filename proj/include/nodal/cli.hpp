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

#ifndef NODAL_CLI_HPP_
#define NODAL_CLI_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nodal/simulation.hpp"

namespace nodal {

struct CliOptions {
  SimConfig config;
  std::filesystem::path out_dir = "results";
  unsigned threads = 0;
  bool help = false;
  std::string help_text;
};

// Builds the effective configuration: preset (default calibrated), then an
// optional --config file, then explicit flags, then SIM_SEED if given.
// Throws ConfigError with a kind per failure class.
CliOptions parse_config(const std::vector<std::string>& args,
                        const std::optional<std::string>& sim_seed_env = std::nullopt);

}  // namespace nodal

#endif  // NODAL_CLI_HPP_
