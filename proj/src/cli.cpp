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

#include "nodal/cli.hpp"

#include <CLI11.hpp>

#include <charconv>

namespace nodal {

CliOptions parse_config(const std::vector<std::string>& args,
                        const std::optional<std::string>& sim_seed_env) {
  CLI::App app{"Multi-path redundancy simulator under physical-layer attacks", "nodal_sim"};
  app.set_config("--config", "", "INI/TOML file with flag=value lines");

  std::string preset = "calibrated";
  std::string topology;
  SimConfig raw;
  std::string out_dir = "results";
  unsigned threads = 0;

  app.add_option("--preset", preset, "calibrated | no-attacks");
  auto* o_topology = app.add_option("--topology", topology,
                                    "figure1 | figure1-redundant | generated:n,u,l,o,r");
  auto* o_ticks = app.add_option("--ticks", raw.ticks, "ticks per trial");
  auto* o_messages = app.add_option("--messages", raw.messages_per_trial, "messages per trial");
  auto* o_critical = app.add_option("--critical-fraction", raw.critical_fraction,
                                    "fraction of messages marked critical");
  auto* o_budget = app.add_option("--budget", raw.duplication_budget,
                                  "non-critical messages duplicated per trial");
  auto* o_tap = app.add_option("--rate-tap", raw.rates.tap, "TAP probability per edge per tick");
  auto* o_corrupt = app.add_option("--rate-corrupt", raw.rates.corrupt,
                                   "CORRUPT probability per edge per tick");
  auto* o_sever = app.add_option("--rate-sever", raw.rates.sever,
                                 "SEVER probability per edge per tick");
  auto* o_min_dur = app.add_option("--min-duration", raw.min_attack_duration,
                                   "shortest attack in ticks");
  auto* o_max_dur = app.add_option("--max-duration", raw.max_attack_duration,
                                   "longest attack in ticks");
  auto* o_weighted = app.add_flag("--weighted-attacks", raw.criticality_weighted_attacks,
                                  "place attacks proportionally to edge criticality");
  auto* o_payload_only = app.add_flag("--payload-only-attacker", raw.payload_only_attacker,
                                      "CORRUPT leaves the carried digest untouched");
  auto* o_retries = app.add_option("--max-retries", raw.max_retries, "retransmissions per message");
  auto* o_trials = app.add_option("--trials", raw.trials, "trials per mode");
  auto* o_seed = app.add_option("--seed", raw.seed, "experiment seed (SIM_SEED overrides)");
  app.add_option("--out-dir", out_dir, "directory for baseline.csv, protocol.csv, report.txt");
  app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    CliOptions help;
    help.help = true;
    help.help_text = app.help();
    return help;
  } catch (const CLI::ExtrasError& e) {
    throw ConfigError(ConfigError::Kind::kUnknownFlag, e.what());
  } catch (const CLI::FileError& e) {
    throw ConfigError(ConfigError::Kind::kMalformedFile, e.what());
  } catch (const CLI::ConfigError& e) {
    throw ConfigError(ConfigError::Kind::kMalformedFile, e.what());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(ConfigError::Kind::kInvalid, e.what());
  }

  CliOptions out;
  out.config = preset_by_name(preset);
  SimConfig& cfg = out.config;
  if (o_topology->count()) cfg.topology = TopologySpec::Parse(topology);
  if (o_ticks->count()) cfg.ticks = raw.ticks;
  if (o_messages->count()) cfg.messages_per_trial = raw.messages_per_trial;
  if (o_critical->count()) cfg.critical_fraction = raw.critical_fraction;
  if (o_budget->count()) cfg.duplication_budget = raw.duplication_budget;
  if (o_tap->count()) cfg.rates.tap = raw.rates.tap;
  if (o_corrupt->count()) cfg.rates.corrupt = raw.rates.corrupt;
  if (o_sever->count()) cfg.rates.sever = raw.rates.sever;
  if (o_min_dur->count()) cfg.min_attack_duration = raw.min_attack_duration;
  if (o_max_dur->count()) cfg.max_attack_duration = raw.max_attack_duration;
  if (o_weighted->count()) cfg.criticality_weighted_attacks = raw.criticality_weighted_attacks;
  if (o_payload_only->count()) cfg.payload_only_attacker = raw.payload_only_attacker;
  if (o_retries->count()) cfg.max_retries = raw.max_retries;
  if (o_trials->count()) cfg.trials = raw.trials;
  if (o_seed->count()) cfg.seed = raw.seed;
  if (sim_seed_env && !sim_seed_env->empty()) {
    const std::string& s = *sim_seed_env;
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError(ConfigError::Kind::kInvalid, "SIM_SEED is not an unsigned integer: " + s);
    }
    cfg.seed = seed;
  }
  cfg.Validate();
  out.out_dir = out_dir;
  out.threads = threads;
  return out;
}

}  // namespace nodal
