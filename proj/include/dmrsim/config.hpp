/* Copyright 2026 The dmrsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#pragma once

#include <filesystem>
#include <string_view>

#include "dmrsim/profiles.hpp"
#include "dmrsim/reconfig.hpp"
#include "dmrsim/scheduler.hpp"

namespace dmrsim {

struct EnergyModel {
  double idle_w = 100.0;
  double loaded_w = 340.0;
};

/// Everything a run needs besides the job list. Defaults describe a
/// 128-node cluster with a 10 s backfill interval and a 32-node job cap.
struct RunConfig {
  int total_nodes = 128;
  ProcCount job_cap = 32;
  double tick_s = 10.0;
  PriorityScheme priority = PriorityScheme::Fcfs;
  /// When false, malleable jobs never consult the resize policy.
  bool malleability = true;
  OverheadModel overhead;
  EnergyModel energy;
  double threshold_pct = kDefaultThresholdPct;
  /// Empty means the profiles shipped with the build.
  std::filesystem::path profiles_dir;

  /// Throws InvalidSpec.
  void validate() const;
};

/// JSON document, every key optional:
///   {"cluster":    {"total_nodes": 128, "job_cap": 32},
///    "scheduler":  {"tick_s": 10, "priority": "fcfs", "malleability": true},
///    "overhead":   {"spawn_base_s": 1, "spawn_per_proc_s": 0.05,
///                   "bandwidth_bytes_per_s": 12.5e9, "latency_s": 0},
///    "energy":     {"idle_w": 100, "loaded_w": 340},
///    "malleability": {"threshold_pct": 10},
///    "profiles_dir": "path, relative to the config file"}
/// Unknown keys are rejected.
[[nodiscard]] RunConfig parse_run_config(std::string_view text,
                                         const std::filesystem::path& base_dir = {},
                                         std::string_view origin = "<config>");
[[nodiscard]] RunConfig load_run_config(const std::filesystem::path& path);

/// Profiles directory shipped with the build.
[[nodiscard]] std::filesystem::path default_profiles_dir();
[[nodiscard]] std::filesystem::path profiles_dir_of(const RunConfig& config);

}  // namespace dmrsim
