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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dmrsim {

/// Number of nodes (one process per node).
using ProcCount = int;

/// How many iterations a job of this application runs. Either a fixed count,
/// or a count proportional to the number of worker ranks at start
/// (allocation minus ranks reserved for I/O).
struct IterationRule {
  std::int64_t fixed = 0;
  std::int64_t per_worker = 0;
  ProcCount io_ranks = 0;

  [[nodiscard]] std::int64_t iterations_for(ProcCount procs) const;
  [[nodiscard]] bool scales_with_workers() const { return per_worker > 0; }
};

struct ApplicationProfile {
  std::string name;
  /// Completion seconds at `reference_iterations`, keyed by process count.
  std::map<ProcCount, double> measured_timings;
  std::int64_t reference_iterations = 1;
  std::int64_t bytes_per_process = 0;
  ProcCount min_feasible_procs = 1;
  double inhibitor_period_s = 0.0;
  std::int64_t inhibitor_iterations = 0;
  IterationRule job_iterations{};

  /// Throws InvalidProfile describing the first violated invariant.
  void validate() const;

  [[nodiscard]] std::vector<ProcCount> configurations() const;
  [[nodiscard]] ProcCount smallest_configuration() const;
  [[nodiscard]] bool is_configuration(ProcCount procs) const {
    return measured_timings.contains(procs);
  }
};

/// Gain difference per process count, relative to the smallest measured
/// configuration (`reference_procs`), which itself has no entry.
struct GainCurve {
  ProcCount reference_procs = 1;
  std::map<ProcCount, double> entries;
};

struct MalleabilityParams {
  ProcCount lower = 1;
  ProcCount upper = 1;
  ProcCount preferred = 1;

  friend bool operator==(const MalleabilityParams&, const MalleabilityParams&) = default;
};

inline constexpr double kDefaultThresholdPct = 10.0;

/// s(p) = (t(prev) - t(p)) / t(smallest) * 100 for every measured p after
/// the smallest. Throws InsufficientData with fewer than two points.
[[nodiscard]] GainCurve gain_difference(const ApplicationProfile& profile);

/// Threshold heuristic:
///   lower     first configuration whose gain exceeds the threshold
///   preferred last configuration before the gain drops below the threshold
///   upper     last configuration before the gain drops below zero
/// Apps that never exceed the threshold get lower = preferred = reference.
/// Every value is clamped to the largest configuration <= cluster_cap.
[[nodiscard]] MalleabilityParams derive_malleability_params(const GainCurve& curve,
                                                            double threshold_pct,
                                                            ProcCount cluster_cap);

/// measured_timings[procs] * iterations / reference_iterations. No
/// interpolation: unmeasured counts raise UnknownConfiguration.
[[nodiscard]] double execution_time(const ApplicationProfile& profile, ProcCount procs,
                                    std::int64_t iterations);

/// Loads a profile from its JSON document. ParseError names the bad field.
[[nodiscard]] ApplicationProfile parse_profile(std::string_view text,
                                               std::string_view origin = "<profile>");
[[nodiscard]] ApplicationProfile load_profile(const std::filesystem::path& path);

/// Every `*.json` profile in a directory, keyed by profile name.
[[nodiscard]] std::map<std::string, ApplicationProfile> load_profile_dir(
    const std::filesystem::path& dir);

}  // namespace dmrsim
