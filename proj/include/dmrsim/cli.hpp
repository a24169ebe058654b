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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dmrsim/config.hpp"
#include "dmrsim/metrics.hpp"
#include "dmrsim/workload.hpp"

namespace dmrsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInternal = 2;

/// Workload description file (JSON):
///   {"num_jobs": 1000,
///    "app_mix": {"cg": 0.25, "jacobi": 0.25, "nbody": 0.25, "hpg": 0.25},
///    "class": "fixed" | "moldable" | "malleable" | "flexible"
///           | {"malleable_pct": 50, "submission": "rigid"}
///           | {"malleable_apps": ["nbody"], "submission": "moldable"},
///    "arrival_mean_s": 40}
/// The seed is never read from the file.
[[nodiscard]] WorkloadSpec parse_workload_spec(std::string_view text,
                                               std::string_view origin = "<spec>");

/// Catalog of the configured profiles with parameters derived at the
/// configured threshold and job cap.
[[nodiscard]] AppCatalog load_catalog(const RunConfig& config);

struct ProfileOptions {
  std::filesystem::path profile_file;
  double threshold_pct = kDefaultThresholdPct;
  ProcCount cluster_cap = 32;
};
void cmd_profile(const ProfileOptions& opts, std::ostream& out);

struct ClassOverrides {
  std::optional<double> malleable_pct;
  std::vector<std::string> malleable_apps;
};

/// Applies --malleable-fraction / --malleable-apps to a spec, keeping the
/// submission mode implied by its current rule.
void apply_overrides(WorkloadSpec& spec, const ClassOverrides& overrides);

struct GenOptions {
  std::filesystem::path spec_file;
  std::optional<std::filesystem::path> config_file;
  std::uint64_t seed = 0;
  std::filesystem::path out_file;
  ClassOverrides overrides;
};
void cmd_gen(const GenOptions& opts, std::ostream& out);

struct SimOptions {
  std::filesystem::path workload_file;
  std::optional<std::filesystem::path> config_file;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
};
void cmd_sim(const SimOptions& opts, std::ostream& out);

struct SweepVariant {
  std::string name;
  SubmissionMode submission = SubmissionMode::Rigid;
  ClassRule rule;
};

struct SweepResult {
  SweepVariant variant;
  MetricsReport report;
};

struct SweepOptions {
  std::filesystem::path spec_file;
  std::optional<std::filesystem::path> config_file;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  std::vector<JobClass> classes{JobClass::Fixed, JobClass::PureMoldable, JobClass::PureMalleable,
                                JobClass::Flexible};
  std::vector<double> malleable_pcts;
  std::vector<std::string> malleable_apps;
};

/// Variants in output order: the uniform classes, then for each fraction a
/// rigid and a moldable mix, then for each app a rigid and a moldable
/// "only this app is malleable" workload.
[[nodiscard]] std::vector<SweepVariant> sweep_variants(const SweepOptions& opts);

/// Runs every variant of the same base job list (concurrently) and returns
/// the reports in variant order.
[[nodiscard]] std::vector<SweepResult> run_sweep(const WorkloadSpec& base,
                                                 const std::vector<SweepVariant>& variants,
                                                 const AppCatalog& catalog, const RunConfig& config,
                                                 std::uint64_t seed);

/// variant,submission,jobs,avg_waiting,avg_execution,avg_completion,makespan,
/// allocation_rate,energy_kwh,resizes,speedup_waiting_vs_fixed,
/// speedup_execution_vs_fixed,speedup_completion_vs_fixed,
/// speedup_completion_vs_moldable,makespan_pct_of_fixed,energy_pct_of_fixed
/// Comparison cells are empty when the reference variant was not run.
[[nodiscard]] std::string sweep_csv(const std::vector<SweepResult>& results);

void cmd_sweep(const SweepOptions& opts, std::ostream& out);

/// Parses argv and dispatches; returns the process exit code.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace dmrsim::cli
