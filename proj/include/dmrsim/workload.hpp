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
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dmrsim/profiles.hpp"
#include "dmrsim/scheduler.hpp"

namespace dmrsim {

/// Submission mode crossed with the malleable flag.
enum class JobClass { Fixed, PureMoldable, PureMalleable, Flexible };

[[nodiscard]] JobClass classify(SubmissionMode mode, bool malleable);
[[nodiscard]] SubmissionMode submission_of(JobClass cls);
[[nodiscard]] bool is_malleable(JobClass cls);

/// fixed, moldable, malleable, flexible
[[nodiscard]] std::string_view to_string(JobClass cls);
[[nodiscard]] JobClass parse_job_class(std::string_view name);

/// A profile together with the malleability parameters derived from it.
struct AppEntry {
  ApplicationProfile profile;
  MalleabilityParams params;
};
using AppCatalog = std::map<std::string, AppEntry, std::less<>>;

/// Derives every profile's parameters with the threshold heuristic.
[[nodiscard]] AppCatalog build_catalog(const std::map<std::string, ApplicationProfile>& profiles,
                                       double threshold_pct, ProcCount cluster_cap);

struct JobSubmission {
  JobId id = 0;
  double submit_time = 0.0;
  std::string app;
  JobClass cls = JobClass::Fixed;
  MalleabilityParams params;

  [[nodiscard]] SubmissionMode mode() const { return submission_of(cls); }
  [[nodiscard]] bool malleable() const { return is_malleable(cls); }
  /// Rigid submissions ask for the upper limit.
  [[nodiscard]] ProcCount rigid_request() const { return params.upper; }

  friend bool operator==(const JobSubmission&, const JobSubmission&) = default;
};

struct Heterogeneous {
  double malleable_pct = 0.0;
  SubmissionMode submission = SubmissionMode::Rigid;
};

struct PerApp {
  std::set<std::string, std::less<>> malleable_apps;
  SubmissionMode submission = SubmissionMode::Rigid;
};

using ClassRule = std::variant<JobClass, Heterogeneous, PerApp>;

inline constexpr double kDefaultArrivalMeanS = 40.0;

struct WorkloadSpec {
  int num_jobs = 0;
  std::vector<std::pair<std::string, double>> app_mix;
  ClassRule job_class = JobClass::Fixed;
  double arrival_mean_s = kDefaultArrivalMeanS;
  std::uint64_t seed = 0;

  /// Throws InvalidSpec.
  void validate(const AppCatalog& catalog) const;
};

/// Reproducible job list. Job 0 arrives at t = 0 and gaps are exponential
/// with mean arrival_mean_s. Every job consumes the same three draws (gap,
/// application, malleability) whatever the class rule, so specs differing
/// only in class rule yield the same arrivals and applications, and the
/// malleable subsets of Heterogeneous rules are nested in the percentage.
[[nodiscard]] std::vector<JobSubmission> generate(const WorkloadSpec& spec,
                                                  const AppCatalog& catalog);

/// Line format, one job per line after a `#` header:
///   job_id submit_time app class lower upper preferred request
/// `request` is `N` for rigid and `L-U` for moldable submissions.
[[nodiscard]] std::string format_workload(const std::vector<JobSubmission>& jobs);
[[nodiscard]] std::vector<JobSubmission> parse_workload(std::string_view text);

}  // namespace dmrsim
