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
#include <optional>
#include <string>
#include <vector>

#include "dmrsim/config.hpp"
#include "dmrsim/workload.hpp"

namespace dmrsim {

/// Events at equal times are processed in kind order, then by sequence.
enum class EventKind { Arrival = 0, ReconfigDone = 1, IterationBoundary = 2, JobDone = 3, SchedulerTick = 4 };

struct SimEvent {
  double time = 0.0;
  EventKind kind = EventKind::SchedulerTick;
  std::uint64_t sequence = 0;
  JobId job = -1;

  /// Strict weak order: (time, kind, sequence).
  friend bool operator<(const SimEvent& a, const SimEvent& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.sequence < b.sequence;
  }
};

struct AllocationStep {
  double time = 0.0;
  ProcCount nodes = 0;
  friend bool operator==(const AllocationStep&, const AllocationStep&) = default;
};

struct ResizeRecord {
  double begin = 0.0;
  double end = 0.0;
  ProcCount from = 0;
  ProcCount to = 0;
  double spawn_s = 0.0;
  double transfer_s = 0.0;
  /// The pending job a shrink was made for.
  std::optional<JobId> promoted;

  [[nodiscard]] double overhead() const { return spawn_s + transfer_s; }
  friend bool operator==(const ResizeRecord&, const ResizeRecord&) = default;
};

struct JobRecord {
  JobId id = 0;
  std::string app;
  JobClass cls = JobClass::Fixed;
  MalleabilityParams params;
  double submit = 0.0;
  double start = 0.0;
  double end = 0.0;
  std::int64_t iterations_total = 0;
  std::int64_t iterations_done = 0;
  /// Step function of the job's node count; first entry is the start.
  std::vector<AllocationStep> allocation;
  std::vector<ResizeRecord> resizes;
  /// Number of times the job consulted the resize policy.
  int checks = 0;

  friend bool operator==(const JobRecord&, const JobRecord&) = default;
};

struct SeriesPoint {
  double t = 0.0;
  int allocated_nodes = 0;
  int running_jobs = 0;
  int completed_jobs = 0;
  friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

struct SimulationTrace {
  int total_nodes = 0;
  double tick_s = 0.0;
  std::uint64_t seed = 0;
  /// Indexed like the input job list.
  std::vector<JobRecord> jobs;
  /// Cluster state after the last event at each distinct time, from t = 0.
  std::vector<SeriesPoint> series;
  double makespan = 0.0;
};

/// Runs the workload to completion. Deterministic for fixed inputs; `seed`
/// is recorded in the trace only, since no decision is random. Throws
/// Unschedulable when a job cannot fit the cluster, InvariantViolation when
/// the engine detects broken accounting.
[[nodiscard]] SimulationTrace run(const std::vector<JobSubmission>& workload,
                                  const AppCatalog& catalog, const RunConfig& config,
                                  std::uint64_t seed);

}  // namespace dmrsim
