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

#include <map>
#include <string>
#include <vector>

#include "dmrsim/config.hpp"
#include "dmrsim/simulator.hpp"

namespace dmrsim {

struct JobMetrics {
  JobId id = 0;
  std::string app;
  JobClass cls = JobClass::Fixed;
  double submit = 0.0;
  double start = 0.0;
  double end = 0.0;
  double waiting = 0.0;
  double execution = 0.0;
  double completion = 0.0;
  int resizes = 0;
};

struct Averages {
  int jobs = 0;
  double waiting = 0.0;
  double execution = 0.0;
  double completion = 0.0;
};

struct ThroughputBucket {
  double begin = 0.0;
  int completed = 0;
};

struct MetricsReport {
  std::vector<JobMetrics> jobs;
  double makespan = 0.0;
  Averages overall;
  std::map<std::string, Averages> per_app;
  /// Allocated node-seconds over total node-seconds of the makespan, in %.
  double allocation_rate_pct = 0.0;
  /// Completed jobs per second over the whole makespan.
  double throughput = 0.0;
  /// Completions per `throughput_bucket_s` window.
  double throughput_bucket_s = 0.0;
  std::vector<ThroughputBucket> throughput_series;
  double energy_kwh = 0.0;
  int resizes = 0;
};

/// Loaded nodes draw loaded_w, idle ones idle_w, integrated over [0,
/// makespan] of the trace's allocation series.
[[nodiscard]] double energy_kwh(const SimulationTrace& trace, double idle_w, double loaded_w);

[[nodiscard]] double allocation_rate_pct(const SimulationTrace& trace);

[[nodiscard]] MetricsReport summarize(const SimulationTrace& trace, const EnergyModel& energy = {},
                                      double throughput_bucket_s = 100.0);

struct Speedup {
  double waiting = 1.0;
  double execution = 1.0;
  double completion = 1.0;
  double makespan = 1.0;
};

/// metric(baseline) / metric(other) for each average and the makespan.
/// Both reports must cover the same jobs (ids, apps, submit times);
/// otherwise IncomparableRuns. A 0/0 ratio counts as 1.
[[nodiscard]] Speedup speedup(const MetricsReport& baseline, const MetricsReport& other);

}  // namespace dmrsim
