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
#include <string>

#include "dmrsim/metrics.hpp"
#include "dmrsim/simulator.hpp"

namespace dmrsim {

// CSV schemas. Times are seconds with six decimals; every file starts with
// its header row.

/// job_id,app,class,submit,start,end,waiting,execution,completion,resizes
[[nodiscard]] std::string trace_csv(const MetricsReport& report);

/// t,allocated_nodes,running_jobs,completed_jobs
[[nodiscard]] std::string series_csv(const SimulationTrace& trace);

/// metric,value. Rows: jobs, makespan, avg_waiting, avg_execution,
/// avg_completion, allocation_rate, energy_kwh, throughput, resizes, seed,
/// then avg_waiting.<app>, avg_execution.<app>, avg_completion.<app> per app.
[[nodiscard]] std::string metrics_csv(const MetricsReport& report, const SimulationTrace& trace);

/// job_id,begin,end,from,to,spawn_s,transfer_s,promoted_job
[[nodiscard]] std::string resizes_csv(const SimulationTrace& trace);

/// bucket_start,completed_jobs
[[nodiscard]] std::string throughput_csv(const MetricsReport& report);

/// Writes trace.csv, series.csv, metrics.csv, resizes.csv and
/// throughput.csv into `dir`, creating it if needed.
void write_run_outputs(const std::filesystem::path& dir, const SimulationTrace& trace,
                       const MetricsReport& report);

void write_text_file(const std::filesystem::path& path, const std::string& text);
[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);

}  // namespace dmrsim
