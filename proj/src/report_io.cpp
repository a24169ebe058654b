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

#include "dmrsim/report_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "dmrsim/error.hpp"

namespace dmrsim {

std::string trace_csv(const MetricsReport& report) {
  std::string out = "job_id,app,class,submit,start,end,waiting,execution,completion,resizes\n";
  for (const auto& j : report.jobs) {
    out += fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{}\n", j.id, j.app,
                       to_string(j.cls), j.submit, j.start, j.end, j.waiting, j.execution,
                       j.completion, j.resizes);
  }
  return out;
}

std::string series_csv(const SimulationTrace& trace) {
  std::string out = "t,allocated_nodes,running_jobs,completed_jobs\n";
  if (trace.jobs.empty()) return out;
  for (const auto& p : trace.series) {
    out += fmt::format("{:.6f},{},{},{}\n", p.t, p.allocated_nodes, p.running_jobs,
                       p.completed_jobs);
  }
  return out;
}

std::string metrics_csv(const MetricsReport& report, const SimulationTrace& trace) {
  std::string out = "metric,value\n";
  auto row = [&](const std::string& key, double value) {
    out += fmt::format("{},{:.6f}\n", key, value);
  };
  out += fmt::format("jobs,{}\n", report.jobs.size());
  row("makespan", report.makespan);
  row("avg_waiting", report.overall.waiting);
  row("avg_execution", report.overall.execution);
  row("avg_completion", report.overall.completion);
  row("allocation_rate", report.allocation_rate_pct);
  row("energy_kwh", report.energy_kwh);
  row("throughput", report.throughput);
  out += fmt::format("resizes,{}\n", report.resizes);
  out += fmt::format("seed,{}\n", trace.seed);
  for (const auto& [app, avg] : report.per_app) {
    row("avg_waiting." + app, avg.waiting);
    row("avg_execution." + app, avg.execution);
    row("avg_completion." + app, avg.completion);
  }
  return out;
}

std::string resizes_csv(const SimulationTrace& trace) {
  std::string out = "job_id,begin,end,from,to,spawn_s,transfer_s,promoted_job\n";
  for (const auto& job : trace.jobs) {
    for (const auto& r : job.resizes) {
      out += fmt::format("{},{:.6f},{:.6f},{},{},{:.6f},{:.6f},{}\n", job.id, r.begin, r.end,
                         r.from, r.to, r.spawn_s, r.transfer_s,
                         r.promoted ? fmt::format("{}", *r.promoted) : std::string{});
    }
  }
  return out;
}

std::string throughput_csv(const MetricsReport& report) {
  std::string out = "bucket_start,completed_jobs\n";
  for (const auto& b : report.throughput_series) {
    out += fmt::format("{:.6f},{}\n", b.begin, b.completed);
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError(fmt::format("{}: cannot open for writing", path.string()));
  out << text;
  if (!out) throw ParseError(fmt::format("{}: write failed", path.string()));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("{}: cannot open file", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_run_outputs(const std::filesystem::path& dir, const SimulationTrace& trace,
                       const MetricsReport& report) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ParseError(fmt::format("{}: cannot create directory", dir.string()));
  write_text_file(dir / "trace.csv", trace_csv(report));
  write_text_file(dir / "series.csv", series_csv(trace));
  write_text_file(dir / "metrics.csv", metrics_csv(report, trace));
  write_text_file(dir / "resizes.csv", resizes_csv(trace));
  write_text_file(dir / "throughput.csv", throughput_csv(report));
}

}  // namespace dmrsim
