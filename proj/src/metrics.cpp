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

#include "dmrsim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "dmrsim/error.hpp"

namespace dmrsim {

namespace {

// Integral of f(allocated nodes) over [0, makespan] for the step series.
template <typename F>
double integrate(const SimulationTrace& trace, F&& f) {
  double total = 0.0;
  const auto& s = trace.series;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double begin = std::min(s[i].t, trace.makespan);
    const double end = i + 1 < s.size() ? std::min(s[i + 1].t, trace.makespan) : trace.makespan;
    if (end > begin) total += f(s[i].allocated_nodes) * (end - begin);
  }
  return total;
}

void accumulate(Averages& avg, const JobMetrics& m) {
  ++avg.jobs;
  avg.waiting += m.waiting;
  avg.execution += m.execution;
  avg.completion += m.completion;
}

void finish(Averages& avg) {
  if (avg.jobs == 0) return;
  avg.waiting /= avg.jobs;
  avg.execution /= avg.jobs;
  avg.completion /= avg.jobs;
}

double ratio(double a, double b) {
  if (a == 0.0 && b == 0.0) return 1.0;
  return a / b;
}

}  // namespace

double energy_kwh(const SimulationTrace& trace, double idle_w, double loaded_w) {
  if (idle_w < 0.0 || loaded_w < 0.0) throw InvalidSpec("wattages must be >= 0");
  const double watt_seconds = integrate(trace, [&](int loaded) {
    return loaded * loaded_w + (trace.total_nodes - loaded) * idle_w;
  });
  return watt_seconds / 3600.0 / 1000.0;
}

double allocation_rate_pct(const SimulationTrace& trace) {
  if (trace.makespan <= 0.0 || trace.total_nodes <= 0) return 0.0;
  const double node_seconds = integrate(trace, [](int loaded) { return double(loaded); });
  return node_seconds / (trace.total_nodes * trace.makespan) * 100.0;
}

MetricsReport summarize(const SimulationTrace& trace, const EnergyModel& energy,
                        double throughput_bucket_s) {
  MetricsReport report;
  report.makespan = trace.makespan;
  report.jobs.reserve(trace.jobs.size());
  for (const auto& r : trace.jobs) {
    JobMetrics m;
    m.id = r.id;
    m.app = r.app;
    m.cls = r.cls;
    m.submit = r.submit;
    m.start = r.start;
    m.end = r.end;
    m.waiting = r.start - r.submit;
    m.execution = r.end - r.start;
    m.completion = m.waiting + m.execution;
    m.resizes = static_cast<int>(r.resizes.size());
    report.resizes += m.resizes;
    accumulate(report.overall, m);
    accumulate(report.per_app[m.app], m);
    report.jobs.push_back(std::move(m));
  }
  finish(report.overall);
  for (auto& [app, avg] : report.per_app) finish(avg);

  report.allocation_rate_pct = allocation_rate_pct(trace);
  report.energy_kwh = energy_kwh(trace, energy.idle_w, energy.loaded_w);
  if (trace.makespan > 0.0) {
    report.throughput = static_cast<double>(trace.jobs.size()) / trace.makespan;
  }

  report.throughput_bucket_s = throughput_bucket_s;
  if (throughput_bucket_s > 0.0 && trace.makespan > 0.0) {
    const auto buckets = static_cast<std::size_t>(std::ceil(trace.makespan / throughput_bucket_s));
    report.throughput_series.resize(std::max<std::size_t>(buckets, 1));
    for (std::size_t i = 0; i < report.throughput_series.size(); ++i) {
      report.throughput_series[i].begin = static_cast<double>(i) * throughput_bucket_s;
    }
    for (const auto& r : trace.jobs) {
      auto i = static_cast<std::size_t>(r.end / throughput_bucket_s);
      i = std::min(i, report.throughput_series.size() - 1);
      ++report.throughput_series[i].completed;
    }
  }
  return report;
}

Speedup speedup(const MetricsReport& baseline, const MetricsReport& other) {
  if (baseline.jobs.size() != other.jobs.size()) {
    throw IncomparableRuns(fmt::format("reports cover {} and {} jobs", baseline.jobs.size(),
                                       other.jobs.size()));
  }
  for (std::size_t i = 0; i < baseline.jobs.size(); ++i) {
    const auto& a = baseline.jobs[i];
    const auto& b = other.jobs[i];
    if (a.id != b.id || a.app != b.app || a.submit != b.submit) {
      throw IncomparableRuns(fmt::format("job lists differ at position {} (job {} vs {})", i, a.id,
                                         b.id));
    }
  }
  Speedup s;
  s.waiting = ratio(baseline.overall.waiting, other.overall.waiting);
  s.execution = ratio(baseline.overall.execution, other.overall.execution);
  s.completion = ratio(baseline.overall.completion, other.overall.completion);
  s.makespan = ratio(baseline.makespan, other.makespan);
  return s;
}

}  // namespace dmrsim
