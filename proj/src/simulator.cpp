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

#include "dmrsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <queue>

#include <fmt/core.h>

#include "dmrsim/error.hpp"

namespace dmrsim {

namespace {

enum class Status { Future, Pending, Running, Done };

struct LiveJob {
  const JobSubmission* sub = nullptr;
  const AppEntry* app = nullptr;
  Status status = Status::Future;
  std::optional<Reconfigurator> reconfig;
  ProcCount procs = 0;
  std::int64_t total = 0;
  std::int64_t done = 0;
  // Progress is linear within a segment: since seg_time the job has run at
  // `procs` starting from iteration seg_iter.
  double seg_time = 0.0;
  std::int64_t seg_iter = 0;
  double iter_time = 0.0;
  CheckState check;
  double last_decision = 0.0;
  ResizeOutcome in_flight;
  JobRecord* record = nullptr;
};

JobRequest make_request(const JobSubmission& sub, const AppEntry& app, int total_nodes) {
  const auto& prof = app.profile;
  for (ProcCount p : {sub.params.lower, sub.params.preferred, sub.params.upper}) {
    if (!prof.is_configuration(p)) {
      throw InvalidSpec(fmt::format("job {}: {} is not a measured configuration of {}", sub.id, p,
                                    prof.name));
    }
  }
  JobRequest req;
  req.id = sub.id;
  req.mode = sub.mode();
  req.request = sub.rigid_request();
  req.bounds = sub.params;
  req.malleable = sub.malleable();
  for (ProcCount c : prof.configurations()) {
    if (c >= sub.params.lower && c <= sub.params.upper && c <= total_nodes) req.configs.push_back(c);
  }
  return req;
}

class Engine {
 public:
  Engine(const std::vector<JobSubmission>& workload, const AppCatalog& catalog,
         const RunConfig& config, std::uint64_t seed)
      : config_(config), scheduler_(config.total_nodes, config.priority) {
    config_.validate();
    trace_.total_nodes = config.total_nodes;
    trace_.tick_s = config.tick_s;
    trace_.seed = seed;
    trace_.jobs.resize(workload.size());
    jobs_.resize(workload.size());

    for (std::size_t i = 0; i < workload.size(); ++i) {
      const auto& sub = workload[i];
      auto app = catalog.find(sub.app);
      if (app == catalog.end()) {
        throw InvalidSpec(fmt::format("job {}: no profile for app '{}'", sub.id, sub.app));
      }
      if (!index_.emplace(sub.id, i).second) {
        throw InvalidSpec(fmt::format("job id {} appears twice", sub.id));
      }
      auto& job = jobs_[i];
      job.sub = &sub;
      job.app = &app->second;
      job.record = &trace_.jobs[i];
      job.record->id = sub.id;
      job.record->app = sub.app;
      job.record->cls = sub.cls;
      job.record->params = sub.params;
      job.record->submit = sub.submit_time;
      requests_.push_back(make_request(sub, app->second, config.total_nodes));
      push(sub.submit_time, EventKind::Arrival, sub.id);
    }
    if (!workload.empty()) push(0.0, EventKind::SchedulerTick, -1);
    trace_.series.push_back({0.0, 0, 0, 0});
  }

  SimulationTrace run() && {
    while (!events_.empty()) {
      const SimEvent ev = events_.top();
      events_.pop();
      switch (ev.kind) {
        case EventKind::Arrival:
          on_arrival(ev);
          break;
        case EventKind::ReconfigDone:
          on_reconfig_done(ev);
          break;
        case EventKind::IterationBoundary:
          on_boundary(ev);
          break;
        case EventKind::JobDone:
          on_job_done(ev);
          break;
        case EventKind::SchedulerTick:
          on_tick(ev);
          break;
      }
      scheduler_.cluster().check();
      record_series(ev.time);
    }
    if (completed_ != static_cast<int>(jobs_.size())) {
      throw InvariantViolation(
          fmt::format("event queue drained with {} of {} jobs complete", completed_, jobs_.size()));
    }
    for (const auto& r : trace_.jobs) trace_.makespan = std::max(trace_.makespan, r.end);
    return std::move(trace_);
  }

 private:
  LiveJob& job(JobId id) { return jobs_[index_.at(id)]; }

  void push(double time, EventKind kind, JobId id) {
    events_.push({time, kind, sequence_++, id});
  }

  void on_arrival(const SimEvent& ev) {
    auto& j = job(ev.job);
    scheduler_.submit(requests_[index_.at(ev.job)], ev.time);
    j.status = Status::Pending;
  }

  void on_tick(const SimEvent& ev) {
    for (const Start& s : scheduler_.schedule_pass(ev.time)) start_job(job(s.id), s.nodes, ev.time);
    if (completed_ < static_cast<int>(jobs_.size())) {
      ++tick_index_;
      push(static_cast<double>(tick_index_) * config_.tick_s, EventKind::SchedulerTick, -1);
    }
  }

  void start_job(LiveJob& j, ProcCount nodes, double now) {
    const auto& prof = j.app->profile;
    j.status = Status::Running;
    j.procs = nodes;
    j.total = prof.job_iterations.iterations_for(nodes);
    j.done = 0;
    begin_segment(j, now);
    j.check = {now, 0};
    j.last_decision = now;
    if (j.sub->malleable()) j.reconfig.emplace(prof, j.sub->params, nodes, config_.overhead);
    ++running_;

    j.record->start = now;
    j.record->iterations_total = j.total;
    j.record->allocation.push_back({now, nodes});
    check_bounds(j);
    schedule_progress(j, now);
  }

  void begin_segment(LiveJob& j, double now) {
    j.seg_time = now;
    j.seg_iter = j.done;
    j.iter_time = execution_time(j.app->profile, j.procs, 1);
  }

  double boundary_time(const LiveJob& j, std::int64_t iteration) const {
    return j.seg_time + static_cast<double>(iteration - j.seg_iter) * j.iter_time;
  }

  Inhibitors inhibitors(const LiveJob& j) const {
    return {j.app->profile.inhibitor_period_s, j.app->profile.inhibitor_iterations};
  }

  bool may_check(const LiveJob& j, std::int64_t iteration) const {
    const double t = boundary_time(j, iteration);
    return should_check(inhibitors(j), j.check, t, iteration) &&
           t - j.last_decision >= config_.tick_s;
  }

  // First iteration boundary after `done` at which the job passes its
  // inhibitors and the per-tick decision limit. Iterations in between are
  // not materialized as events.
  std::int64_t next_check_iteration(const LiveJob& j) const {
    const Inhibitors inh = inhibitors(j);
    const std::int64_t lo =
        std::max(j.done + 1, j.check.last_check_iteration + std::max<std::int64_t>(inh.iterations, 0));
    const double target =
        std::max(j.check.last_check_time + inh.period_s, j.last_decision + config_.tick_s);
    std::int64_t c = lo;
    const double est = std::ceil((target - j.seg_time) / j.iter_time);
    if (std::isfinite(est)) c = std::max(c, j.seg_iter + static_cast<std::int64_t>(est));
    while (c > lo && may_check(j, c - 1)) --c;
    while (c < j.total && !may_check(j, c)) ++c;
    return c;
  }

  void schedule_progress(LiveJob& j, double now) {
    if (j.done >= j.total) {
      push(now, EventKind::JobDone, j.sub->id);
      return;
    }
    if (j.reconfig && config_.malleability) {
      const std::int64_t c = next_check_iteration(j);
      if (c < j.total) {
        push(boundary_time(j, c), EventKind::IterationBoundary, j.sub->id);
        next_boundary_[j.sub->id] = c;
        return;
      }
    }
    push(boundary_time(j, j.total), EventKind::JobDone, j.sub->id);
  }

  void on_boundary(const SimEvent& ev) {
    auto& j = job(ev.job);
    const std::int64_t c = next_boundary_.at(ev.job);
    j.done = c;
    if (!should_check(inhibitors(j), j.check, ev.time, c)) {
      throw InvariantViolation(fmt::format("job {} checked in before its inhibitors elapsed", ev.job));
    }
    j.check = {ev.time, c};
    j.last_decision = ev.time;
    ++j.record->checks;

    j.reconfig->await_decision();
    const ResizeDecision decision = scheduler_.decide_resize(ev.job);
    if (decision.action.is_none()) {
      j.reconfig->decline();
      schedule_progress(j, ev.time);
      return;
    }

    try {
      j.in_flight = j.reconfig->begin_resize(decision.action);
    } catch (const InputError& e) {
      throw InvariantViolation(fmt::format("job {}: policy produced an invalid resize: {}", ev.job,
                                           e.what()));
    }
    const ProcCount to = decision.action.to;
    if (decision.action.kind == ResizeAction::Kind::Expand) {
      scheduler_.begin_expand(ev.job, to);
      j.record->allocation.push_back({ev.time, to});
    }
    j.reconfig->spawned();
    const double end = ev.time + j.in_flight.overhead();
    j.record->resizes.push_back({ev.time, end, j.procs, to, j.in_flight.spawn_s,
                                 j.in_flight.transfer_s, decision.promote});
    push(end, EventKind::ReconfigDone, ev.job);
  }

  void on_reconfig_done(const SimEvent& ev) {
    auto& j = job(ev.job);
    const ProcCount to = j.in_flight.action.to;
    j.reconfig->redistributed();
    if (j.in_flight.action.kind == ResizeAction::Kind::Shrink) {
      scheduler_.finish_shrink(ev.job, to);
      j.record->allocation.push_back({ev.time, to});
    }
    j.procs = to;
    begin_segment(j, ev.time);
    j.reconfig->resume();
    j.check.last_check_time = ev.time;
    check_bounds(j);
    schedule_progress(j, ev.time);
  }

  void on_job_done(const SimEvent& ev) {
    auto& j = job(ev.job);
    j.done = j.total;
    scheduler_.finish_job(ev.job);
    j.status = Status::Done;
    j.record->end = ev.time;
    j.record->iterations_done = j.done;
    --running_;
    ++completed_;
  }

  void check_bounds(const LiveJob& j) const {
    const int alloc = scheduler_.cluster().allocation_of(j.sub->id);
    const auto& p = j.sub->params;
    const bool ok = j.sub->malleable() ? alloc >= p.lower && alloc <= p.upper
                    : j.sub->mode() == SubmissionMode::Rigid
                        ? alloc == j.sub->rigid_request()
                        : alloc == j.record->allocation.front().nodes;
    if (!ok) {
      throw InvariantViolation(fmt::format("job {} holds {} nodes outside its bounds [{}, {}]",
                                           j.sub->id, alloc, p.lower, p.upper));
    }
  }

  void record_series(double now) {
    const SeriesPoint point{now, scheduler_.cluster().allocated_nodes(), running_, completed_};
    auto& series = trace_.series;
    if (series.back().t == now) {
      series.back() = point;
      if (series.size() > 1) {
        const auto& prev = series[series.size() - 2];
        if (prev.allocated_nodes == point.allocated_nodes && prev.running_jobs == point.running_jobs &&
            prev.completed_jobs == point.completed_jobs) {
          series.pop_back();
        }
      }
      return;
    }
    const auto& last = series.back();
    if (last.allocated_nodes == point.allocated_nodes && last.running_jobs == point.running_jobs &&
        last.completed_jobs == point.completed_jobs) {
      return;
    }
    series.push_back(point);
  }

  RunConfig config_;
  Scheduler scheduler_;
  SimulationTrace trace_;
  std::vector<LiveJob> jobs_;
  std::vector<JobRequest> requests_;
  std::map<JobId, std::size_t> index_;
  std::map<JobId, std::int64_t> next_boundary_;
  std::priority_queue<SimEvent, std::vector<SimEvent>, std::function<bool(const SimEvent&, const SimEvent&)>>
      events_{[](const SimEvent& a, const SimEvent& b) { return b < a; }};
  std::uint64_t sequence_ = 0;
  std::int64_t tick_index_ = 0;
  int running_ = 0;
  int completed_ = 0;
};

}  // namespace

SimulationTrace run(const std::vector<JobSubmission>& workload, const AppCatalog& catalog,
                    const RunConfig& config, std::uint64_t seed) {
  return Engine(workload, catalog, config, seed).run();
}

}  // namespace dmrsim
