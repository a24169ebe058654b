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

#include "dmrsim/scheduler.hpp"

#include <algorithm>

#include <fmt/core.h>

#include "dmrsim/error.hpp"

namespace dmrsim {

std::optional<ProcCount> initial_allocation(const JobRequest& job, int free_nodes) {
  if (job.mode == SubmissionMode::Rigid) {
    if (job.request <= free_nodes) return job.request;
    return std::nullopt;
  }
  std::optional<ProcCount> best;
  for (ProcCount c : job.configs) {
    if (c >= job.bounds.lower && c <= job.bounds.upper && c <= free_nodes) best = c;
  }
  return best;
}

std::optional<ProcCount> expansion_target(const JobRequest& job, ProcCount current,
                                          int available) {
  std::optional<ProcCount> best;
  for (ProcCount c : job.configs) {
    if (c > current && c % current == 0 && c <= job.bounds.upper && c - current <= available) {
      best = c;
    }
  }
  return best;
}

ResizeDecision resize_decision(const JobRequest& job, ProcCount current, int available_nodes,
                               std::span<const JobRequest* const> pending) {
  const ProcCount preferred = job.bounds.preferred;
  auto expand = [&]() -> ResizeDecision {
    if (auto to = expansion_target(job, current, available_nodes)) {
      return {ResizeAction::expand(*to), std::nullopt, 0};
    }
    return {};
  };

  if (current < preferred) {
    if (available_nodes > 0) return expand();
    return {};
  }

  if (!pending.empty()) {
    if (current > preferred && current % preferred == 0) {
      const int freed = current - preferred;
      for (const JobRequest* candidate : pending) {
        if (initial_allocation(*candidate, available_nodes)) continue;
        if (initial_allocation(*candidate, available_nodes + freed)) {
          return {ResizeAction::shrink(preferred), candidate->id, candidate->min_start()};
        }
      }
    }
    if (available_nodes > 0) return expand();
    return {};
  }

  if (available_nodes > 0) return expand();
  return {};
}

ClusterState::ClusterState(int total_nodes) : total_nodes_(total_nodes), free_nodes_(total_nodes) {
  if (total_nodes < 1) throw InvalidSpec("cluster needs at least one node");
}

int ClusterState::allocation_of(JobId id) const {
  auto it = allocations_.find(id);
  return it == allocations_.end() ? 0 : it->second;
}

void ClusterState::allocate(JobId id, int nodes) {
  if (nodes < 1 || nodes > free_nodes_ || allocations_.contains(id)) {
    throw InvariantViolation(fmt::format("cannot allocate {} nodes to job {} ({} free)", nodes,
                                         id, free_nodes_));
  }
  allocations_[id] = nodes;
  free_nodes_ -= nodes;
}

void ClusterState::resize(JobId id, int nodes) {
  auto it = allocations_.find(id);
  if (it == allocations_.end() || nodes < 1 || nodes - it->second > free_nodes_) {
    throw InvariantViolation(fmt::format("cannot resize job {} to {} nodes", id, nodes));
  }
  free_nodes_ -= nodes - it->second;
  it->second = nodes;
}

void ClusterState::release(JobId id) {
  auto it = allocations_.find(id);
  if (it == allocations_.end()) {
    throw InvariantViolation(fmt::format("job {} holds no nodes", id));
  }
  free_nodes_ += it->second;
  allocations_.erase(it);
}

void ClusterState::check() const {
  int used = 0;
  for (const auto& [id, nodes] : allocations_) {
    if (nodes < 1) throw InvariantViolation(fmt::format("job {} holds {} nodes", id, nodes));
    used += nodes;
  }
  if (free_nodes_ < 0 || used + free_nodes_ != total_nodes_) {
    throw InvariantViolation(fmt::format("node accounting broken: {} used + {} free != {}", used,
                                         free_nodes_, total_nodes_));
  }
}

void JobQueue::push(QueueEntry entry) {
  if (contains(entry.id)) throw InvariantViolation(fmt::format("job {} queued twice", entry.id));
  entries_.push_back(entry);
  sort();
}

void JobQueue::remove(JobId id) {
  std::erase_if(entries_, [id](const QueueEntry& e) { return e.id == id; });
}

void JobQueue::promote(JobId id) {
  for (auto& e : entries_) {
    if (e.id == id) {
      e.priority = kPromotedPriority;
      e.promoted = true;
    }
  }
  sort();
}

bool JobQueue::contains(JobId id) const { return find(id) != nullptr; }

const QueueEntry* JobQueue::find(JobId id) const {
  for (const auto& e : entries_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

void JobQueue::sort() {
  std::stable_sort(entries_.begin(), entries_.end(), [](const QueueEntry& a, const QueueEntry& b) {
    if (a.priority != b.priority) return a.priority > b.priority;
    if (a.enqueue_time != b.enqueue_time) return a.enqueue_time < b.enqueue_time;
    return a.id < b.id;
  });
}

PriorityScheme parse_priority_scheme(std::string_view name) {
  if (name == "fcfs") return PriorityScheme::Fcfs;
  if (name == "smallest-first") return PriorityScheme::SmallestFirst;
  throw InvalidSpec(fmt::format("unknown priority scheme '{}'", name));
}

std::string_view to_string(PriorityScheme scheme) {
  return scheme == PriorityScheme::Fcfs ? "fcfs" : "smallest-first";
}

Scheduler::Scheduler(int total_nodes, PriorityScheme scheme)
    : cluster_(total_nodes), scheme_(scheme) {}

int Scheduler::base_priority(const JobRequest& request) const {
  if (scheme_ == PriorityScheme::SmallestFirst) return -request.min_start();
  return 0;
}

void Scheduler::submit(JobRequest request, double now) {
  if (request.min_start() > cluster_.total_nodes()) {
    throw Unschedulable(fmt::format("job {} needs {} nodes, cluster has {}", request.id,
                                    request.min_start(), cluster_.total_nodes()));
  }
  const JobId id = request.id;
  const int priority = base_priority(request);
  if (!requests_.emplace(id, std::move(request)).second) {
    throw InvalidSpec(fmt::format("job {} submitted twice", id));
  }
  queue_.push({id, priority, now, false});
}

int Scheduler::available_nodes(std::optional<JobId> for_job) const {
  int held = 0;
  for (const auto& [id, r] : reservations_) {
    if (!for_job || id != *for_job) held += r.held();
  }
  return std::max(0, cluster_.free_nodes() - held);
}

std::vector<Start> Scheduler::schedule_pass(double /*now*/) {
  std::vector<Start> starts;
  const auto snapshot = queue_.entries();
  for (const auto& entry : snapshot) {
    const JobRequest& req = requests_.at(entry.id);
    if (auto nodes = initial_allocation(req, available_nodes(entry.id))) {
      cluster_.allocate(entry.id, *nodes);
      queue_.remove(entry.id);
      reservations_.erase(entry.id);
      starts.push_back({entry.id, *nodes});
    }
  }
  return starts;
}

ResizeDecision Scheduler::decide_resize(JobId id) {
  const JobRequest& req = request(id);
  const int current = cluster_.allocation_of(id);
  if (current < 1) throw InvariantViolation(fmt::format("job {} is not running", id));

  std::vector<const JobRequest*> pending;
  pending.reserve(queue_.size());
  for (const auto& e : queue_.entries()) {
    if (!e.promoted) pending.push_back(&requests_.at(e.id));
  }
  ResizeDecision decision = resize_decision(req, current, available_nodes(), pending);
  if (decision.promote) {
    queue_.promote(*decision.promote);
    reservations_[*decision.promote] = {decision.reserve, id, current - decision.action.to};
  }
  return decision;
}

void Scheduler::begin_expand(JobId id, ProcCount to) {
  const int current = cluster_.allocation_of(id);
  if (to - current > available_nodes()) {
    throw InvariantViolation(fmt::format("expansion of job {} to {} exceeds available nodes", id, to));
  }
  cluster_.resize(id, to);
}

void Scheduler::finish_shrink(JobId id, ProcCount to) {
  cluster_.resize(id, to);
  for (auto& [job, r] : reservations_) {
    if (r.donor == id) r.inbound = 0;
  }
}

void Scheduler::finish_job(JobId id) { cluster_.release(id); }

const JobRequest& Scheduler::request(JobId id) const {
  auto it = requests_.find(id);
  if (it == requests_.end()) throw InvariantViolation(fmt::format("unknown job {}", id));
  return it->second;
}

}  // namespace dmrsim
