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

#include <algorithm>
#include <climits>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dmrsim/profiles.hpp"
#include "dmrsim/reconfig.hpp"

namespace dmrsim {

using JobId = int;

enum class SubmissionMode { Rigid, Moldable };

/// What the resource manager knows about a job.
struct JobRequest {
  JobId id = 0;
  SubmissionMode mode = SubmissionMode::Rigid;
  /// Node count of a rigid submission.
  ProcCount request = 1;
  MalleabilityParams bounds;
  /// Measured configurations inside [bounds.lower, bounds.upper], ascending.
  std::vector<ProcCount> configs;
  bool malleable = false;

  /// Smallest allocation the job can start with.
  [[nodiscard]] ProcCount min_start() const {
    return mode == SubmissionMode::Rigid ? request : bounds.lower;
  }
};

/// Rigid: exactly `request` or nothing. Moldable: largest configuration that
/// fits in `free_nodes`. std::nullopt means defer.
[[nodiscard]] std::optional<ProcCount> initial_allocation(const JobRequest& job, int free_nodes);

/// Largest configuration t with t a multiple of current, t <= upper and
/// t - current <= available. std::nullopt when no t > current qualifies.
[[nodiscard]] std::optional<ProcCount> expansion_target(const JobRequest& job, ProcCount current,
                                                        int available);

struct ResizeDecision {
  ResizeAction action;
  /// Shrink only: the pending job the released nodes are for.
  std::optional<JobId> promote;
  /// Nodes that job needs to start.
  int reserve = 0;
};

/// Resize policy for a malleable job that checked in:
///   1. current < preferred: expand if nodes are available
///   2. pending jobs and current > preferred: shrink to preferred when that
///      lets a pending job start that cannot start otherwise
///   3./4. nodes available: expand
///   5. otherwise nothing.
/// `pending` is the queue in priority order, already-promoted jobs excluded.
[[nodiscard]] ResizeDecision resize_decision(const JobRequest& job, ProcCount current,
                                             int available_nodes,
                                             std::span<const JobRequest* const> pending);

class ClusterState {
 public:
  explicit ClusterState(int total_nodes);

  [[nodiscard]] int total_nodes() const { return total_nodes_; }
  [[nodiscard]] int free_nodes() const { return free_nodes_; }
  [[nodiscard]] int allocated_nodes() const { return total_nodes_ - free_nodes_; }
  [[nodiscard]] const std::map<JobId, int>& allocations() const { return allocations_; }
  [[nodiscard]] int allocation_of(JobId id) const;

  void allocate(JobId id, int nodes);
  /// Changes an existing allocation to `nodes`.
  void resize(JobId id, int nodes);
  void release(JobId id);

  /// Throws InvariantViolation unless free + allocated == total and every
  /// allocation is >= 1.
  void check() const;

 private:
  int total_nodes_;
  int free_nodes_;
  std::map<JobId, int> allocations_;
};

inline constexpr int kPromotedPriority = INT_MAX;

struct QueueEntry {
  JobId id = 0;
  int priority = 0;
  double enqueue_time = 0.0;
  bool promoted = false;
};

/// Pending jobs ordered by (priority desc, enqueue_time asc, id asc).
class JobQueue {
 public:
  void push(QueueEntry entry);
  void remove(JobId id);
  /// One-shot maximum priority, cleared when the job leaves the queue.
  void promote(JobId id);

  [[nodiscard]] const std::vector<QueueEntry>& entries() const { return entries_; }
  [[nodiscard]] bool empty() const { return entries_.empty(); }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] bool contains(JobId id) const;
  [[nodiscard]] const QueueEntry* find(JobId id) const;

 private:
  void sort();
  std::vector<QueueEntry> entries_;
};

enum class PriorityScheme { Fcfs, SmallestFirst };

[[nodiscard]] PriorityScheme parse_priority_scheme(std::string_view name);
[[nodiscard]] std::string_view to_string(PriorityScheme scheme);

struct Start {
  JobId id = 0;
  ProcCount nodes = 0;
  friend bool operator==(const Start&, const Start&) = default;
};

/// Simulated resource manager: FCFS queue with backfill over whole nodes,
/// moldable start, and the resize policy.
///
/// Nodes promised to a promoted job (after a shrink decided in its favour)
/// are held back from every other start and expansion until it starts.
/// While the shrink is still in flight, only the part of the promise not
/// covered by the nodes it will release is held back.
struct Reservation {
  int nodes = 0;
  JobId donor = 0;
  int inbound = 0;  // nodes the donor has yet to release
  [[nodiscard]] int held() const { return std::max(0, nodes - inbound); }
  friend bool operator==(const Reservation&, const Reservation&) = default;
};

class Scheduler {
 public:
  explicit Scheduler(int total_nodes, PriorityScheme scheme = PriorityScheme::Fcfs);

  void submit(JobRequest request, double now);

  /// Walks the queue once in priority order and starts every job that fits;
  /// a job that does not fit never blocks the ones behind it.
  std::vector<Start> schedule_pass(double now);

  /// Evaluates the policy for a running malleable job and, on a shrink,
  /// promotes and reserves for the beneficiary.
  ResizeDecision decide_resize(JobId id);

  /// Expansion: nodes are taken when the resize begins.
  void begin_expand(JobId id, ProcCount to);
  /// Shrink: nodes are returned when the resize completes.
  void finish_shrink(JobId id, ProcCount to);
  void finish_job(JobId id);

  /// Free nodes not promised to a promoted job (other than `for_job`).
  [[nodiscard]] int available_nodes(std::optional<JobId> for_job = std::nullopt) const;

  [[nodiscard]] const ClusterState& cluster() const { return cluster_; }
  [[nodiscard]] const JobQueue& queue() const { return queue_; }
  [[nodiscard]] const JobRequest& request(JobId id) const;
  [[nodiscard]] const std::map<JobId, Reservation>& reservations() const { return reservations_; }

 private:
  int base_priority(const JobRequest& request) const;

  ClusterState cluster_;
  PriorityScheme scheme_;
  JobQueue queue_;
  std::map<JobId, JobRequest> requests_;
  std::map<JobId, Reservation> reservations_;
};

}  // namespace dmrsim
