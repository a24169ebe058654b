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

#include <doctest.h>

#include "dmrsim/error.hpp"
#include "dmrsim/scheduler.hpp"

using namespace dmrsim;

namespace {

const std::vector<ProcCount> kLadder{1, 2, 4, 8, 16, 32};

JobRequest rigid(JobId id, ProcCount n) {
  JobRequest r;
  r.id = id;
  r.mode = SubmissionMode::Rigid;
  r.request = n;
  r.bounds = {n, n, n};
  r.configs = {n};
  return r;
}

JobRequest moldable(JobId id, MalleabilityParams bounds, std::vector<ProcCount> configs = kLadder) {
  JobRequest r;
  r.id = id;
  r.mode = SubmissionMode::Moldable;
  r.request = bounds.upper;
  r.bounds = bounds;
  r.configs = std::move(configs);
  return r;
}

JobRequest malleable(JobId id, ProcCount request, MalleabilityParams bounds) {
  JobRequest r = moldable(id, bounds);
  r.mode = SubmissionMode::Rigid;
  r.request = request;
  r.malleable = true;
  return r;
}

ResizeDecision decide(const JobRequest& job, ProcCount current, int available,
                      std::vector<JobRequest> pending) {
  std::vector<const JobRequest*> ptrs;
  for (const auto& p : pending) ptrs.push_back(&p);
  return resize_decision(job, current, available, ptrs);
}

}  // namespace

TEST_SUITE("scheduler") {

TEST_CASE("initial allocation") {
  CHECK_FALSE(initial_allocation(rigid(1, 32), 31));
  CHECK(initial_allocation(rigid(1, 32), 32) == 32);
  CHECK(initial_allocation(moldable(1, {2, 32, 16}), 13) == 8);
  CHECK(initial_allocation(moldable(1, {2, 32, 16}), 200) == 32);
  CHECK_FALSE(initial_allocation(moldable(1, {2, 32, 16}), 1));
  CHECK_FALSE(initial_allocation(moldable(1, {6, 12, 6}, {3, 6, 12, 24}), 5));
  CHECK(initial_allocation(moldable(1, {6, 12, 6}, {3, 6, 12, 24}), 100) == 12);
}

TEST_CASE("expansion target") {
  const auto job = malleable(1, 32, {2, 32, 16});
  CHECK(expansion_target(job, 4, 20) == 16);
  CHECK(expansion_target(job, 4, 28) == 32);
  CHECK_FALSE(expansion_target(job, 4, 3));
  CHECK_FALSE(expansion_target(job, 32, 100));
}

TEST_CASE("resize policy branches") {
  const auto job = malleable(1, 32, {2, 32, 16});

  SUBCASE("below preferred expands toward the largest fitting multiple") {
    CHECK(decide(job, 4, 20, {}).action == ResizeAction::expand(16));
    CHECK(decide(job, 4, 0, {}).action.is_none());
  }
  SUBCASE("shrink to preferred when it lets a pending job start") {
    const auto d = decide(job, 32, 0, {rigid(7, 12)});
    CHECK(d.action == ResizeAction::shrink(16));
    REQUIRE(d.promote);
    CHECK(*d.promote == 7);
    CHECK(d.reserve == 12);
  }
  SUBCASE("no shrink when the freed nodes are not enough") {
    CHECK(decide(job, 32, 0, {rigid(7, 32)}).action.is_none());
    CHECK(decide(job, 32, 15, {rigid(7, 32)}).action.is_none());
    CHECK(decide(job, 32, 16, {rigid(7, 32)}).action == ResizeAction::shrink(16));
  }
  SUBCASE("a job that already fits needs no shrink") {
    CHECK(decide(job, 32, 12, {rigid(7, 12)}).action.is_none());
  }
  SUBCASE("later pending jobs are considered when the head cannot use the nodes") {
    const auto d = decide(job, 32, 0, {rigid(7, 64), rigid(8, 8)});
    CHECK(d.action == ResizeAction::shrink(16));
    CHECK(d.promote == 8);
  }
  SUBCASE("pending jobs and free nodes without a shrink expand") {
    CHECK(decide(job, 16, 16, {rigid(7, 64)}).action == ResizeAction::expand(32));
  }
  SUBCASE("idle nodes and an empty queue expand") {
    CHECK(decide(job, 16, 100, {}).action == ResizeAction::expand(32));
  }
  SUBCASE("at preferred with nothing to do") {
    CHECK(decide(job, 16, 0, {}).action.is_none());
    CHECK(decide(job, 16, 0, {rigid(7, 4)}).action.is_none());
  }
  SUBCASE("expansion that cannot reach a multiple degrades to none") {
    CHECK(decide(job, 16, 10, {}).action.is_none());
  }
}

TEST_CASE("branch precedence: below preferred wins over shrink") {
  // current < preferred and a pending job could start after a shrink: the
  // expand branch is evaluated first and shrinking below preferred is never
  // an option.
  const auto job = malleable(1, 8, {2, 32, 16});
  const auto d = decide(job, 8, 8, {rigid(7, 12)});
  CHECK(d.action == ResizeAction::expand(16));
  CHECK_FALSE(d.promote);
}

TEST_CASE("cluster accounting") {
  ClusterState c(10);
  c.allocate(1, 4);
  c.allocate(2, 6);
  CHECK(c.free_nodes() == 0);
  CHECK_THROWS_AS(c.allocate(3, 1), InvariantViolation);
  CHECK_THROWS_AS(c.resize(1, 5), InvariantViolation);
  c.resize(2, 3);
  CHECK(c.free_nodes() == 3);
  CHECK(c.allocation_of(2) == 3);
  c.release(1);
  CHECK(c.free_nodes() == 7);
  CHECK_THROWS_AS(c.release(1), InvariantViolation);
  CHECK_NOTHROW(c.check());
}

TEST_CASE("queue order") {
  JobQueue q;
  q.push({3, 0, 2.0, false});
  q.push({2, 0, 1.0, false});
  q.push({1, 0, 1.0, false});
  q.push({4, 5, 9.0, false});
  std::vector<JobId> order;
  for (const auto& e : q.entries()) order.push_back(e.id);
  CHECK(order == std::vector<JobId>{4, 1, 2, 3});
  q.promote(3);
  CHECK(q.entries().front().id == 3);
  CHECK(q.entries().front().promoted);
  q.remove(3);
  CHECK_FALSE(q.contains(3));
  CHECK_THROWS_AS(q.push({1, 0, 0.0, false}), InvariantViolation);
}

TEST_CASE("schedule pass") {
  SUBCASE("empty queue") {
    Scheduler s(16);
    CHECK(s.schedule_pass(0.0).empty());
  }
  SUBCASE("backfill past a blocked head") {
    Scheduler s(48);
    s.submit(rigid(1, 32), 0.0);
    s.schedule_pass(0.0);
    s.submit(rigid(2, 32), 1.0);
    s.submit(rigid(3, 16), 2.0);
    const auto starts = s.schedule_pass(10.0);
    CHECK(starts == std::vector<Start>{{3, 16}});
    CHECK(s.queue().contains(2));
  }
  SUBCASE("two moldable jobs share six nodes") {
    Scheduler s(6);
    s.submit(moldable(1, {2, 32, 16}), 0.0);
    s.submit(moldable(2, {2, 32, 16}), 0.0);
    CHECK(s.schedule_pass(0.0) == std::vector<Start>{{1, 4}, {2, 2}});
  }
  SUBCASE("smallest-first ordering") {
    Scheduler s(8, PriorityScheme::SmallestFirst);
    s.submit(rigid(1, 8), 0.0);
    s.submit(rigid(2, 4), 1.0);
    CHECK(s.schedule_pass(1.0) == std::vector<Start>{{2, 4}});
  }
  SUBCASE("unschedulable request") {
    Scheduler s(16);
    CHECK_THROWS_AS(s.submit(rigid(1, 32), 0.0), Unschedulable);
  }
}

TEST_CASE("shrink promotes and reserves for the pending job") {
  Scheduler s(32);
  s.submit(malleable(1, 32, {2, 32, 16}), 0.0);
  REQUIRE(s.schedule_pass(0.0) == std::vector<Start>{{1, 32}});
  s.submit(rigid(2, 12), 1.0);
  s.submit(rigid(3, 4), 2.0);

  const auto d = s.decide_resize(1);
  CHECK(d.action == ResizeAction::shrink(16));
  CHECK(d.promote == 2);
  CHECK(s.queue().entries().front().id == 2);
  CHECK(s.reservations().at(2).nodes == 12);

  s.finish_shrink(1, 16);
  CHECK(s.cluster().free_nodes() == 16);
  CHECK(s.available_nodes() == 4);
  CHECK(s.available_nodes(2) == 16);

  // The promoted job starts first; the reservation is dropped on start.
  CHECK(s.schedule_pass(10.0) == std::vector<Start>{{2, 12}, {3, 4}});
  CHECK(s.reservations().empty());
  CHECK(s.cluster().free_nodes() == 0);
}

TEST_CASE("overlapping shrinks do not hold back each other's beneficiary") {
  Scheduler s(64);
  s.submit(malleable(1, 32, {2, 32, 16}), 0.0);
  s.submit(malleable(2, 32, {2, 32, 16}), 0.0);
  REQUIRE(s.schedule_pass(0.0).size() == 2);
  s.submit(rigid(3, 16), 1.0);
  s.submit(rigid(4, 16), 1.0);

  CHECK(s.decide_resize(1).promote == 3);
  CHECK(s.decide_resize(2).promote == 4);
  CHECK(s.reservations().at(3) == Reservation{16, 1, 16});
  CHECK(s.available_nodes() == 0);

  // Job 3's nodes have arrived; job 4's are still in flight.
  s.finish_shrink(1, 16);
  CHECK(s.available_nodes() == 0);
  CHECK(s.available_nodes(3) == 16);
  CHECK(s.schedule_pass(10.0) == std::vector<Start>{{3, 16}});

  s.finish_shrink(2, 16);
  CHECK(s.schedule_pass(20.0) == std::vector<Start>{{4, 16}});
  CHECK(s.reservations().empty());
}

TEST_CASE("expansion cannot take reserved nodes") {
  Scheduler s(40);
  s.submit(malleable(1, 32, {2, 32, 16}), 0.0);
  s.schedule_pass(0.0);
  s.submit(rigid(2, 24), 1.0);
  REQUIRE(s.decide_resize(1).action == ResizeAction::shrink(16));
  s.finish_shrink(1, 16);
  CHECK(s.available_nodes() == 0);
  CHECK_THROWS_AS(s.begin_expand(1, 32), InvariantViolation);
}

TEST_CASE("priority scheme names") {
  CHECK(parse_priority_scheme("fcfs") == PriorityScheme::Fcfs);
  CHECK(parse_priority_scheme("smallest-first") == PriorityScheme::SmallestFirst);
  CHECK(to_string(PriorityScheme::SmallestFirst) == "smallest-first");
  CHECK_THROWS_AS((void)parse_priority_scheme("lifo"), InvalidSpec);
}

}  // TEST_SUITE
