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
#include "dmrsim/metrics.hpp"

using namespace dmrsim;

namespace {

SimulationTrace flat_trace(int total, int loaded, double duration) {
  SimulationTrace t;
  t.total_nodes = total;
  t.series = {{0.0, loaded, loaded > 0 ? 1 : 0, 0}};
  t.makespan = duration;
  return t;
}

JobRecord record(JobId id, const std::string& app, double submit, double start, double end) {
  JobRecord r;
  r.id = id;
  r.app = app;
  r.submit = submit;
  r.start = start;
  r.end = end;
  return r;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("energy of constant load") {
  CHECK(energy_kwh(flat_trace(128, 0, 3600.0), 100.0, 340.0) == 12.8);
  CHECK(energy_kwh(flat_trace(128, 64, 3600.0), 100.0, 340.0) == 28.16);
  CHECK(energy_kwh(flat_trace(128, 64, 0.0), 100.0, 340.0) == 0.0);
  CHECK_THROWS_AS((void)energy_kwh(flat_trace(1, 0, 1.0), -1.0, 340.0), InvalidSpec);
}

TEST_CASE("energy integrates the allocation step function") {
  auto t = flat_trace(10, 0, 7200.0);
  t.series = {{0.0, 10, 1, 0}, {1800.0, 0, 0, 1}, {5400.0, 5, 1, 1}};
  // Half an hour fully loaded, an hour idle, half an hour half loaded.
  const double wh = 0.5 * 10 * 340 + 1.0 * 10 * 100 + 0.5 * (5 * 340 + 5 * 100);
  CHECK(energy_kwh(t, 100.0, 340.0) == doctest::Approx(wh / 1000.0));
}

TEST_CASE("allocation rate") {
  CHECK(allocation_rate_pct(flat_trace(16, 16, 100.0)) == doctest::Approx(100.0));
  CHECK(allocation_rate_pct(flat_trace(16, 8, 100.0)) == doctest::Approx(50.0));
  CHECK(allocation_rate_pct(flat_trace(16, 8, 0.0)) == 0.0);
  auto t = flat_trace(4, 4, 40.0);
  t.series = {{0.0, 4, 1, 0}, {10.0, 2, 1, 0}, {30.0, 0, 0, 1}};
  CHECK(allocation_rate_pct(t) == doctest::Approx((10.0 * 4 + 20.0 * 2) / (4.0 * 40.0) * 100.0));
}

TEST_CASE("per-job times and averages") {
  auto t = flat_trace(8, 8, 50.0);
  t.jobs = {record(0, "a", 0.0, 0.0, 20.0), record(1, "b", 5.0, 20.0, 50.0),
            record(2, "a", 6.0, 10.0, 30.0)};
  t.jobs[1].resizes.push_back({25.0, 26.0, 4, 8, 1.0, 0.0, std::nullopt});
  const auto r = summarize(t, {}, 25.0);
  REQUIRE(r.jobs.size() == 3);
  for (const auto& j : r.jobs) CHECK(j.completion == j.waiting + j.execution);
  CHECK(r.jobs[1].waiting == 15.0);
  CHECK(r.jobs[1].execution == 30.0);
  CHECK(r.overall.waiting == doctest::Approx((0.0 + 15.0 + 4.0) / 3));
  CHECK(r.overall.completion == doctest::Approx((20.0 + 45.0 + 24.0) / 3));
  CHECK(r.per_app.at("a").jobs == 2);
  CHECK(r.per_app.at("a").execution == doctest::Approx(20.0));
  CHECK(r.resizes == 1);
  CHECK(r.throughput == doctest::Approx(3.0 / 50.0));
  REQUIRE(r.throughput_series.size() == 2);
  CHECK(r.throughput_series[0].completed == 1);
  CHECK(r.throughput_series[1].completed == 2);
}

TEST_CASE("speedup") {
  auto base = flat_trace(8, 8, 100.0);
  base.jobs = {record(0, "a", 0.0, 10.0, 50.0), record(1, "a", 1.0, 50.0, 100.0)};
  auto fast = base;
  fast.makespan = 50.0;
  fast.jobs = {record(0, "a", 0.0, 0.0, 30.0), record(1, "a", 1.0, 2.0, 50.0)};

  auto idle = flat_trace(8, 0, 0.0);
  idle.jobs = {record(0, "a", 0.0, 0.0, 0.0)};
  CHECK(speedup(summarize(idle), summarize(idle)).waiting == 1.0);

  const auto same = speedup(summarize(base), summarize(base));
  CHECK(same.waiting == 1.0);
  CHECK(same.execution == 1.0);
  CHECK(same.completion == 1.0);
  CHECK(same.makespan == 1.0);

  const auto s = speedup(summarize(base), summarize(fast));
  CHECK(s.waiting == doctest::Approx((10.0 + 49.0) / (0.0 + 1.0)));
  CHECK(s.execution == doctest::Approx((40.0 + 50.0) / (30.0 + 48.0)));
  CHECK(s.completion == doctest::Approx((50.0 + 99.0) / (30.0 + 49.0)));
  CHECK(s.makespan == doctest::Approx(2.0));

  auto other = fast;
  other.jobs[1].app = "b";
  CHECK_THROWS_AS((void)speedup(summarize(base), summarize(other)), IncomparableRuns);
  other = fast;
  other.jobs.pop_back();
  CHECK_THROWS_AS((void)speedup(summarize(base), summarize(other)), IncomparableRuns);
  other = fast;
  other.jobs[0].submit = 0.5;
  CHECK_THROWS_AS((void)speedup(summarize(base), summarize(other)), IncomparableRuns);
}

}  // TEST_SUITE
