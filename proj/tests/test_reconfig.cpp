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
#include "dmrsim/reconfig.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace dmrsim;
using dmrsim::testing::make_profile;

namespace {

ApplicationProfile ladder_profile() {
  auto p = make_profile("ladder", {{1, 100.0}, {2, 60.0}, {4, 40.0}, {5, 38.0}, {8, 30.0}, {10, 28.0}});
  p.bytes_per_process = 1'000'000;
  return p;
}

}  // namespace

TEST_SUITE("reconfig") {

TEST_CASE("inhibitor gating") {
  CHECK_FALSE(should_check({10.0, 0}, {5.0, 0}, 12.0, 100));
  CHECK(should_check({10.0, 0}, {0.0, 0}, 10.0, 1));
  CHECK(should_check({0.0, 0}, {1e9, 1'000'000}, 0.0, 0));
  CHECK_FALSE(should_check({0.0, 5}, {0.0, 10}, 100.0, 14));
  CHECK(should_check({0.0, 5}, {0.0, 10}, 100.0, 15));
  // Both inhibitors must pass.
  CHECK_FALSE(should_check({10.0, 5}, {0.0, 0}, 20.0, 4));
  CHECK_FALSE(should_check({10.0, 5}, {0.0, 0}, 9.0, 50));
  CHECK(should_check({10.0, 5}, {0.0, 0}, 10.0, 5));
}

TEST_CASE("spawn cost") {
  OverheadModel defaults;
  CHECK(spawn_cost(defaults, 1) == doctest::Approx(1.05));
  CHECK(spawn_cost(defaults, 32) == doctest::Approx(2.6));
  CHECK(spawn_cost(OverheadModel{0.0, 0.0, 1.0, 0.0}, 16) == 0.0);
  CHECK_THROWS_AS((void)spawn_cost(defaults, 0), PolicyViolation);
}

TEST_CASE("normalization of degenerate actions") {
  CHECK(normalize(ResizeAction::shrink(4), 4).is_none());
  CHECK(normalize(ResizeAction::expand(4), 4).is_none());
  CHECK(normalize(ResizeAction::shrink(2), 4) == ResizeAction::shrink(2));
  CHECK(to_string(ResizeAction::expand(8)) == "expand(8)");
  CHECK(to_string(ResizeAction::none()) == "none");
}

TEST_CASE("expansion from 5 to 10 walks the phases") {
  const auto profile = ladder_profile();
  Reconfigurator r(profile, {1, 10, 2}, 5);
  CHECK(r.steady());
  r.await_decision();
  const auto outcome = r.begin_resize(ResizeAction::expand(10));
  CHECK(outcome.factor == 2);
  CHECK(std::holds_alternative<phase::Spawning>(r.phase()));
  CHECK(std::get<phase::Spawning>(r.phase()).target == 10);
  CHECK(outcome.spawn_s == doctest::Approx(1.0 + 0.05 * 10));

  // Data footprint of 5 processes split into 10 equal chunks; every chunk but
  // the first changes owner.
  const auto old_owners = oracle::default_owners(10, 5);
  const auto new_owners = oracle::default_owners(10, 10);
  int moved = 0;
  for (std::size_t g = 0; g < 10; ++g) moved += old_owners[g] != new_owners[g];
  CHECK(moved == 9);
  const double chunk_bytes = 5.0 * 1'000'000 / 10.0;
  CHECK(outcome.transfer_s == doctest::Approx(moved * chunk_bytes / 12.5e9));
  CHECK_FALSE(oracle::check_plan(r.last_plan(), old_owners, new_owners));

  CHECK_THROWS_AS((void)r.begin_resize(ResizeAction::expand(10)), Busy);
  r.spawned();
  CHECK(std::holds_alternative<phase::Redistributing>(r.phase()));
  CHECK(std::get<phase::Redistributing>(r.phase()).remaining == doctest::Approx(outcome.transfer_s));
  CHECK(r.procs() == 5);
  r.redistributed();
  CHECK(r.procs() == 10);
  CHECK(std::string(phase_name(r.phase())) == "resuming");
  r.resume();
  CHECK(r.steady());
}

TEST_CASE("shrink from 8 to 2 gathers four parents per child") {
  const auto profile = ladder_profile();
  Reconfigurator r(profile, {1, 10, 2}, 8);
  const auto outcome = r.begin_resize(ResizeAction::shrink(2));
  CHECK(outcome.factor == 4);
  CHECK_FALSE(oracle::check_plan(r.last_plan(), oracle::default_owners(8, 8),
                                 oracle::default_owners(8, 2)));
  int from_child0 = 0;
  for (const auto& t : r.last_plan().transfers) from_child0 += t.dst_rank == 0;
  CHECK(from_child0 == 4);
}

TEST_CASE("policy violations") {
  const auto profile = ladder_profile();
  Reconfigurator r(profile, {2, 8, 4}, 4);
  CHECK_THROWS_AS((void)r.begin_resize(ResizeAction::shrink(4)), PolicyViolation);
  CHECK_THROWS_AS((void)r.begin_resize(ResizeAction::expand(2)), PolicyViolation);
  CHECK_THROWS_AS((void)r.begin_resize(ResizeAction::shrink(1)), PolicyViolation);   // below lower
  CHECK_THROWS_AS((void)r.begin_resize(ResizeAction::expand(10)), PolicyViolation);  // above upper
  CHECK_THROWS_AS((void)r.begin_resize(ResizeAction::expand(5)), PolicyViolation);   // not a multiple
  CHECK(r.steady());

  const auto gap_profile = make_profile("gap", {{1, 10.0}, {4, 5.0}});
  Reconfigurator gap(gap_profile, {1, 4, 1}, 1);
  CHECK_THROWS_AS((void)gap.begin_resize(ResizeAction::expand(2)), PolicyViolation);  // unmeasured

  CHECK_THROWS_AS(r.spawned(), Busy);
  CHECK_THROWS_AS(r.decline(), Busy);
  r.await_decision();
  CHECK_THROWS_AS(r.await_decision(), Busy);
  r.decline();
  CHECK(r.steady());
}

}  // TEST_SUITE
