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

#include "dmrsim/reconfig.hpp"

#include <algorithm>

#include <fmt/core.h>

#include "dmrsim/error.hpp"

namespace dmrsim {

double spawn_cost(const OverheadModel& model, ProcCount target_procs) {
  if (target_procs < 1) throw PolicyViolation("spawn target must be >= 1");
  return model.spawn_base_s + model.spawn_per_proc_s * target_procs;
}

ResizeAction normalize(ResizeAction action, ProcCount current) {
  if (action.kind != ResizeAction::Kind::None && action.to == current) return ResizeAction::none();
  return action;
}

std::string to_string(const ResizeAction& action) {
  switch (action.kind) {
    case ResizeAction::Kind::Expand:
      return fmt::format("expand({})", action.to);
    case ResizeAction::Kind::Shrink:
      return fmt::format("shrink({})", action.to);
    case ResizeAction::Kind::None:
      break;
  }
  return "none";
}

const char* phase_name(const ReconfigPhase& phase) {
  static constexpr const char* kNames[] = {"steady", "awaiting-decision", "spawning",
                                           "redistributing", "resuming"};
  return kNames[phase.index()];
}

bool should_check(const Inhibitors& inhibitors, const CheckState& state, double now,
                  std::int64_t iteration) {
  const bool period_ok =
      inhibitors.period_s <= 0.0 || now - state.last_check_time >= inhibitors.period_s;
  const bool steps_ok = inhibitors.iterations <= 0 ||
                        iteration - state.last_check_iteration >= inhibitors.iterations;
  return period_ok && steps_ok;
}

Reconfigurator::Reconfigurator(const ApplicationProfile& profile, MalleabilityParams bounds,
                               ProcCount procs, OverheadModel overhead)
    : profile_(&profile), bounds_(bounds), procs_(procs), overhead_(overhead) {
  if (procs < 1) throw PolicyViolation("a job needs at least one process");
}

void Reconfigurator::await_decision() {
  if (!steady()) throw Busy(fmt::format("cannot query the RMS while {}", phase_name(phase_)));
  phase_ = phase::AwaitingDecision{};
}

void Reconfigurator::decline() {
  if (!std::holds_alternative<phase::AwaitingDecision>(phase_)) {
    throw Busy(fmt::format("no decision pending (phase {})", phase_name(phase_)));
  }
  phase_ = phase::Steady{};
}

ResizeOutcome Reconfigurator::begin_resize(ResizeAction action) {
  if (!steady() && !std::holds_alternative<phase::AwaitingDecision>(phase_)) {
    throw Busy(fmt::format("a resize is already in flight (phase {})", phase_name(phase_)));
  }
  action = normalize(action, procs_);
  if (action.is_none()) {
    throw PolicyViolation(fmt::format("resize to the current size {} is not an action", procs_));
  }
  const ProcCount to = action.to;
  if (action.kind == ResizeAction::Kind::Expand ? to < procs_ : to > procs_) {
    throw PolicyViolation(
        fmt::format("{} does not match the direction from {}", to_string(action), procs_));
  }
  if (to < bounds_.lower || to > bounds_.upper) {
    throw PolicyViolation(fmt::format("{} leaves the bounds [{}, {}]", to_string(action),
                                      bounds_.lower, bounds_.upper));
  }
  if (!profile_->is_configuration(to)) {
    throw PolicyViolation(
        fmt::format("{} is not a measured configuration of {}", to_string(action), profile_->name));
  }
  int factor = 0;
  try {
    factor = resize_factor(procs_, to);
  } catch (const IncompatibleGroups& e) {
    throw PolicyViolation(e.what());
  }

  // One element per finest chunk keeps the plan small while preserving the
  // exact transfer pattern; the byte volume lives in bytes_per_element.
  const ProcCount big = std::max(procs_, to);
  last_plan_ = plan_default(big, procs_, to);
  LinkModel link;
  link.bytes_per_element =
      static_cast<double>(profile_->bytes_per_process) * procs_ / static_cast<double>(big);
  link.bandwidth_bytes_per_s = overhead_.bandwidth_bytes_per_s;
  link.latency_s_per_transfer = overhead_.latency_s;

  ResizeOutcome outcome;
  outcome.action = action;
  outcome.factor = factor;
  outcome.spawn_s = spawn_cost(overhead_, to);
  outcome.transfer_s = transfer_cost(last_plan_, link);

  target_ = to;
  pending_transfer_s_ = outcome.transfer_s;
  phase_ = phase::Spawning{to};
  return outcome;
}

void Reconfigurator::spawned() {
  if (!std::holds_alternative<phase::Spawning>(phase_)) {
    throw Busy(fmt::format("not spawning (phase {})", phase_name(phase_)));
  }
  phase_ = phase::Redistributing{last_plan_, pending_transfer_s_};
}

void Reconfigurator::redistributed() {
  if (!std::holds_alternative<phase::Redistributing>(phase_)) {
    throw Busy(fmt::format("not redistributing (phase {})", phase_name(phase_)));
  }
  procs_ = target_;
  phase_ = phase::Resuming{};
}

void Reconfigurator::resume() {
  if (!std::holds_alternative<phase::Resuming>(phase_)) {
    throw Busy(fmt::format("not resuming (phase {})", phase_name(phase_)));
  }
  phase_ = phase::Steady{};
}

}  // namespace dmrsim
