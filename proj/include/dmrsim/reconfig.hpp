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

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "dmrsim/profiles.hpp"
#include "dmrsim/redistribution.hpp"

namespace dmrsim {

/// Cost constants for a resize.
struct OverheadModel {
  double spawn_base_s = 1.0;
  double spawn_per_proc_s = 0.05;
  double bandwidth_bytes_per_s = 12.5e9;  // 100 Gbit/s
  double latency_s = 0.0;
};

/// spawn_base_s + spawn_per_proc_s * target_procs.
[[nodiscard]] double spawn_cost(const OverheadModel& model, ProcCount target_procs);

struct ResizeAction {
  enum class Kind { None, Expand, Shrink };
  Kind kind = Kind::None;
  ProcCount to = 0;

  static ResizeAction none() { return {}; }
  static ResizeAction expand(ProcCount to) { return {Kind::Expand, to}; }
  static ResizeAction shrink(ProcCount to) { return {Kind::Shrink, to}; }

  [[nodiscard]] bool is_none() const { return kind == Kind::None; }
  friend bool operator==(const ResizeAction&, const ResizeAction&) = default;
};

/// A resize to the current size is no resize at all.
[[nodiscard]] ResizeAction normalize(ResizeAction action, ProcCount current);

[[nodiscard]] std::string to_string(const ResizeAction& action);

namespace phase {
struct Steady {};
struct AwaitingDecision {};
struct Spawning {
  ProcCount target = 0;
};
struct Redistributing {
  RedistributionPlan plan;
  double remaining = 0.0;
};
struct Resuming {};
}  // namespace phase

using ReconfigPhase = std::variant<phase::Steady, phase::AwaitingDecision, phase::Spawning,
                                   phase::Redistributing, phase::Resuming>;

[[nodiscard]] const char* phase_name(const ReconfigPhase& phase);

struct Inhibitors {
  double period_s = 0.0;
  std::int64_t iterations = 0;
};

/// Where the job last consulted the resource manager.
struct CheckState {
  double last_check_time = 0.0;
  std::int64_t last_check_iteration = 0;
};

/// True iff both inhibitors have elapsed (inclusive). Zero disables one.
[[nodiscard]] bool should_check(const Inhibitors& inhibitors, const CheckState& state, double now,
                                std::int64_t iteration);

struct ResizeOutcome {
  ResizeAction action;
  int factor = 1;
  double spawn_s = 0.0;
  double transfer_s = 0.0;
  [[nodiscard]] double overhead() const { return spawn_s + transfer_s; }
};

/// Per-job reconfiguration procedure.
///
///   Steady -> AwaitingDecision -> Steady                         (no action)
///   Steady -> AwaitingDecision -> Spawning -> Redistributing
///          -> Resuming -> Steady                                  (resize)
///
/// Only one resize can be in flight; begin_resize outside Steady or
/// AwaitingDecision throws Busy.
class Reconfigurator {
 public:
  Reconfigurator(const ApplicationProfile& profile, MalleabilityParams bounds, ProcCount procs,
                 OverheadModel overhead = {});
  // The profile must outlive the reconfigurator.
  Reconfigurator(ApplicationProfile&&, MalleabilityParams, ProcCount, OverheadModel = {}) = delete;

  [[nodiscard]] const ReconfigPhase& phase() const { return phase_; }
  [[nodiscard]] ProcCount procs() const { return procs_; }
  [[nodiscard]] const MalleabilityParams& bounds() const { return bounds_; }
  [[nodiscard]] bool steady() const { return std::holds_alternative<phase::Steady>(phase_); }

  /// Steady -> AwaitingDecision.
  void await_decision();
  /// AwaitingDecision -> Steady when the answer is "no action".
  void decline();

  /// Validates the action against the bounds and the multiple/divisible
  /// rule, prices it, and enters Spawning. The job's data footprint
  /// (bytes_per_process * current procs) moves under the default pattern.
  ResizeOutcome begin_resize(ResizeAction action);
  /// Spawning -> Redistributing, with the transfer time still to run.
  void spawned();
  /// Redistributing -> Resuming: the new process count takes effect.
  void redistributed();
  /// Resuming -> Steady.
  void resume();

  /// Plan of the in-flight redistribution; the one built by the last
  /// begin_resize otherwise.
  [[nodiscard]] const RedistributionPlan& last_plan() const { return last_plan_; }

 private:
  const ApplicationProfile* profile_;
  MalleabilityParams bounds_;
  ProcCount procs_;
  OverheadModel overhead_;
  ReconfigPhase phase_ = phase::Steady{};
  ProcCount target_ = 0;
  double pending_transfer_s_ = 0.0;
  RedistributionPlan last_plan_;
};

}  // namespace dmrsim
