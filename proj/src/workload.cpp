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

#include "dmrsim/workload.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <fmt/core.h>

#include "dmrsim/error.hpp"

namespace dmrsim {

JobClass classify(SubmissionMode mode, bool malleable) {
  if (mode == SubmissionMode::Rigid) return malleable ? JobClass::PureMalleable : JobClass::Fixed;
  return malleable ? JobClass::Flexible : JobClass::PureMoldable;
}

SubmissionMode submission_of(JobClass cls) {
  return cls == JobClass::Fixed || cls == JobClass::PureMalleable ? SubmissionMode::Rigid
                                                                  : SubmissionMode::Moldable;
}

bool is_malleable(JobClass cls) {
  return cls == JobClass::PureMalleable || cls == JobClass::Flexible;
}

std::string_view to_string(JobClass cls) {
  switch (cls) {
    case JobClass::Fixed:
      return "fixed";
    case JobClass::PureMoldable:
      return "moldable";
    case JobClass::PureMalleable:
      return "malleable";
    case JobClass::Flexible:
      return "flexible";
  }
  return "fixed";
}

JobClass parse_job_class(std::string_view name) {
  if (name == "fixed") return JobClass::Fixed;
  if (name == "moldable") return JobClass::PureMoldable;
  if (name == "malleable") return JobClass::PureMalleable;
  if (name == "flexible") return JobClass::Flexible;
  throw InvalidSpec(fmt::format("unknown job class '{}'", name));
}

AppCatalog build_catalog(const std::map<std::string, ApplicationProfile>& profiles,
                         double threshold_pct, ProcCount cluster_cap) {
  AppCatalog catalog;
  for (const auto& [name, profile] : profiles) {
    profile.validate();
    auto params =
        derive_malleability_params(gain_difference(profile), threshold_pct, cluster_cap);
    catalog.emplace(name, AppEntry{profile, params});
  }
  return catalog;
}

void WorkloadSpec::validate(const AppCatalog& catalog) const {
  if (num_jobs < 0) throw InvalidSpec("num_jobs must be >= 0");
  if (app_mix.empty()) throw InvalidSpec("app_mix is empty");
  double total = 0.0;
  for (const auto& [app, weight] : app_mix) {
    if (!catalog.contains(app)) throw InvalidSpec(fmt::format("app_mix names unknown app '{}'", app));
    if (!(weight >= 0.0)) throw InvalidSpec(fmt::format("app_mix weight of '{}' is negative", app));
    total += weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidSpec(fmt::format("app_mix weights sum to {}, expected 1", total));
  }
  if (!(arrival_mean_s >= 0.0) || !std::isfinite(arrival_mean_s)) {
    throw InvalidSpec("arrival_mean_s must be >= 0");
  }
  if (const auto* mix = std::get_if<Heterogeneous>(&job_class)) {
    if (!(mix->malleable_pct >= 0.0 && mix->malleable_pct <= 100.0)) {
      throw InvalidSpec("malleable fraction must lie in [0, 100]");
    }
  }
  if (const auto* per_app = std::get_if<PerApp>(&job_class)) {
    for (const auto& app : per_app->malleable_apps) {
      if (!catalog.contains(app)) {
        throw InvalidSpec(fmt::format("malleable app '{}' has no profile", app));
      }
    }
  }
}

namespace {

// Uniform in [0, 1) from the top 53 bits; identical on every platform,
// unlike the std distributions.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<JobSubmission> generate(const WorkloadSpec& spec, const AppCatalog& catalog) {
  spec.validate(catalog);

  std::mt19937_64 rng(spec.seed);
  std::vector<JobSubmission> jobs;
  jobs.reserve(static_cast<std::size_t>(spec.num_jobs));
  double clock = 0.0;
  for (int i = 0; i < spec.num_jobs; ++i) {
    const double gap = -spec.arrival_mean_s * std::log1p(-unit(rng));
    const double app_draw = unit(rng);
    const double malleable_draw = unit(rng);
    if (i > 0) clock += gap;

    const std::string* app = &spec.app_mix.back().first;
    double acc = 0.0;
    for (const auto& [name, weight] : spec.app_mix) {
      acc += weight;
      if (app_draw < acc) {
        app = &name;
        break;
      }
    }

    JobClass cls = JobClass::Fixed;
    if (const auto* uniform = std::get_if<JobClass>(&spec.job_class)) {
      cls = *uniform;
    } else if (const auto* mix = std::get_if<Heterogeneous>(&spec.job_class)) {
      cls = classify(mix->submission, malleable_draw * 100.0 < mix->malleable_pct);
    } else {
      const auto& per_app = std::get<PerApp>(spec.job_class);
      cls = classify(per_app.submission, per_app.malleable_apps.contains(*app));
    }

    JobSubmission job;
    job.id = i;
    // Whole microseconds, so the text form round-trips exactly.
    job.submit_time = std::round(clock * 1e6) / 1e6;
    job.app = *app;
    job.cls = cls;
    job.params = catalog.find(*app)->second.params;
    jobs.push_back(std::move(job));
  }
  return jobs;
}

std::string format_workload(const std::vector<JobSubmission>& jobs) {
  std::string out = "# job_id submit_time app class lower upper preferred request\n";
  for (const auto& j : jobs) {
    const std::string request = j.mode() == SubmissionMode::Rigid
                                    ? fmt::format("{}", j.rigid_request())
                                    : fmt::format("{}-{}", j.params.lower, j.params.upper);
    out += fmt::format("{} {:.6f} {} {} {} {} {} {}\n", j.id, j.submit_time, j.app,
                       to_string(j.cls), j.params.lower, j.params.upper, j.params.preferred,
                       request);
  }
  return out;
}

std::vector<JobSubmission> parse_workload(std::string_view text) {
  std::vector<JobSubmission> jobs;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    JobSubmission j;
    std::string cls;
    std::string request;
    std::string extra;
    if (!(fields >> j.id >> j.submit_time >> j.app >> cls >> j.params.lower >> j.params.upper >>
          j.params.preferred >> request) ||
        (fields >> extra)) {
      throw ParseError(fmt::format(
          "workload line {}: expected 'job_id submit_time app class lower upper preferred "
          "request'",
          lineno));
    }
    try {
      j.cls = parse_job_class(cls);
    } catch (const InvalidSpec&) {
      throw ParseError(fmt::format("workload line {}: unknown class '{}'", lineno, cls));
    }
    const std::string expected = j.mode() == SubmissionMode::Rigid
                                     ? fmt::format("{}", j.params.upper)
                                     : fmt::format("{}-{}", j.params.lower, j.params.upper);
    if (request != expected) {
      throw ParseError(fmt::format("workload line {}: request '{}' does not match class {} "
                                   "(expected '{}')",
                                   lineno, request, cls, expected));
    }
    if (!(j.submit_time >= 0.0) || j.params.lower < 1 || j.params.lower > j.params.preferred ||
        j.params.preferred > j.params.upper) {
      throw ParseError(fmt::format("workload line {}: inconsistent times or limits", lineno));
    }
    if (!jobs.empty() && (j.submit_time < jobs.back().submit_time)) {
      throw ParseError(fmt::format("workload line {}: submit times must be nondecreasing", lineno));
    }
    jobs.push_back(std::move(j));
  }
  return jobs;
}

}  // namespace dmrsim
