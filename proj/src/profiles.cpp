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

#include "dmrsim/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/core.h>
#include <json.hpp>

#include "dmrsim/error.hpp"

namespace dmrsim {

std::int64_t IterationRule::iterations_for(ProcCount procs) const {
  if (per_worker > 0) {
    return std::max<std::int64_t>(0, procs - io_ranks) * per_worker;
  }
  return fixed;
}

void ApplicationProfile::validate() const {
  if (name.empty()) throw InvalidProfile("profile: name must not be empty");
  if (measured_timings.empty()) {
    throw InvalidProfile(fmt::format("profile {}: measured_timings is empty", name));
  }
  if (reference_iterations < 1) {
    throw InvalidProfile(fmt::format("profile {}: reference_iterations must be >= 1", name));
  }
  if (bytes_per_process < 0) {
    throw InvalidProfile(fmt::format("profile {}: bytes_per_process must be >= 0", name));
  }
  if (min_feasible_procs < 1) {
    throw InvalidProfile(fmt::format("profile {}: min_feasible_procs must be >= 1", name));
  }
  if (!(inhibitor_period_s >= 0.0) || !std::isfinite(inhibitor_period_s)) {
    throw InvalidProfile(fmt::format("profile {}: inhibitor_period_s must be >= 0", name));
  }
  if (inhibitor_iterations < 0) {
    throw InvalidProfile(fmt::format("profile {}: inhibitor_iterations must be >= 0", name));
  }
  if (job_iterations.fixed < 0 || job_iterations.per_worker < 0 || job_iterations.io_ranks < 0) {
    throw InvalidProfile(fmt::format("profile {}: job_iterations must be >= 0", name));
  }

  ProcCount prev = 0;
  for (const auto& [procs, seconds] : measured_timings) {
    if (procs < 1) {
      throw InvalidProfile(fmt::format("profile {}: process count {} must be >= 1", name, procs));
    }
    if (prev != 0 && procs % prev != 0) {
      throw InvalidProfile(fmt::format(
          "profile {}: process count {} is not a multiple of its predecessor {}", name, procs,
          prev));
    }
    if (!std::isfinite(seconds) || seconds <= 0.0) {
      throw InvalidProfile(
          fmt::format("profile {}: timing at {} procs must be finite and > 0", name, procs));
    }
    prev = procs;
  }
  if (smallest_configuration() < min_feasible_procs) {
    throw InvalidProfile(fmt::format("profile {}: smallest measured count {} is below {}", name,
                                     smallest_configuration(), min_feasible_procs));
  }
}

std::vector<ProcCount> ApplicationProfile::configurations() const {
  std::vector<ProcCount> out;
  out.reserve(measured_timings.size());
  for (const auto& entry : measured_timings) out.push_back(entry.first);
  return out;
}

ProcCount ApplicationProfile::smallest_configuration() const {
  if (measured_timings.empty()) throw InsufficientData("profile has no measured configurations");
  return measured_timings.begin()->first;
}

GainCurve gain_difference(const ApplicationProfile& profile) {
  if (profile.measured_timings.size() < 2) {
    throw InsufficientData(fmt::format("profile {}: gain difference needs at least 2 measured "
                                       "configurations, got {}",
                                       profile.name, profile.measured_timings.size()));
  }
  GainCurve curve;
  auto it = profile.measured_timings.begin();
  curve.reference_procs = it->first;
  const double t_min_procs = it->second;
  double t_previous = it->second;
  for (++it; it != profile.measured_timings.end(); ++it) {
    curve.entries.emplace(it->first, (t_previous - it->second) / t_min_procs * 100.0);
    t_previous = it->second;
  }
  return curve;
}

MalleabilityParams derive_malleability_params(const GainCurve& curve, double threshold_pct,
                                              ProcCount cluster_cap) {
  if (curve.entries.empty()) throw InsufficientData("gain curve is empty");
  if (!(threshold_pct > 0.0)) throw InvalidSpec("threshold must be > 0");

  std::vector<std::pair<ProcCount, double>> points(curve.entries.begin(), curve.entries.end());

  // Index into `points`; -1 denotes the reference configuration.
  auto procs_at = [&](std::ptrdiff_t i) {
    return i < 0 ? curve.reference_procs : points[static_cast<std::size_t>(i)].first;
  };
  const auto n = static_cast<std::ptrdiff_t>(points.size());

  std::ptrdiff_t lower = -1;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (points[static_cast<std::size_t>(i)].second > threshold_pct) {
      lower = i;
      break;
    }
  }

  std::ptrdiff_t preferred = -1;
  if (lower >= 0) {
    preferred = lower;
    while (preferred + 1 < n && points[static_cast<std::size_t>(preferred + 1)].second >= threshold_pct) {
      ++preferred;
    }
  }

  // Upper: the configuration preceding the first negative gain past the
  // preferred one. Searching from `preferred` keeps lower <= preferred <= upper.
  std::ptrdiff_t upper = n - 1;
  for (std::ptrdiff_t i = preferred + 1; i < n; ++i) {
    if (points[static_cast<std::size_t>(i)].second < 0.0) {
      upper = i - 1;
      break;
    }
  }

  auto clamp = [&](ProcCount procs) {
    if (procs <= cluster_cap) return procs;
    ProcCount best = 0;
    for (std::ptrdiff_t i = -1; i < n; ++i) {
      if (procs_at(i) <= cluster_cap) best = procs_at(i);
    }
    if (best == 0) {
      throw InvalidSpec(fmt::format("cluster cap {} is below the smallest configuration {}",
                                    cluster_cap, curve.reference_procs));
    }
    return best;
  };

  MalleabilityParams params;
  params.lower = clamp(procs_at(lower));
  params.preferred = clamp(procs_at(preferred));
  params.upper = clamp(procs_at(upper));
  return params;
}

double execution_time(const ApplicationProfile& profile, ProcCount procs,
                      std::int64_t iterations) {
  auto it = profile.measured_timings.find(procs);
  if (it == profile.measured_timings.end()) {
    throw UnknownConfiguration(
        fmt::format("profile {}: no measurement at {} processes", profile.name, procs));
  }
  if (iterations < 0) throw InvalidSpec("iterations must be >= 0");
  return it->second * static_cast<double>(iterations) /
         static_cast<double>(profile.reference_iterations);
}

namespace {

using nlohmann::json;

template <typename T>
T field(const json& doc, const char* key, std::string_view origin) {
  if (!doc.contains(key)) throw ParseError(fmt::format("{}: missing field '{}'", origin, key));
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(fmt::format("{}: field '{}' has the wrong type", origin, key));
  }
}

template <typename T>
T optional_field(const json& doc, const char* key, T fallback, std::string_view origin) {
  if (!doc.contains(key)) return fallback;
  return field<T>(doc, key, origin);
}

}  // namespace

ApplicationProfile parse_profile(std::string_view text, std::string_view origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("{}: not valid JSON ({})", origin, e.what()));
  }
  if (!doc.is_object()) throw ParseError(fmt::format("{}: expected an object", origin));

  static const char* const kKnown[] = {"name",
                                       "measured_timings",
                                       "reference_iterations",
                                       "bytes_per_process",
                                       "min_feasible_procs",
                                       "inhibitor_period_s",
                                       "inhibitor_iterations",
                                       "job_iterations"};
  for (const auto& item : doc.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), item.key()) == std::end(kKnown)) {
      throw ParseError(fmt::format("{}: unknown field '{}'", origin, item.key()));
    }
  }

  ApplicationProfile p;
  p.name = field<std::string>(doc, "name", origin);

  if (!doc.contains("measured_timings") || !doc["measured_timings"].is_object()) {
    throw ParseError(fmt::format("{}: field 'measured_timings' must be an object", origin));
  }
  for (const auto& item : doc["measured_timings"].items()) {
    ProcCount procs = 0;
    std::size_t used = 0;
    try {
      procs = std::stoi(item.key(), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.key().size() || !item.value().is_number()) {
      throw ParseError(
          fmt::format("{}: field 'measured_timings' has a bad entry '{}'", origin, item.key()));
    }
    p.measured_timings[procs] = item.value().get<double>();
  }

  p.reference_iterations = field<std::int64_t>(doc, "reference_iterations", origin);
  p.bytes_per_process = optional_field<std::int64_t>(doc, "bytes_per_process", 0, origin);
  p.min_feasible_procs = optional_field<ProcCount>(doc, "min_feasible_procs", 1, origin);
  p.inhibitor_period_s = optional_field<double>(doc, "inhibitor_period_s", 0.0, origin);
  p.inhibitor_iterations = optional_field<std::int64_t>(doc, "inhibitor_iterations", 0, origin);

  if (!doc.contains("job_iterations")) {
    p.job_iterations.fixed = p.reference_iterations;
  } else if (doc["job_iterations"].is_number_integer()) {
    p.job_iterations.fixed = doc["job_iterations"].get<std::int64_t>();
  } else if (doc["job_iterations"].is_object()) {
    const auto& rule = doc["job_iterations"];
    p.job_iterations.per_worker = field<std::int64_t>(rule, "per_worker", origin);
    p.job_iterations.io_ranks = optional_field<ProcCount>(rule, "io_ranks", 0, origin);
  } else {
    throw ParseError(fmt::format("{}: field 'job_iterations' must be an integer or an object",
                                 origin));
  }

  try {
    p.validate();
  } catch (const InvalidProfile& e) {
    throw ParseError(fmt::format("{}: {}", origin, e.what()));
  }
  return p;
}

ApplicationProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("{}: cannot open file", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_profile(buf.str(), path.string());
}

std::map<std::string, ApplicationProfile> load_profile_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw ParseError(fmt::format("{}: not a directory", dir.string()));
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::map<std::string, ApplicationProfile> out;
  for (const auto& file : files) {
    auto profile = load_profile(file);
    auto name = profile.name;
    if (!out.emplace(name, std::move(profile)).second) {
      throw ParseError(fmt::format("{}: duplicate profile name '{}'", file.string(), name));
    }
  }
  return out;
}

}  // namespace dmrsim
