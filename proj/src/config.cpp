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

#include "dmrsim/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <fmt/core.h>
#include <json.hpp>

#include "dmrsim/error.hpp"

#ifndef DMRSIM_DEFAULT_PROFILES_DIR
#define DMRSIM_DEFAULT_PROFILES_DIR "profiles"
#endif

namespace dmrsim {

void RunConfig::validate() const {
  if (total_nodes < 1) throw InvalidSpec("cluster.total_nodes must be >= 1");
  if (job_cap < 1 || job_cap > total_nodes) {
    throw InvalidSpec("cluster.job_cap must lie in [1, total_nodes]");
  }
  if (!(tick_s > 0.0) || !std::isfinite(tick_s)) throw InvalidSpec("scheduler.tick_s must be > 0");
  if (overhead.spawn_base_s < 0.0 || overhead.spawn_per_proc_s < 0.0 || overhead.latency_s < 0.0) {
    throw InvalidSpec("overhead constants must be >= 0");
  }
  if (!(overhead.bandwidth_bytes_per_s > 0.0)) {
    throw InvalidSpec("overhead.bandwidth_bytes_per_s must be > 0");
  }
  if (energy.idle_w < 0.0 || energy.loaded_w < 0.0) throw InvalidSpec("energy wattages must be >= 0");
  if (!(threshold_pct > 0.0)) throw InvalidSpec("malleability.threshold_pct must be > 0");
}

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    std::string_view where, std::string_view origin) {
  if (!obj.is_object()) throw ParseError(fmt::format("{}: '{}' must be an object", origin, where));
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) {
      throw ParseError(fmt::format("{}: unknown field '{}{}{}'", origin, where,
                                   where.empty() ? "" : ".", item.key()));
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, std::string_view where,
          std::string_view origin) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(fmt::format("{}: field '{}.{}' has the wrong type", origin, where, key));
  }
}

}  // namespace

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir,
                           std::string_view origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("{}: not valid JSON ({})", origin, e.what()));
  }
  reject_unknown(doc, {"cluster", "scheduler", "overhead", "energy", "malleability", "profiles_dir"},
                 "", origin);

  RunConfig cfg;
  if (doc.contains("cluster")) {
    const auto& c = doc["cluster"];
    reject_unknown(c, {"total_nodes", "job_cap"}, "cluster", origin);
    read(c, "total_nodes", cfg.total_nodes, "cluster", origin);
    read(c, "job_cap", cfg.job_cap, "cluster", origin);
  }
  if (doc.contains("scheduler")) {
    const auto& s = doc["scheduler"];
    reject_unknown(s, {"tick_s", "priority", "malleability"}, "scheduler", origin);
    read(s, "tick_s", cfg.tick_s, "scheduler", origin);
    read(s, "malleability", cfg.malleability, "scheduler", origin);
    std::string priority{to_string(cfg.priority)};
    read(s, "priority", priority, "scheduler", origin);
    try {
      cfg.priority = parse_priority_scheme(priority);
    } catch (const InvalidSpec& e) {
      throw ParseError(fmt::format("{}: field 'scheduler.priority': {}", origin, e.what()));
    }
  }
  if (doc.contains("overhead")) {
    const auto& o = doc["overhead"];
    reject_unknown(o, {"spawn_base_s", "spawn_per_proc_s", "bandwidth_bytes_per_s", "latency_s"},
                   "overhead", origin);
    read(o, "spawn_base_s", cfg.overhead.spawn_base_s, "overhead", origin);
    read(o, "spawn_per_proc_s", cfg.overhead.spawn_per_proc_s, "overhead", origin);
    read(o, "bandwidth_bytes_per_s", cfg.overhead.bandwidth_bytes_per_s, "overhead", origin);
    read(o, "latency_s", cfg.overhead.latency_s, "overhead", origin);
  }
  if (doc.contains("energy")) {
    const auto& e = doc["energy"];
    reject_unknown(e, {"idle_w", "loaded_w"}, "energy", origin);
    read(e, "idle_w", cfg.energy.idle_w, "energy", origin);
    read(e, "loaded_w", cfg.energy.loaded_w, "energy", origin);
  }
  if (doc.contains("malleability")) {
    const auto& m = doc["malleability"];
    reject_unknown(m, {"threshold_pct"}, "malleability", origin);
    read(m, "threshold_pct", cfg.threshold_pct, "malleability", origin);
  }
  if (doc.contains("profiles_dir")) {
    if (!doc["profiles_dir"].is_string()) {
      throw ParseError(fmt::format("{}: field 'profiles_dir' must be a string", origin));
    }
    std::filesystem::path dir = doc["profiles_dir"].get<std::string>();
    cfg.profiles_dir = dir.is_absolute() ? dir : base_dir / dir;
  }

  try {
    cfg.validate();
  } catch (const InvalidSpec& e) {
    throw ParseError(fmt::format("{}: {}", origin, e.what()));
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("{}: cannot open file", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path.parent_path(), path.string());
}

std::filesystem::path default_profiles_dir() { return DMRSIM_DEFAULT_PROFILES_DIR; }

std::filesystem::path profiles_dir_of(const RunConfig& config) {
  return config.profiles_dir.empty() ? default_profiles_dir() : config.profiles_dir;
}

}  // namespace dmrsim
