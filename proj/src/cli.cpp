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

#include "dmrsim/cli.hpp"

#include <future>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include "dmrsim/error.hpp"
#include "dmrsim/report_io.hpp"
#include "dmrsim/simulator.hpp"

namespace dmrsim::cli {

namespace {

using nlohmann::json;

SubmissionMode parse_submission(const json& value, std::string_view origin) {
  if (!value.is_string()) throw ParseError(fmt::format("{}: 'class.submission' must be a string", origin));
  const auto s = value.get<std::string>();
  if (s == "rigid") return SubmissionMode::Rigid;
  if (s == "moldable") return SubmissionMode::Moldable;
  throw ParseError(fmt::format("{}: 'class.submission' must be 'rigid' or 'moldable'", origin));
}

std::string_view submission_name(SubmissionMode mode) {
  return mode == SubmissionMode::Rigid ? "rigid" : "moldable";
}

SubmissionMode submission_of_rule(const ClassRule& rule) {
  if (const auto* cls = std::get_if<JobClass>(&rule)) return submission_of(*cls);
  if (const auto* mix = std::get_if<Heterogeneous>(&rule)) return mix->submission;
  return std::get<PerApp>(rule).submission;
}

RunConfig config_from(const std::optional<std::filesystem::path>& file) {
  return file ? load_run_config(*file) : RunConfig{};
}

}  // namespace

WorkloadSpec parse_workload_spec(std::string_view text, std::string_view origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("{}: not valid JSON ({})", origin, e.what()));
  }
  if (!doc.is_object()) throw ParseError(fmt::format("{}: expected an object", origin));
  for (const auto& item : doc.items()) {
    const auto& k = item.key();
    if (k != "num_jobs" && k != "app_mix" && k != "class" && k != "arrival_mean_s") {
      throw ParseError(fmt::format("{}: unknown field '{}'", origin, k));
    }
  }

  WorkloadSpec spec;
  if (!doc.contains("num_jobs") || !doc["num_jobs"].is_number_integer()) {
    throw ParseError(fmt::format("{}: field 'num_jobs' must be an integer", origin));
  }
  spec.num_jobs = doc["num_jobs"].get<int>();

  if (!doc.contains("app_mix") || !doc["app_mix"].is_object()) {
    throw ParseError(fmt::format("{}: field 'app_mix' must be an object", origin));
  }
  for (const auto& item : doc["app_mix"].items()) {
    if (!item.value().is_number()) {
      throw ParseError(fmt::format("{}: field 'app_mix.{}' must be a number", origin, item.key()));
    }
    spec.app_mix.emplace_back(item.key(), item.value().get<double>());
  }

  if (doc.contains("arrival_mean_s")) {
    if (!doc["arrival_mean_s"].is_number()) {
      throw ParseError(fmt::format("{}: field 'arrival_mean_s' must be a number", origin));
    }
    spec.arrival_mean_s = doc["arrival_mean_s"].get<double>();
  }

  if (doc.contains("class")) {
    const auto& c = doc["class"];
    if (c.is_string()) {
      try {
        spec.job_class = parse_job_class(c.get<std::string>());
      } catch (const InvalidSpec& e) {
        throw ParseError(fmt::format("{}: field 'class': {}", origin, e.what()));
      }
    } else if (c.is_object()) {
      const SubmissionMode mode =
          c.contains("submission") ? parse_submission(c["submission"], origin) : SubmissionMode::Rigid;
      if (c.contains("malleable_pct") == c.contains("malleable_apps")) {
        throw ParseError(fmt::format(
            "{}: field 'class' needs exactly one of 'malleable_pct' or 'malleable_apps'", origin));
      }
      if (c.contains("malleable_pct")) {
        if (!c["malleable_pct"].is_number()) {
          throw ParseError(fmt::format("{}: field 'class.malleable_pct' must be a number", origin));
        }
        spec.job_class = Heterogeneous{c["malleable_pct"].get<double>(), mode};
      } else {
        if (!c["malleable_apps"].is_array()) {
          throw ParseError(fmt::format("{}: field 'class.malleable_apps' must be a list", origin));
        }
        PerApp per_app;
        per_app.submission = mode;
        for (const auto& a : c["malleable_apps"]) {
          if (!a.is_string()) {
            throw ParseError(fmt::format("{}: field 'class.malleable_apps' must hold names", origin));
          }
          per_app.malleable_apps.insert(a.get<std::string>());
        }
        spec.job_class = std::move(per_app);
      }
    } else {
      throw ParseError(fmt::format("{}: field 'class' must be a string or an object", origin));
    }
  }
  return spec;
}

AppCatalog load_catalog(const RunConfig& config) {
  return build_catalog(load_profile_dir(profiles_dir_of(config)), config.threshold_pct,
                       config.job_cap);
}

void cmd_profile(const ProfileOptions& opts, std::ostream& out) {
  const ApplicationProfile profile = load_profile(opts.profile_file);
  const GainCurve curve = gain_difference(profile);
  const MalleabilityParams params =
      derive_malleability_params(curve, opts.threshold_pct, opts.cluster_cap);

  out << fmt::format("profile {}\n", profile.name);
  out << "procs,time_s,gain_pct\n";
  for (const auto& [procs, seconds] : profile.measured_timings) {
    auto gain = curve.entries.find(procs);
    out << fmt::format("{},{:.6f},{}\n", procs, seconds,
                       gain == curve.entries.end() ? std::string{} : fmt::format("{:.6f}", gain->second));
  }
  out << fmt::format("threshold_pct {:.6f}\n", opts.threshold_pct);
  out << fmt::format("lower {}\npreferred {}\nupper {}\n", params.lower, params.preferred,
                     params.upper);
}

void apply_overrides(WorkloadSpec& spec, const ClassOverrides& overrides) {
  if (overrides.malleable_pct && !overrides.malleable_apps.empty()) {
    throw InvalidSpec("--malleable-fraction and --malleable-apps are mutually exclusive");
  }
  const SubmissionMode mode = submission_of_rule(spec.job_class);
  if (overrides.malleable_pct) {
    spec.job_class = Heterogeneous{*overrides.malleable_pct, mode};
  } else if (!overrides.malleable_apps.empty()) {
    PerApp per_app;
    per_app.submission = mode;
    per_app.malleable_apps.insert(overrides.malleable_apps.begin(), overrides.malleable_apps.end());
    spec.job_class = std::move(per_app);
  }
}

void cmd_gen(const GenOptions& opts, std::ostream& out) {
  const RunConfig config = config_from(opts.config_file);
  const AppCatalog catalog = load_catalog(config);
  WorkloadSpec spec =
      parse_workload_spec(read_text_file(opts.spec_file), opts.spec_file.string());
  spec.seed = opts.seed;
  apply_overrides(spec, opts.overrides);
  const auto jobs = generate(spec, catalog);
  write_text_file(opts.out_file, format_workload(jobs));
  out << fmt::format("wrote {} jobs to {}\n", jobs.size(), opts.out_file.string());
}

void cmd_sim(const SimOptions& opts, std::ostream& out) {
  const RunConfig config = config_from(opts.config_file);
  const AppCatalog catalog = load_catalog(config);
  const auto jobs = parse_workload(read_text_file(opts.workload_file));
  const SimulationTrace trace = run(jobs, catalog, config, opts.seed);
  const MetricsReport report = summarize(trace, config.energy);
  write_run_outputs(opts.out_dir, trace, report);
  out << fmt::format("jobs {} makespan {:.6f} avg_completion {:.6f} allocation_rate {:.6f} "
                     "energy_kwh {:.6f}\n",
                     report.jobs.size(), report.makespan, report.overall.completion,
                     report.allocation_rate_pct, report.energy_kwh);
}

std::vector<SweepVariant> sweep_variants(const SweepOptions& opts) {
  std::vector<SweepVariant> variants;
  for (JobClass cls : opts.classes) {
    variants.push_back({std::string(to_string(cls)), submission_of(cls), cls});
  }
  for (double pct : opts.malleable_pcts) {
    for (SubmissionMode mode : {SubmissionMode::Rigid, SubmissionMode::Moldable}) {
      variants.push_back({fmt::format("{}-mix{}", submission_name(mode), pct), mode,
                          Heterogeneous{pct, mode}});
    }
  }
  for (const auto& app : opts.malleable_apps) {
    for (SubmissionMode mode : {SubmissionMode::Rigid, SubmissionMode::Moldable}) {
      PerApp per_app;
      per_app.submission = mode;
      per_app.malleable_apps.insert(app);
      variants.push_back(
          {fmt::format("{}-only-{}", submission_name(mode), app), mode, std::move(per_app)});
    }
  }
  return variants;
}

std::vector<SweepResult> run_sweep(const WorkloadSpec& base, const std::vector<SweepVariant>& variants,
                                   const AppCatalog& catalog, const RunConfig& config,
                                   std::uint64_t seed) {
  std::vector<std::future<MetricsReport>> futures;
  futures.reserve(variants.size());
  for (const auto& variant : variants) {
    WorkloadSpec spec = base;
    spec.seed = seed;
    spec.job_class = variant.rule;
    futures.push_back(std::async(std::launch::async, [spec, &catalog, &config, seed] {
      return summarize(run(generate(spec, catalog), catalog, config, seed), config.energy);
    }));
  }
  std::vector<SweepResult> results;
  results.reserve(variants.size());
  for (std::size_t i = 0; i < variants.size(); ++i) {
    results.push_back({variants[i], futures[i].get()});
  }
  return results;
}

std::string sweep_csv(const std::vector<SweepResult>& results) {
  const MetricsReport* fixed = nullptr;
  const MetricsReport* moldable = nullptr;
  for (const auto& r : results) {
    if (r.variant.name == to_string(JobClass::Fixed)) fixed = &r.report;
    if (r.variant.name == to_string(JobClass::PureMoldable)) moldable = &r.report;
  }
  auto cell = [](const MetricsReport* ref, auto&& f) {
    return ref ? fmt::format("{:.6f}", f(*ref)) : std::string{};
  };

  std::string out =
      "variant,submission,jobs,avg_waiting,avg_execution,avg_completion,makespan,allocation_rate,"
      "energy_kwh,resizes,speedup_waiting_vs_fixed,speedup_execution_vs_fixed,"
      "speedup_completion_vs_fixed,speedup_completion_vs_moldable,makespan_pct_of_fixed,"
      "energy_pct_of_fixed\n";
  for (const auto& r : results) {
    const auto& m = r.report;
    out += fmt::format(
        "{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{},{},{},{},{},{},{}\n", r.variant.name,
        submission_name(r.variant.submission), m.jobs.size(), m.overall.waiting,
        m.overall.execution, m.overall.completion, m.makespan, m.allocation_rate_pct, m.energy_kwh,
        m.resizes, cell(fixed, [&](const auto& f) { return speedup(f, m).waiting; }),
        cell(fixed, [&](const auto& f) { return speedup(f, m).execution; }),
        cell(fixed, [&](const auto& f) { return speedup(f, m).completion; }),
        cell(moldable, [&](const auto& f) { return speedup(f, m).completion; }),
        cell(fixed, [&](const auto& f) { return f.makespan > 0 ? m.makespan / f.makespan * 100.0 : 100.0; }),
        cell(fixed, [&](const auto& f) {
          return f.energy_kwh > 0 ? m.energy_kwh / f.energy_kwh * 100.0 : 100.0;
        }));
  }
  return out;
}

void cmd_sweep(const SweepOptions& opts, std::ostream& out) {
  const RunConfig config = config_from(opts.config_file);
  const AppCatalog catalog = load_catalog(config);
  WorkloadSpec base = parse_workload_spec(read_text_file(opts.spec_file), opts.spec_file.string());
  base.seed = opts.seed;
  const auto variants = sweep_variants(opts);
  if (variants.empty()) throw InvalidSpec("sweep has no variants");
  for (const auto& v : variants) {
    WorkloadSpec probe = base;
    probe.job_class = v.rule;
    probe.validate(catalog);
  }

  const auto results = run_sweep(base, variants, catalog, config, opts.seed);
  std::error_code ec;
  std::filesystem::create_directories(opts.out_dir, ec);
  if (ec) throw ParseError(fmt::format("{}: cannot create directory", opts.out_dir.string()));
  write_text_file(opts.out_dir / "sweep.csv", sweep_csv(results));
  for (const auto& r : results) {
    const auto dir = opts.out_dir / r.variant.name;
    std::filesystem::create_directories(dir, ec);
    write_text_file(dir / "trace.csv", trace_csv(r.report));
    write_text_file(dir / "throughput.csv", throughput_csv(r.report));
  }
  out << read_text_file(opts.out_dir / "sweep.csv");
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"dmrsim: malleable HPC workload simulator"};
  app.require_subcommand(1);

  ProfileOptions profile_opts;
  auto* profile = app.add_subcommand("profile", "gain table and malleability parameters of a profile");
  profile->add_option("profile_file", profile_opts.profile_file, "profile JSON")->required();
  profile->add_option("--threshold", profile_opts.threshold_pct, "gain threshold in percent");
  profile->add_option("--cap", profile_opts.cluster_cap, "largest node count a job may request");

  GenOptions gen_opts;
  std::optional<double> gen_pct;
  std::vector<std::string> gen_apps;
  std::string gen_config;
  auto* gen = app.add_subcommand("gen", "generate a workload file");
  gen->add_option("spec_file", gen_opts.spec_file, "workload spec JSON")->required();
  gen->add_option("--seed", gen_opts.seed, "random seed")->required();
  gen->add_option("--out", gen_opts.out_file, "output workload file")->required();
  gen->add_option("--config", gen_config, "run configuration JSON");
  gen->add_option("--malleable-fraction", gen_pct, "percentage of malleable jobs");
  gen->add_option("--malleable-apps", gen_apps, "apps whose jobs are malleable")->delimiter(',');

  SimOptions sim_opts;
  std::string sim_config;
  auto* sim = app.add_subcommand("sim", "simulate a workload file");
  sim->add_option("workload_file", sim_opts.workload_file, "workload file")->required();
  sim->add_option("--seed", sim_opts.seed, "run seed (recorded in metrics.csv)")->required();
  sim->add_option("--out", sim_opts.out_dir, "output directory")->required();
  sim->add_option("--config", sim_config, "run configuration JSON");

  SweepOptions sweep_opts;
  std::vector<std::string> sweep_classes;
  std::string sweep_config;
  auto* sweep = app.add_subcommand("sweep", "compare job classes on one job list");
  sweep->add_option("spec_file", sweep_opts.spec_file, "workload spec JSON")->required();
  sweep->add_option("--seed", sweep_opts.seed, "random seed")->required();
  sweep->add_option("--out", sweep_opts.out_dir, "output directory")->required();
  sweep->add_option("--config", sweep_config, "run configuration JSON");
  sweep->add_option("--classes", sweep_classes, "fixed,moldable,malleable,flexible")->delimiter(',');
  sweep->add_option("--malleable-fraction", sweep_opts.malleable_pcts, "malleable percentages")
      ->delimiter(',');
  sweep->add_option("--malleable-apps", sweep_opts.malleable_apps, "per-app malleable variants")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (*profile) {
      cmd_profile(profile_opts, out);
    } else if (*gen) {
      if (!gen_config.empty()) gen_opts.config_file = gen_config;
      gen_opts.overrides.malleable_pct = gen_pct;
      gen_opts.overrides.malleable_apps = gen_apps;
      cmd_gen(gen_opts, out);
    } else if (*sim) {
      if (!sim_config.empty()) sim_opts.config_file = sim_config;
      cmd_sim(sim_opts, out);
    } else if (*sweep) {
      if (!sweep_config.empty()) sweep_opts.config_file = sweep_config;
      if (!sweep_classes.empty()) {
        sweep_opts.classes.clear();
        for (const auto& c : sweep_classes) sweep_opts.classes.push_back(parse_job_class(c));
      }
      cmd_sweep(sweep_opts, out);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace dmrsim::cli
