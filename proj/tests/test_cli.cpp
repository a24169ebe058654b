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

#include <sstream>

#include "dmrsim/cli.hpp"
#include "dmrsim/report_io.hpp"
#include "test_support.hpp"

using namespace dmrsim;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "dmrsim");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path golden(const std::string& name) { return fs::path(DMRSIM_TEST_DIR) / "golden" / name; }
std::string profile_file(const std::string& app) {
  return (dmrsim::testing::profiles_dir() / (app + ".json")).string();
}
std::string spec_file(const std::string& name) {
  return (dmrsim::testing::source_dir() / "specs" / name).string();
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("profile prints the gain table and parameters") {
  const auto r = invoke({"profile", profile_file("cg")});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out == read_text_file(golden("profile_cg.txt")));

  const auto j = invoke({"profile", profile_file("jacobi")});
  CHECK(j.out.find("lower 2\npreferred 4\nupper 32\n") != std::string::npos);
  const auto capped = invoke({"profile", profile_file("cg"), "--cap", "8"});
  CHECK(capped.out.find("lower 2\npreferred 8\nupper 8\n") != std::string::npos);
}

TEST_CASE("profile errors are input errors") {
  const auto dir = dmrsim::testing::scratch_dir("cli-profile");
  write_text_file(dir / "one.json",
                  R"({"name": "one", "measured_timings": {"4": 10}, "reference_iterations": 5})");
  const auto r = invoke({"profile", (dir / "one.json").string()});
  CHECK(r.code == cli::kExitInputError);
  CHECK(r.err.find("error:") == 0);

  CHECK(invoke({"profile", (dir / "missing.json").string()}).code == cli::kExitInputError);
  CHECK(invoke({"frobnicate"}).code == cli::kExitInputError);
  CHECK(invoke({"--help"}).code == cli::kExitOk);
}

TEST_CASE("gen requires a seed and is deterministic") {
  const auto dir = dmrsim::testing::scratch_dir("cli-gen");
  const auto spec = golden("small_spec.json").string();
  CHECK(invoke({"gen", spec, "--out", (dir / "w.txt").string()}).code == cli::kExitInputError);

  REQUIRE(invoke({"gen", spec, "--seed", "42", "--out", (dir / "a.txt").string()}).code == 0);
  REQUIRE(invoke({"gen", spec, "--seed", "42", "--out", (dir / "b.txt").string()}).code == 0);
  const auto a = read_text_file(dir / "a.txt");
  CHECK(a == read_text_file(dir / "b.txt"));
  CHECK(a == read_text_file(golden("small_workload.txt")));

  REQUIRE(invoke({"gen", spec, "--seed", "43", "--out", (dir / "c.txt").string()}).code == 0);
  CHECK(a != read_text_file(dir / "c.txt"));
}

TEST_CASE("gen class overrides") {
  const auto dir = dmrsim::testing::scratch_dir("cli-gen-override");
  REQUIRE(invoke({"gen", spec_file("fixed-100.json"), "--seed", "1", "--malleable-apps", "nbody,cg",
                  "--out", (dir / "w.txt").string()})
              .code == 0);
  for (const auto& j : parse_workload(read_text_file(dir / "w.txt"))) {
    CHECK(j.malleable() == (j.app == "nbody" || j.app == "cg"));
    CHECK(j.mode() == SubmissionMode::Rigid);
  }
  REQUIRE(invoke({"gen", spec_file("fixed-100.json"), "--seed", "1", "--malleable-fraction", "100",
                  "--out", (dir / "all.txt").string()})
              .code == 0);
  for (const auto& j : parse_workload(read_text_file(dir / "all.txt"))) {
    CHECK(j.cls == JobClass::PureMalleable);
  }
  CHECK(invoke({"gen", spec_file("fixed-100.json"), "--seed", "1", "--malleable-fraction", "50",
                "--malleable-apps", "cg", "--out", (dir / "x.txt").string()})
            .code == cli::kExitInputError);
  CHECK(invoke({"gen", spec_file("fixed-100.json"), "--seed", "1", "--malleable-apps", "lu",
                "--out", (dir / "x.txt").string()})
            .code == cli::kExitInputError);
}

TEST_CASE("sim writes every report with stable headers") {
  const auto dir = dmrsim::testing::scratch_dir("cli-sim");
  const auto r = invoke({"sim", golden("small_workload.txt").string(), "--seed", "42", "--config",
                         golden("small_config.json").string(), "--out", (dir / "run").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("jobs 8 ", 0) == 0);
  CHECK(read_text_file(dir / "run" / "trace.csv") == read_text_file(golden("small_trace.csv")));
  CHECK(read_text_file(dir / "run" / "resizes.csv") == read_text_file(golden("small_resizes.csv")));
  CHECK(first_line(read_text_file(dir / "run" / "series.csv")) ==
        "t,allocated_nodes,running_jobs,completed_jobs");
  CHECK(first_line(read_text_file(dir / "run" / "throughput.csv")) == "bucket_start,completed_jobs");
  const auto metrics = read_text_file(dir / "run" / "metrics.csv");
  CHECK(metrics.rfind("metric,value\njobs,8\n", 0) == 0);
  CHECK(metrics.find("\nseed,42\n") != std::string::npos);
  CHECK(metrics.find("\navg_completion.cg,") != std::string::npos);
}

TEST_CASE("sim of an empty workload writes header-only files") {
  const auto dir = dmrsim::testing::scratch_dir("cli-sim-empty");
  write_text_file(dir / "empty.txt", "# job_id submit_time app class lower upper preferred request\n");
  REQUIRE(invoke({"sim", (dir / "empty.txt").string(), "--seed", "1", "--out", (dir / "run").string()})
              .code == 0);
  CHECK(read_text_file(dir / "run" / "trace.csv") ==
        "job_id,app,class,submit,start,end,waiting,execution,completion,resizes\n");
  CHECK(read_text_file(dir / "run" / "series.csv") == "t,allocated_nodes,running_jobs,completed_jobs\n");
  CHECK(read_text_file(dir / "run" / "resizes.csv") ==
        "job_id,begin,end,from,to,spawn_s,transfer_s,promoted_job\n");
  CHECK(read_text_file(dir / "run" / "throughput.csv") == "bucket_start,completed_jobs\n");
}

TEST_CASE("sim rejects malformed input") {
  const auto dir = dmrsim::testing::scratch_dir("cli-sim-bad");
  write_text_file(dir / "bad.txt", "0 0.0 cg fixed 2 32 16\n");
  CHECK(invoke({"sim", (dir / "bad.txt").string(), "--seed", "1", "--out", (dir / "run").string()})
            .code == cli::kExitInputError);
  write_text_file(dir / "unknown.txt", "0 0.0 lu fixed 2 32 16 32\n");
  CHECK(invoke({"sim", (dir / "unknown.txt").string(), "--seed", "1", "--out", (dir / "run").string()})
            .code == cli::kExitInputError);
  write_text_file(dir / "cfg.json", R"({"cluster": {"total_nodes": 0}})");
  CHECK(invoke({"sim", golden("small_workload.txt").string(), "--seed", "1", "--config",
                (dir / "cfg.json").string(), "--out", (dir / "run").string()})
            .code == cli::kExitInputError);
}

TEST_CASE("workload spec files") {
  const auto spec = cli::parse_workload_spec(read_text_file(spec_file("nbody-only-rigid.json")));
  CHECK(spec.num_jobs == 1000);
  const auto* per_app = std::get_if<PerApp>(&spec.job_class);
  REQUIRE(per_app);
  CHECK(per_app->malleable_apps.contains("nbody"));
  CHECK(per_app->submission == SubmissionMode::Rigid);

  const auto mix = cli::parse_workload_spec(
      R"({"num_jobs": 3, "app_mix": {"cg": 1}, "class": {"malleable_pct": 25, "submission": "moldable"}})");
  CHECK(std::get<Heterogeneous>(mix.job_class).malleable_pct == 25.0);
  CHECK(mix.arrival_mean_s == kDefaultArrivalMeanS);

  CHECK_THROWS_AS((void)cli::parse_workload_spec(R"({"num_jobs": 3, "app_mix": {"cg": 1}, "seed": 4})"),
                  InputError);
  CHECK_THROWS_AS((void)cli::parse_workload_spec(R"({"num_jobs": 3, "app_mix": {"cg": 1}, "class": "rigid"})"),
                  InputError);
}

TEST_CASE("sweep compares variants of one job list") {
  const auto dir = dmrsim::testing::scratch_dir("cli-sweep");
  write_text_file(dir / "spec.json",
                  R"({"num_jobs": 40, "app_mix": {"cg": 0.25, "jacobi": 0.25, "nbody": 0.25, "hpg": 0.25},
                      "class": "fixed", "arrival_mean_s": 40})");
  const auto r = invoke({"sweep", (dir / "spec.json").string(), "--seed", "3", "--out",
                         (dir / "out").string(), "--malleable-fraction", "50", "--malleable-apps", "nbody"});
  REQUIRE(r.code == 0);
  const auto csv = read_text_file(dir / "out" / "sweep.csv");
  CHECK(r.out == csv);
  CHECK(first_line(csv) ==
        "variant,submission,jobs,avg_waiting,avg_execution,avg_completion,makespan,allocation_rate,"
        "energy_kwh,resizes,speedup_waiting_vs_fixed,speedup_execution_vs_fixed,"
        "speedup_completion_vs_fixed,speedup_completion_vs_moldable,makespan_pct_of_fixed,"
        "energy_pct_of_fixed");
  std::vector<std::string> names;
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) names.push_back(line.substr(0, line.find(',')));
  CHECK(names == std::vector<std::string>{"fixed", "moldable", "malleable", "flexible", "rigid-mix50",
                                          "moldable-mix50", "rigid-only-nbody", "moldable-only-nbody"});
  CHECK(csv.find("\nfixed,rigid,40,") != std::string::npos);
  for (const auto& n : names) CHECK(fs::exists(dir / "out" / n / "trace.csv"));
  CHECK(invoke({"sweep", (dir / "spec.json").string(), "--seed", "3", "--out", (dir / "o2").string(),
                "--classes", "bogus"})
            .code == cli::kExitInputError);
}

}  // TEST_SUITE
