// Copyright 2026 The lfdq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// lfdq command-line front end. Talks to the library only through lfdq.h.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "CLI11.hpp"
#include "lfdq/lfdq.h"

namespace {

constexpr int kExitSchema = 2;
constexpr int kExitEvaluation = 3;

// Input problems map to 2, everything that fails while computing to 3.
int ExitCode(lfdq_status status) {
  switch (status) {
    case LFDQ_OK:
      return 0;
    case LFDQ_ERR_INVALID_ARGUMENT:
    case LFDQ_ERR_FILE_MISSING:
    case LFDQ_ERR_SCHEMA_VIOLATION:
    case LFDQ_ERR_NON_MONOTONIC_TIME:
    case LFDQ_ERR_UNKNOWN_FACE:
    case LFDQ_ERR_MISSING_SESSION:
      return kExitSchema;
    default:
      return kExitEvaluation;
  }
}

int Report(lfdq_status status, const char* step) {
  if (status == LFDQ_OK) return 0;
  std::fprintf(stderr, "lfdq %s: %s\n", step, lfdq_last_error());
  return ExitCode(status);
}

struct ResultsHandle {
  lfdq_results* ptr = nullptr;
  ~ResultsHandle() { lfdq_results_free(ptr); }
};

int Synth(const std::string& spec, const std::string& out) {
  if (int rc = Report(lfdq_cohort_synthesize(spec.c_str(), out.c_str(), 0), "synth")) return rc;
  lfdq_cohort* cohort = nullptr;
  if (int rc = Report(lfdq_cohort_load(out.c_str(), &cohort), "synth")) return rc;
  std::printf("wrote %zu demonstrations in %zu trials to %s\n", lfdq_cohort_demo_count(cohort),
              lfdq_cohort_trial_count(cohort), out.c_str());
  lfdq_cohort_free(cohort);
  return 0;
}

int Eval(const std::string& cohort_dir, const std::string& world_path, const std::string& params,
         const std::string& out) {
  lfdq_world* world = nullptr;
  if (int rc = Report(lfdq_world_load(world_path.c_str(), &world), "eval")) return rc;
  lfdq_cohort* cohort = nullptr;
  lfdq_status status = lfdq_cohort_load(cohort_dir.c_str(), &cohort);
  if (status == LFDQ_OK) status = lfdq_study_evaluate(cohort, world, params.c_str(), out.c_str());
  lfdq_cohort_free(cohort);
  lfdq_world_free(world);
  if (int rc = Report(status, "eval")) return rc;
  ResultsHandle results;
  if (int rc = Report(lfdq_results_load(out.c_str(), &results.ptr), "eval")) return rc;
  std::printf("evaluated %zu trials -> %s\n", lfdq_results_trial_count(results.ptr), out.c_str());
  return 0;
}

int Classify(const std::string& results_dir, double delta) {
  ResultsHandle results;
  if (int rc = Report(lfdq_results_load(results_dir.c_str(), &results.ptr), "classify")) return rc;
  char* labels = nullptr;
  int fast = 0, slow = 0;
  if (int rc = Report(lfdq_results_classify(results.ptr, delta, &labels, &fast, &slow), "classify")) {
    return rc;
  }
  const std::string path = (std::filesystem::path(results_dir) / "labels.json").string();
  std::ofstream(path) << labels;
  lfdq_string_free(labels);
  std::printf("delta %.3f: %d fast, %d slow adapters; labels in %s\n", delta, fast, slow, path.c_str());
  return 0;
}

int MakeReport(const std::string& results_dir, const std::string& out, double delta) {
  ResultsHandle results;
  if (int rc = Report(lfdq_results_load(results_dir.c_str(), &results.ptr), "report")) return rc;
  if (delta <= 0.0) delta = lfdq_results_delta(results.ptr);
  if (int rc = Report(lfdq_results_report(results.ptr, delta, out.c_str()), "report")) return rc;
  double rho = 0.0;
  int defined = 0;
  if (int rc = Report(lfdq_results_rho(results.ptr, &rho, &defined), "report")) return rc;
  if (defined) {
    std::printf("rho = %.4f over %zu trials; tables in %s\n", rho, lfdq_results_trial_count(results.ptr),
                out.c_str());
  } else {
    std::printf("rho undefined (constant rates); tables in %s\n", out.c_str());
  }
  return 0;
}

int Selftest() {
  int failures = 0;
  auto emit = [](const char* line, void*) { std::printf("%s\n", line); };
  if (int rc = Report(lfdq_selftest(emit, nullptr, &failures), "selftest")) return rc;
  std::printf("%s: %d failed\n", failures == 0 ? "selftest ok" : "selftest FAILED", failures);
  return failures == 0 ? 0 : kExitEvaluation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Demonstration quality assessment with task-parameterized GMMs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", lfdq_version());

  std::string spec, out, cohort, world, params, results;
  double delta = 0.8, report_delta = 0.0;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic demonstrator cohort");
  synth->add_option("--spec", spec, "cohort spec JSON")->required()->check(CLI::ExistingFile);
  synth->add_option("--out", out, "output cohort directory")->required();

  auto* eval = app.add_subcommand("eval", "Learn, generate and score every trial of a cohort");
  eval->add_option("--cohort", cohort, "cohort directory")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--world", world, "world JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("--params", params, "evaluation params JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("--out", out, "results directory")->required();

  auto* classify = app.add_subcommand("classify", "Label trial quality and adapter groups");
  classify->add_option("--results", results, "results directory")->required()->check(CLI::ExistingDirectory);
  classify->add_option("--delta", delta, "quality threshold")->check(CLI::Range(0.0, 1.0));

  auto* report = app.add_subcommand("report", "Write rates.csv and summary.json");
  report->add_option("--results", results, "results directory")->required()->check(CLI::ExistingDirectory);
  report->add_option("--out", out, "report directory")->required();
  report->add_option("--delta", report_delta, "quality threshold (default: the one used by eval)")
      ->check(CLI::Range(0.0, 1.0));

  auto* selftest = app.add_subcommand("selftest", "Run the built-in oracle checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitSchema;
  }

  if (*synth) return Synth(spec, out);
  if (*eval) return Eval(cohort, world, params, out);
  if (*classify) return Classify(results, delta);
  if (*report) return MakeReport(results, out, report_delta);
  if (*selftest) return Selftest();
  return kExitSchema;
}
