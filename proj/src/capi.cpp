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


#include "lfdq/lfdq.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <utility>

#include "json.hpp"
#include "lfdq/assessment.hpp"
#include "lfdq/error.hpp"
#include "lfdq/jsonio.hpp"
#include "lfdq/selftest.hpp"
#include "lfdq/synthcohort.hpp"

struct lfdq_chain {
  lfdq::KinematicChain value;
};
struct lfdq_world {
  lfdq::TaskWorld value;
};
struct lfdq_demoset {
  lfdq::DemoSet value;
};
struct lfdq_model {
  lfdq::TpgmmModel value;
};
struct lfdq_cohort {
  lfdq::Cohort value;
};
struct lfdq_results {
  std::vector<lfdq::TrialResult> value;
  double delta = 0.8;
};

namespace {

thread_local std::string g_last_error;

lfdq_status Fail(lfdq_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
lfdq_status Guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return LFDQ_OK;
  } catch (const lfdq::Error& e) {
    return Fail(static_cast<lfdq_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return Fail(LFDQ_ERR_SCHEMA_VIOLATION, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(LFDQ_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(LFDQ_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(LFDQ_ERR_INTERNAL, "unknown exception");
  }
}

void Require(bool condition, const char* what) {
  if (!condition) throw lfdq::Error(lfdq::ErrorCode::kInvalidArgument, what);
}

template <typename Handle, typename Value>
void Emit(Handle** out, Value&& value) {
  *out = new Handle{std::forward<Value>(value)};
}

lfdq::JointVector ReadJoints(const double q[7]) {
  lfdq::JointVector v;
  for (int i = 0; i < lfdq::kNumJoints; ++i) v(i) = q[i];
  return v;
}

void WritePose(const lfdq::Pose& pose, double position[3], double quat_wxyz[4]) {
  for (int i = 0; i < 3; ++i) position[i] = pose.position(i);
  const Eigen::Vector4d q = lfdq::QuatToWxyz(pose.orientation);
  for (int i = 0; i < 4; ++i) quat_wxyz[i] = q(i);
}

lfdq::FaceId ToFace(lfdq_face face) {
  if (face == LFDQ_FACE_LOW) return lfdq::FaceId::kLow;
  if (face == LFDQ_FACE_HIGH) return lfdq::FaceId::kHigh;
  throw lfdq::Error(lfdq::ErrorCode::kUnknownFace, "face must be LFDQ_FACE_LOW or LFDQ_FACE_HIGH");
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* lfdq_version(void) { return "1.0.0"; }

const char* lfdq_status_name(lfdq_status status) {
  if (status == LFDQ_OK) return "Ok";
  if (status == LFDQ_ERR_INTERNAL) return "Internal";
  if (status >= LFDQ_ERR_INVALID_ARGUMENT && status <= LFDQ_ERR_EVALUATION_FAILURE) {
    return lfdq::ErrorCodeName(static_cast<lfdq::ErrorCode>(status));
  }
  return "Unknown";
}

const char* lfdq_last_error(void) { return g_last_error.c_str(); }

void lfdq_string_free(char* text) { std::free(text); }

lfdq_status lfdq_chain_reference(lfdq_chain** out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    Emit(out, lfdq::ReferenceChain());
  });
}

lfdq_status lfdq_chain_load(const char* path, lfdq_chain** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    Emit(out, lfdq::LoadChain(path));
  });
}

lfdq_status lfdq_chain_save(const lfdq_chain* chain, const char* path) {
  return Guard([&] {
    Require(chain != nullptr && path != nullptr, "null argument");
    lfdq::SaveChain(chain->value, path);
  });
}

void lfdq_chain_free(lfdq_chain* chain) { delete chain; }

lfdq_status lfdq_chain_forward(const lfdq_chain* chain, const double q[7], double position[3],
                               double quat_wxyz[4]) {
  return Guard([&] {
    Require(chain && q && position && quat_wxyz, "null argument");
    WritePose(lfdq::ForwardKinematics(chain->value, ReadJoints(q)), position, quat_wxyz);
  });
}

lfdq_status lfdq_chain_jacobian(const lfdq_chain* chain, const double q[7], double jacobian[42]) {
  return Guard([&] {
    Require(chain && q && jacobian, "null argument");
    const lfdq::Jacobian j = lfdq::ComputeJacobian(chain->value, ReadJoints(q));
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < lfdq::kNumJoints; ++c) jacobian[r * lfdq::kNumJoints + c] = j(r, c);
  });
}

lfdq_status lfdq_world_reference(lfdq_world** out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    Emit(out, lfdq::ReferenceWorld());
  });
}

lfdq_status lfdq_world_load(const char* path, lfdq_world** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    Emit(out, lfdq::LoadWorld(path));
  });
}

lfdq_status lfdq_world_save(const lfdq_world* world, const char* path) {
  return Guard([&] {
    Require(world != nullptr && path != nullptr, "null argument");
    lfdq::WriteTextFile(path, lfdq::WorldToJsonText(world->value));
  });
}

void lfdq_world_free(lfdq_world* world) { delete world; }

lfdq_status lfdq_world_target(const lfdq_world* world, lfdq_face face, int index,
                              double position[3], double quat_wxyz[4]) {
  return Guard([&] {
    Require(world && position && quat_wxyz, "null argument");
    const auto targets = lfdq::DemonstratedTargets(world->value, ToFace(face));
    Require(index >= 0 && index < static_cast<int>(targets.size()), "target index out of range");
    WritePose(targets[index].ToPose(), position, quat_wxyz);
  });
}

lfdq_status lfdq_demoset_load(const char* path, lfdq_demoset** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    Emit(out, lfdq::LoadDemoSet(path));
  });
}

lfdq_status lfdq_demoset_from_files(const lfdq_chain* chain, const char* const* paths,
                                    size_t count, lfdq_demoset** out) {
  return Guard([&] {
    Require(chain && out && (paths || count == 0), "null argument");
    lfdq::DemoSet set;
    for (size_t i = 0; i < count; ++i) {
      Require(paths[i] != nullptr, "null path");
      set.demos.push_back(lfdq::LoadDemonstration(chain->value, paths[i]));
    }
    Emit(out, std::move(set));
  });
}

lfdq_status lfdq_demoset_save(const lfdq_demoset* set, const char* path) {
  return Guard([&] {
    Require(set != nullptr && path != nullptr, "null argument");
    lfdq::SaveDemoSet(set->value, path);
  });
}

lfdq_status lfdq_demoset_export_csv(const lfdq_demoset* set, const char* directory) {
  return Guard([&] {
    Require(set != nullptr && directory != nullptr, "null argument");
    lfdq::ExportDemoSetCsv(set->value, directory);
  });
}

lfdq_status lfdq_demoset_align(const lfdq_demoset* set, int length, lfdq_demoset** out) {
  return Guard([&] {
    Require(set != nullptr && out != nullptr, "null argument");
    Require(length >= 2, "length must be >= 2");
    Emit(out, lfdq::DtwAlign(set->value, length));
  });
}

size_t lfdq_demoset_size(const lfdq_demoset* set) { return set ? set->value.demos.size() : 0; }

void lfdq_demoset_free(lfdq_demoset* set) { delete set; }

lfdq_status lfdq_model_fit(const lfdq_demoset* aligned, const lfdq_world* world, int components,
                           double regularization, lfdq_model** out) {
  return Guard([&] {
    Require(aligned && world && out, "null argument");
    lfdq::EmOptions options;
    options.num_components = components;
    options.regularization = regularization;
    Require(components >= 1 && regularization >= 0.0, "components must be >= 1, reg >= 0");
    Emit(out, lfdq::FitTrialModel(aligned->value, world->value, options).model);
  });
}

lfdq_status lfdq_model_load(const char* path, lfdq_model** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    Emit(out, lfdq::LoadModel(path));
  });
}

lfdq_status lfdq_model_save(const lfdq_model* model, const char* path) {
  return Guard([&] {
    Require(model != nullptr && path != nullptr, "null argument");
    lfdq::SaveModel(model->value, path);
  });
}

void lfdq_model_free(lfdq_model* model) { delete model; }

lfdq_status lfdq_model_generate(const lfdq_model* model, const lfdq_chain* chain,
                                const double target_position[3], const double target_quat_wxyz[4],
                                int samples, double* out) {
  return Guard([&] {
    Require(model && chain && target_position && target_quat_wxyz && out, "null argument");
    lfdq::Target target;
    target.position = Eigen::Vector3d(target_position[0], target_position[1], target_position[2]);
    target.orientation = lfdq::WxyzToQuat(Eigen::Vector4d(target_quat_wxyz[0], target_quat_wxyz[1],
                                                          target_quat_wxyz[2], target_quat_wxyz[3]))
                             .normalized();
    const auto traj =
        lfdq::GenerateTrajectory(model->value, lfdq::QueryFrames(chain->value, target), samples);
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const lfdq::StateVector v = traj[k].ToVector();
      for (int i = 0; i < lfdq::kStateDim; ++i) out[k * lfdq::kStateDim + i] = v(i);
    }
  });
}

lfdq_status lfdq_cohort_synthesize(const char* spec_path, const char* out_dir, int threads) {
  return Guard([&] {
    Require(spec_path != nullptr && out_dir != nullptr, "null argument");
    const lfdq::CohortSpec spec = lfdq::LoadCohortSpec(spec_path);
    const lfdq::KinematicChain chain =
        spec.chain_file.empty() ? lfdq::ReferenceChain() : lfdq::LoadChain(spec.chain_file);
    const lfdq::TaskWorld world =
        spec.world_file.empty() ? lfdq::ReferenceWorld() : lfdq::LoadWorld(spec.world_file);
    const lfdq::Cohort cohort = lfdq::GenerateCohort(chain, world, spec, threads);
    lfdq::SaveCohort(cohort, out_dir);
  });
}

lfdq_status lfdq_cohort_load(const char* directory, lfdq_cohort** out) {
  return Guard([&] {
    Require(directory != nullptr && out != nullptr, "null argument");
    Emit(out, lfdq::LoadCohort(directory));
  });
}

size_t lfdq_cohort_demo_count(const lfdq_cohort* cohort) { return cohort ? cohort->value.DemoCount() : 0; }

size_t lfdq_cohort_trial_count(const lfdq_cohort* cohort) {
  return cohort ? cohort->value.trials.size() : 0;
}

void lfdq_cohort_free(lfdq_cohort* cohort) { delete cohort; }

lfdq_status lfdq_study_evaluate(const lfdq_cohort* cohort, const lfdq_world* world,
                                const char* params_path, const char* results_dir) {
  const lfdq_status status = Guard([&] {
    Require(cohort && world && params_path && results_dir, "null argument");
    const lfdq::EvalParams params = lfdq::LoadEvalParams(params_path);
    const lfdq::StudyReport report = lfdq::RunStudy(cohort->value, world->value, params);
    lfdq::SaveResults(report.trials, params.delta, results_dir);
  });
  return status;
}

lfdq_status lfdq_results_load(const char* directory, lfdq_results** out) {
  return Guard([&] {
    Require(directory != nullptr && out != nullptr, "null argument");
    double delta = 0.8;
    auto trials = lfdq::LoadResults(directory, &delta);
    *out = new lfdq_results{std::move(trials), delta};
  });
}

size_t lfdq_results_trial_count(const lfdq_results* results) {
  return results ? results->value.size() : 0;
}

double lfdq_results_delta(const lfdq_results* results) { return results ? results->delta : 0.0; }

void lfdq_results_free(lfdq_results* results) { delete results; }

lfdq_status lfdq_results_classify(const lfdq_results* results, double delta, char** labels_json,
                                  int* fast_count, int* slow_count) {
  return Guard([&] {
    Require(results != nullptr, "results is null");
    Require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    const lfdq::StudyReport report = lfdq::Summarize(results->value, delta);
    int fast = 0;
    for (const auto& [id, label] : report.adapters) fast += label == lfdq::AdapterLabel::kFast;
    if (fast_count) *fast_count = fast;
    if (slow_count) *slow_count = static_cast<int>(report.adapters.size()) - fast;
    if (labels_json) *labels_json = CopyString(lfdq::LabelsJsonText(report));
  });
}

lfdq_status lfdq_results_report(const lfdq_results* results, double delta, const char* out_dir) {
  return Guard([&] {
    Require(results != nullptr && out_dir != nullptr, "null argument");
    Require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    lfdq::SaveReport(lfdq::Summarize(results->value, delta), out_dir);
  });
}

lfdq_status lfdq_results_rho(const lfdq_results* results, double* rho, int* defined) {
  return Guard([&] {
    Require(results && rho && defined, "null argument");
    const lfdq::StudyReport report = lfdq::Summarize(results->value, 0.8);
    *defined = report.rho.has_value() ? 1 : 0;
    *rho = report.rho.value_or(0.0);
  });
}

lfdq_status lfdq_pearson(const double* x, const double* y, size_t n, double* rho) {
  return Guard([&] {
    Require(rho != nullptr && (n == 0 || (x && y)), "null argument");
    *rho = lfdq::Pearson(std::vector<double>(x, x + n), std::vector<double>(y, y + n));
  });
}

lfdq_status lfdq_classify_quality(double task_rate, double delta, int* is_high) {
  return Guard([&] {
    Require(is_high != nullptr, "is_high is null");
    Require(task_rate >= 0.0 && task_rate <= 1.0 && delta >= 0.0 && delta <= 1.0,
            "inputs must lie in [0, 1]");
    *is_high = lfdq::ClassifyQuality(task_rate, delta) == lfdq::QualityLabel::kHigh ? 1 : 0;
  });
}

lfdq_status lfdq_selftest(lfdq_line_fn emit, void* user, int* failures) {
  return Guard([&] {
    const int n = lfdq::RunSelftest([&](const std::string& line) {
      if (emit) emit(line.c_str(), user);
    });
    if (failures) *failures = n;
  });
}

}  // extern "C"
