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


#ifndef LFDQ_ASSESSMENT_HPP_
#define LFDQ_ASSESSMENT_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lfdq/clik.hpp"
#include "lfdq/demonstrations.hpp"
#include "lfdq/synthcohort.hpp"
#include "lfdq/taskworld.hpp"
#include "lfdq/tpgmm.hpp"

namespace lfdq {

struct EvalParams {
  double delta = 0.8;
  EmOptions em;
  ClikParams clik;
  // Length of every generated trajectory; the goal must be touched within it.
  int timeout_samples = 100;
  // Points per demonstration after DTW alignment.
  int aligned_length = 100;
  int threads = 0;

  void Validate() const;
};

EvalParams EvalParamsFromJsonText(const std::string& text);
EvalParams LoadEvalParams(const std::string& path);
std::string EvalParamsToJsonText(const EvalParams& params);

enum class Outcome { kSuccess, kBoxCollision, kSelfCollision, kUnreached, kInfeasibleIk };

const char* OutcomeName(Outcome outcome);
Outcome ParseOutcome(const std::string& name);

enum class QualityLabel { kLow, kHigh };
enum class AdapterLabel { kSlow, kFast };

const char* QualityLabelName(QualityLabel label);
const char* AdapterLabelName(AdapterLabel label);

struct TrialResult {
  TrialKey key;
  std::vector<Outcome> task_outcomes;  // 9 demonstrated targets
  std::vector<Outcome> gen_outcomes;   // 49 grid targets
  double task_rate = 0.0;
  double gen_rate = 0.0;
  int em_iterations = 0;
};

// Outcome of one generated reach toward `target`.
Outcome ScoreReach(const KinematicChain& chain, const TaskWorld& world, const Target& target,
                   const JointTrajectory& tracked);

// Start frame (first demonstrated pose) and target frame (press pose of the
// demonstrated target) for each demonstration.
std::vector<TaskFrame> DemonstrationFrames(const TaskWorld& world, const Demonstration& demo);
std::vector<TaskFrame> QueryFrames(const KinematicChain& chain, const Target& target);

// Fits the trial model on DTW-aligned demonstrations.
EmResult FitTrialModel(const DemoSet& aligned, const TaskWorld& world, const EmOptions& options);

// Learns one model from the trial's demonstrations and scores it on the
// demonstrated targets and on the generalization grid. Unaligned sets are
// aligned first.
TrialResult EvaluateTrial(const KinematicChain& chain, const DemoSet& set, const TaskWorld& world,
                          FaceId face, const EvalParams& params);

// count(success) / size. Throws Error(kEmptyOutcomes) on an empty list.
double SuccessRate(const std::vector<Outcome>& outcomes);

// High iff task_rate > delta.
QualityLabel ClassifyQuality(double task_rate, double delta);

// Fast iff the mean session-1 task_rate exceeds delta on both faces.
// Throws Error(kMissingSession) if a demonstrator lacks session 1 on a face.
std::map<std::string, AdapterLabel> ClusterAdapters(const std::vector<TrialResult>& results,
                                                    double delta);

// Sample Pearson correlation. Throws Error(kLengthMismatch) for unequal
// lengths or fewer than three pairs, Error(kZeroVariance) for a constant input.
double Pearson(const std::vector<double>& x, const std::vector<double>& y);

struct CellStat {
  int session = 1;
  FaceId face = FaceId::kLow;
  AdapterLabel adapter = AdapterLabel::kSlow;
  int count = 0;
  double task_mean = 0.0;
  double task_std = 0.0;
  double gen_mean = 0.0;
  double gen_std = 0.0;
};

struct StudyReport {
  double delta = 0.8;
  std::vector<TrialResult> trials;  // sorted by key
  std::map<std::string, AdapterLabel> adapters;
  // Pooled over all per-trial (task_rate, gen_rate) pairs; empty when the
  // rates have no variance.
  std::optional<double> rho;
  std::vector<CellStat> cells;
};

// Labels, correlation and cell tables recomputed from trial results.
StudyReport Summarize(std::vector<TrialResult> trials, double delta);

// Evaluates every trial concurrently. Throws Error(kEmptySet) for an empty cohort.
StudyReport RunStudy(const Cohort& cohort, const TaskWorld& world, const EvalParams& params);

// results/trials.json (full outcomes) and results/rates.csv.
void SaveResults(const std::vector<TrialResult>& trials, double delta, const std::string& directory);
// `delta`, when given, receives the threshold the results were written with.
std::vector<TrialResult> LoadResults(const std::string& directory, double* delta = nullptr);

// demonstrator,session,trial,face,task_rate,gen_rate,label
std::string RatesCsv(const StudyReport& report);
std::string SummaryJsonText(const StudyReport& report);
std::string LabelsJsonText(const StudyReport& report);
void SaveReport(const StudyReport& report, const std::string& directory);

}  // namespace lfdq

#endif  // LFDQ_ASSESSMENT_HPP_
