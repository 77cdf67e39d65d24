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


#include "lfdq/assessment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <tuple>

#include "lfdq/error.hpp"
#include "lfdq/jsonio.hpp"
#include "parallel.hpp"

namespace lfdq {

using nlohmann::json;

namespace {

constexpr const char* kResultsFormat = "lfdq-results-v1";

double ReadDouble(const json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

int ReadInt(const json& j, const char* key, int fallback) {
  return j.contains(key) ? j.at(key).get<int>() : fallback;
}

ClikParams ClikFromJson(const json& j) {
  ClikParams p;
  p.damping = ReadDouble(j, "damping", p.damping);
  if (j.contains("kp")) {
    const json& kp = j.at("kp");
    if (kp.is_number()) {
      p.kp = kp.get<double>() * Matrix6d::Identity();
    } else {
      double diag[6];
      ReadNumbers(kp, diag, 6, "clik.kp");
      p.kp = Eigen::Map<Eigen::Matrix<double, 6, 1>>(diag).asDiagonal();
    }
  }
  p.dt = ReadDouble(j, "dt", p.dt);
  p.null_gain = ReadDouble(j, "null_gain", p.null_gain);
  p.limit_margin_min = ReadDouble(j, "limit_margin_min", p.limit_margin_min);
  p.max_retries = ReadInt(j, "max_retries", p.max_retries);
  p.final_tolerance = ReadDouble(j, "final_tolerance", p.final_tolerance);
  return p;
}

double SampleStd(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (v.size() - 1));
}

double Mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / v.size();
}

std::string FormatRate(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", r);
  return buf;
}

std::vector<JointVector> ResampleJoints(const std::vector<JointSample>& traj, int length) {
  std::vector<JointVector> out(length);
  const double last = static_cast<double>(traj.size() - 1);
  for (int k = 0; k < length; ++k) {
    const double f = length > 1 ? last * k / (length - 1) : 0.0;
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(f), traj.size() - 1);
    const std::size_t j = std::min(i + 1, traj.size() - 1);
    const double w = f - i;
    out[k] = (1.0 - w) * traj[i].q + w * traj[j].q;
  }
  return out;
}

json TrialToJson(const TrialResult& r) {
  json task = json::array(), gen = json::array();
  for (Outcome o : r.task_outcomes) task.push_back(OutcomeName(o));
  for (Outcome o : r.gen_outcomes) gen.push_back(OutcomeName(o));
  return json{{"demonstrator", r.key.demonstrator},
              {"session", r.key.session},
              {"trial", r.key.trial},
              {"face", FaceName(r.key.face)},
              {"task_rate", r.task_rate},
              {"gen_rate", r.gen_rate},
              {"em_iterations", r.em_iterations},
              {"task_outcomes", task},
              {"gen_outcomes", gen}};
}

TrialResult TrialFromJson(const json& j) {
  TrialResult r;
  r.key.demonstrator = j.at("demonstrator").get<std::string>();
  r.key.session = j.at("session").get<int>();
  r.key.trial = j.at("trial").get<int>();
  r.key.face = ParseFace(j.at("face").get<std::string>());
  r.em_iterations = j.value("em_iterations", 0);
  for (const json& o : j.at("task_outcomes")) r.task_outcomes.push_back(ParseOutcome(o.get<std::string>()));
  for (const json& o : j.at("gen_outcomes")) r.gen_outcomes.push_back(ParseOutcome(o.get<std::string>()));
  r.task_rate = SuccessRate(r.task_outcomes);
  r.gen_rate = SuccessRate(r.gen_outcomes);
  if (std::abs(r.task_rate - j.at("task_rate").get<double>()) > 1e-12 ||
      std::abs(r.gen_rate - j.at("gen_rate").get<double>()) > 1e-12) {
    throw Error(ErrorCode::kSchemaViolation, "trials.json: rates disagree with outcomes");
  }
  return r;
}

}  // namespace

void EvalParams::Validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::kSchemaViolation, "delta must lie in (0, 1)");
  if (em.num_components < 1) throw Error(ErrorCode::kSchemaViolation, "K must be >= 1");
  if (!(em.regularization >= 0.0)) throw Error(ErrorCode::kSchemaViolation, "reg must be >= 0");
  if (em.max_iterations < 1) throw Error(ErrorCode::kSchemaViolation, "max_iterations must be >= 1");
  if (timeout_samples < 2 || aligned_length < 2) {
    throw Error(ErrorCode::kSchemaViolation, "timeout_samples and aligned_length must be >= 2");
  }
  try {
    clik.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchemaViolation, e.what());
  }
}

EvalParams EvalParamsFromJsonText(const std::string& text) {
  const json doc = ParseJsonText(text);
  if (!doc.is_object()) throw Error(ErrorCode::kSchemaViolation, "params must be an object");
  EvalParams p;
  try {
    p.delta = ReadDouble(doc, "delta", p.delta);
    p.em.num_components = ReadInt(doc, "K", p.em.num_components);
    p.em.regularization = ReadDouble(doc, "reg", p.em.regularization);
    p.em.tolerance = ReadDouble(doc, "em_tolerance", p.em.tolerance);
    p.em.max_iterations = ReadInt(doc, "em_max_iterations", p.em.max_iterations);
    p.timeout_samples = ReadInt(doc, "timeout_samples", p.timeout_samples);
    p.aligned_length = ReadInt(doc, "aligned_length", p.aligned_length);
    p.threads = ReadInt(doc, "threads", p.threads);
    if (doc.contains("clik")) p.clik = ClikFromJson(doc.at("clik"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, std::string("params: ") + e.what());
  }
  p.Validate();
  return p;
}

EvalParams LoadEvalParams(const std::string& path) { return EvalParamsFromJsonText(ReadTextFile(path)); }

std::string EvalParamsToJsonText(const EvalParams& p) {
  json kp = json::array();
  for (int i = 0; i < 6; ++i) kp.push_back(p.clik.kp(i, i));
  json doc{{"delta", p.delta},
           {"K", p.em.num_components},
           {"reg", p.em.regularization},
           {"em_tolerance", p.em.tolerance},
           {"em_max_iterations", p.em.max_iterations},
           {"timeout_samples", p.timeout_samples},
           {"aligned_length", p.aligned_length},
           {"threads", p.threads},
           {"clik",
            {{"damping", p.clik.damping},
             {"kp", kp},
             {"dt", p.clik.dt},
             {"null_gain", p.clik.null_gain},
             {"limit_margin_min", p.clik.limit_margin_min},
             {"max_retries", p.clik.max_retries},
             {"final_tolerance", p.clik.final_tolerance}}}};
  return doc.dump(2) + "\n";
}

const char* OutcomeName(Outcome outcome) {
  switch (outcome) {
    case Outcome::kSuccess: return "success";
    case Outcome::kBoxCollision: return "box_collision";
    case Outcome::kSelfCollision: return "self_collision";
    case Outcome::kUnreached: return "unreached";
    case Outcome::kInfeasibleIk: return "infeasible_ik";
  }
  return "unknown";
}

Outcome ParseOutcome(const std::string& name) {
  for (Outcome o : {Outcome::kSuccess, Outcome::kBoxCollision, Outcome::kSelfCollision,
                    Outcome::kUnreached, Outcome::kInfeasibleIk}) {
    if (name == OutcomeName(o)) return o;
  }
  throw Error(ErrorCode::kSchemaViolation, "unknown outcome '" + name + "'");
}

const char* QualityLabelName(QualityLabel label) { return label == QualityLabel::kHigh ? "high" : "low"; }
const char* AdapterLabelName(AdapterLabel label) { return label == AdapterLabel::kFast ? "fast" : "slow"; }

Outcome ScoreReach(const KinematicChain& chain, const TaskWorld& world, const Target& target,
                   const JointTrajectory& tracked) {
  if (!tracked.feasible) return Outcome::kInfeasibleIk;
  const CollisionReport rep = CheckCollisions(chain, tracked.q, world, target);
  if (!rep.clear) {
    if (rep.box_hit && (!rep.self_hit || rep.box_sample <= rep.self_sample)) return Outcome::kBoxCollision;
    return Outcome::kSelfCollision;
  }
  return rep.goal_sample >= 0 ? Outcome::kSuccess : Outcome::kUnreached;
}

std::vector<TaskFrame> DemonstrationFrames(const TaskWorld& world, const Demonstration& demo) {
  if (demo.cart_traj.empty()) throw Error(ErrorCode::kEmptyDemonstration, "demonstration has no samples");
  const auto targets = DemonstratedTargets(world, demo.meta.face);
  if (demo.meta.target_id < 0 || demo.meta.target_id >= static_cast<int>(targets.size())) {
    throw Error(ErrorCode::kInvalidArgument, "demonstration target_id out of range");
  }
  const StatePoint& first = demo.cart_traj.front();
  return {TaskFrame::FromPose(Pose{first.x, first.orientation}),
          TaskFrame::FromPose(targets[demo.meta.target_id].ToPose())};
}

std::vector<TaskFrame> QueryFrames(const KinematicChain& chain, const Target& target) {
  return {TaskFrame::FromPose(ForwardKinematics(chain, chain.start_config)),
          TaskFrame::FromPose(target.ToPose())};
}

EmResult FitTrialModel(const DemoSet& aligned, const TaskWorld& world, const EmOptions& options) {
  if (aligned.demos.empty()) throw Error(ErrorCode::kEmptySet, "no demonstrations to learn from");
  std::vector<std::vector<StateVector>> frame_data(2);
  for (const Demonstration& demo : aligned.demos) {
    const std::vector<TaskFrame> frames = DemonstrationFrames(world, demo);
    for (const StatePoint& p : demo.cart_traj) {
      const StateVector xi = p.ToVector();
      for (int j = 0; j < 2; ++j) frame_data[j].push_back(ProjectToFrame(xi, frames[j]));
    }
  }
  EmResult fit = FitEm(frame_data, options);
  fit.model.frame_roles = {"start", "target"};
  return fit;
}

TrialResult EvaluateTrial(const KinematicChain& chain, const DemoSet& set, const TaskWorld& world,
                          FaceId face, const EvalParams& params) {
  params.Validate();
  if (set.demos.empty()) throw Error(ErrorCode::kEmptySet, "trial has no demonstrations");
  for (const Demonstration& d : set.demos) {
    if (d.meta.face != face) throw Error(ErrorCode::kInvalidArgument, "demonstration on the wrong face");
  }
  const DemoSet aligned = set.aligned_length > 0 ? set : DtwAlign(set, params.aligned_length);
  const EmResult fit = FitTrialModel(aligned, world, params.em);

  TrialResult result;
  result.key = TrialKey{set.demos.front().meta.demonstrator_id, set.demos.front().meta.session,
                        set.demos.front().meta.trial, face};
  result.em_iterations = fit.iterations;
  auto run = [&](const std::vector<Target>& targets, std::vector<Outcome>& outcomes) {
    for (const Target& target : targets) {
      const std::vector<StatePoint> plan =
          GenerateTrajectory(fit.model, QueryFrames(chain, target), params.timeout_samples);
      const Demonstration& nearest = ClosestDemonstration(aligned, target.position);
      const JointTrajectory tracked =
          TrackTrajectory(chain, chain.start_config, plan,
                          ResampleJoints(nearest.joint_traj, params.timeout_samples), params.clik);
      outcomes.push_back(ScoreReach(chain, world, target, tracked));
    }
  };
  run(DemonstratedTargets(world, face), result.task_outcomes);
  run(GeneralizationGrid(world, face), result.gen_outcomes);
  result.task_rate = SuccessRate(result.task_outcomes);
  result.gen_rate = SuccessRate(result.gen_outcomes);
  return result;
}

double SuccessRate(const std::vector<Outcome>& outcomes) {
  if (outcomes.empty()) throw Error(ErrorCode::kEmptyOutcomes, "no outcomes");
  const auto hits = std::count(outcomes.begin(), outcomes.end(), Outcome::kSuccess);
  return static_cast<double>(hits) / static_cast<double>(outcomes.size());
}

QualityLabel ClassifyQuality(double task_rate, double delta) {
  return task_rate > delta ? QualityLabel::kHigh : QualityLabel::kLow;
}

std::map<std::string, AdapterLabel> ClusterAdapters(const std::vector<TrialResult>& results,
                                                    double delta) {
  // demonstrator -> face -> session-1 task rates
  std::map<std::string, std::map<FaceId, std::vector<double>>> first;
  for (const TrialResult& r : results) {
    auto& faces = first[r.key.demonstrator];
    if (r.key.session == 1) faces[r.key.face].push_back(r.task_rate);
  }
  std::map<std::string, AdapterLabel> labels;
  for (const auto& [id, faces] : first) {
    bool fast = true;
    for (FaceId face : {FaceId::kLow, FaceId::kHigh}) {
      const auto it = faces.find(face);
      if (it == faces.end()) {
        throw Error(ErrorCode::kMissingSession,
                    id + " has no session-1 results on the " + FaceName(face) + " face");
      }
      fast = fast && Mean(it->second) > delta;
    }
    labels[id] = fast ? AdapterLabel::kFast : AdapterLabel::kSlow;
  }
  return labels;
}

double Pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::kLengthMismatch, "pearson: unequal lengths");
  if (x.size() < 3) throw Error(ErrorCode::kLengthMismatch, "pearson: need at least three pairs");
  const double mx = Mean(x), my = Mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::kZeroVariance, "pearson: constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

StudyReport Summarize(std::vector<TrialResult> trials, double delta) {
  if (trials.empty()) throw Error(ErrorCode::kEmptySet, "no trial results");
  std::sort(trials.begin(), trials.end(),
            [](const TrialResult& a, const TrialResult& b) { return a.key < b.key; });
  StudyReport report;
  report.delta = delta;
  report.adapters = ClusterAdapters(trials, delta);
  std::vector<double> task, gen;
  for (const TrialResult& r : trials) {
    task.push_back(r.task_rate);
    gen.push_back(r.gen_rate);
  }
  try {
    report.rho = Pearson(task, gen);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kZeroVariance && e.code() != ErrorCode::kLengthMismatch) throw;
  }
  std::map<std::tuple<int, FaceId, AdapterLabel>, std::pair<std::vector<double>, std::vector<double>>> cells;
  for (const TrialResult& r : trials) {
    auto& cell = cells[{r.key.session, r.key.face, report.adapters.at(r.key.demonstrator)}];
    cell.first.push_back(r.task_rate);
    cell.second.push_back(r.gen_rate);
  }
  for (const auto& [key, rates] : cells) {
    CellStat c;
    std::tie(c.session, c.face, c.adapter) = key;
    c.count = static_cast<int>(rates.first.size());
    c.task_mean = Mean(rates.first);
    c.task_std = SampleStd(rates.first, c.task_mean);
    c.gen_mean = Mean(rates.second);
    c.gen_std = SampleStd(rates.second, c.gen_mean);
    report.cells.push_back(c);
  }
  report.trials = std::move(trials);
  return report;
}

StudyReport RunStudy(const Cohort& cohort, const TaskWorld& world, const EvalParams& params) {
  params.Validate();
  if (cohort.trials.empty()) throw Error(ErrorCode::kEmptySet, "cohort has no trials");
  std::vector<const std::pair<const TrialKey, DemoSet>*> work;
  for (const auto& entry : cohort.trials) work.push_back(&entry);
  std::vector<TrialResult> results(work.size());
  detail::ParallelFor(work.size(), params.threads, [&](std::size_t i) {
    results[i] = EvaluateTrial(cohort.chain, work[i]->second, world, work[i]->first.face, params);
    results[i].key = work[i]->first;
  });
  return Summarize(std::move(results), params.delta);
}

void SaveResults(const std::vector<TrialResult>& trials, double delta, const std::string& directory) {
  namespace fs = std::filesystem;
  json doc;
  doc["format"] = kResultsFormat;
  doc["delta"] = delta;
  json list = json::array();
  for (const TrialResult& r : trials) list.push_back(TrialToJson(r));
  doc["trials"] = list;
  WriteTextFile((fs::path(directory) / "trials.json").string(), doc.dump(1) + "\n");
  StudyReport flat;
  flat.delta = delta;
  flat.trials = trials;
  WriteTextFile((fs::path(directory) / "rates.csv").string(), RatesCsv(flat));
}

std::vector<TrialResult> LoadResults(const std::string& directory, double* delta) {
  const json doc = LoadJsonFile((std::filesystem::path(directory) / "trials.json").string());
  std::vector<TrialResult> out;
  try {
    if (doc.value("format", "") != kResultsFormat) {
      throw Error(ErrorCode::kSchemaViolation, "trials.json: unknown format");
    }
    for (const json& t : doc.at("trials")) out.push_back(TrialFromJson(t));
    if (delta) *delta = doc.at("delta").get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, std::string("trials.json: ") + e.what());
  }
  return out;
}

std::string RatesCsv(const StudyReport& report) {
  std::ostringstream os;
  os << "demonstrator,session,trial,face,task_rate,gen_rate,label\n";
  for (const TrialResult& r : report.trials) {
    os << r.key.demonstrator << ',' << r.key.session << ',' << r.key.trial << ','
       << FaceName(r.key.face) << ',' << FormatRate(r.task_rate) << ',' << FormatRate(r.gen_rate)
       << ',' << QualityLabelName(ClassifyQuality(r.task_rate, report.delta)) << '\n';
  }
  return os.str();
}

std::string LabelsJsonText(const StudyReport& report) {
  json doc;
  doc["delta"] = report.delta;
  json adapters = json::object();
  for (const auto& [id, label] : report.adapters) adapters[id] = AdapterLabelName(label);
  doc["adapters"] = adapters;
  json trials = json::array();
  for (const TrialResult& r : report.trials) {
    trials.push_back({{"demonstrator", r.key.demonstrator},
                      {"session", r.key.session},
                      {"trial", r.key.trial},
                      {"face", FaceName(r.key.face)},
                      {"task_rate", r.task_rate},
                      {"quality", QualityLabelName(ClassifyQuality(r.task_rate, report.delta))}});
  }
  doc["trials"] = trials;
  return doc.dump(2) + "\n";
}

std::string SummaryJsonText(const StudyReport& report) {
  json doc;
  doc["delta"] = report.delta;
  doc["rho"] = report.rho ? json(*report.rho) : json(nullptr);
  doc["n_pairs"] = report.trials.size();
  int fast = 0;
  for (const auto& [id, label] : report.adapters) fast += label == AdapterLabel::kFast;
  doc["adapter_counts"] = {{"fast", fast}, {"slow", static_cast<int>(report.adapters.size()) - fast}};
  json members = json::object();
  for (const auto& [id, label] : report.adapters) members[id] = AdapterLabelName(label);
  doc["adapters"] = members;
  std::map<std::string, int> outcome_counts;
  for (const TrialResult& r : report.trials) {
    for (Outcome o : r.task_outcomes) ++outcome_counts[std::string("task/") + OutcomeName(o)];
    for (Outcome o : r.gen_outcomes) ++outcome_counts[std::string("gen/") + OutcomeName(o)];
  }
  doc["outcome_counts"] = outcome_counts;
  json cells = json::array();
  for (const CellStat& c : report.cells) {
    cells.push_back({{"session", c.session},
                     {"face", FaceName(c.face)},
                     {"adapter", AdapterLabelName(c.adapter)},
                     {"n", c.count},
                     {"task_mean", c.task_mean},
                     {"task_std", c.task_std},
                     {"gen_mean", c.gen_mean},
                     {"gen_std", c.gen_std}});
  }
  doc["cells"] = cells;
  return doc.dump(2) + "\n";
}

void SaveReport(const StudyReport& report, const std::string& directory) {
  namespace fs = std::filesystem;
  WriteTextFile((fs::path(directory) / "rates.csv").string(), RatesCsv(report));
  WriteTextFile((fs::path(directory) / "summary.json").string(), SummaryJsonText(report));
}

}  // namespace lfdq
