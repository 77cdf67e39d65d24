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


// Prints one PASS/FAIL line per acceptance criterion. Exit status is the
// number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "fixtures.hpp"
#include "lfdq/assessment.hpp"
#include "lfdq/clik.hpp"
#include "lfdq/kinematics.hpp"
#include "lfdq/synthcohort.hpp"
#include "lfdq/tpgmm.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace lfdq {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

int failures = 0;

void Report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

void GaussianProduct() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int c = 0; c < 50; ++c) {
    TpgmmModel m;
    m.num_components = 1;
    m.num_frames = 2;
    m.priors = {1.0};
    std::vector<TaskFrame> frames;
    std::vector<Eigen::Vector2d> lm;
    std::vector<Eigen::Matrix2d> ls;
    for (int j = 0; j < 2; ++j) {
      StateVector mu = StateVector::Zero();
      mu(1) = 0.5 * u(rng);
      mu(2) = 0.5 * u(rng);
      StateMatrix s = StateMatrix::Identity();
      Eigen::Matrix2d l;
      l << 0.2 + 0.3 * std::abs(u(rng)), 0.0, 0.3 * u(rng), 0.2 + 0.3 * std::abs(u(rng));
      s.block<2, 2>(1, 1) = l * l.transpose();
      m.means.push_back({mu});
      m.covariances.push_back({s});
      const TaskFrame f = TaskFrame::FromPose(
          Pose{Eigen::Vector3d(0.3 * u(rng), 0.3 * u(rng), 0.0),
               Eigen::Quaterniond(Eigen::AngleAxisd(std::numbers::pi * u(rng), Eigen::Vector3d::UnitZ()))});
      frames.push_back(f);
      const Eigen::Matrix2d r = f.A.block<2, 2>(1, 1);
      lm.push_back(r * mu.segment<2>(1) + f.b.segment<2>(1));
      ls.push_back(r * s.block<2, 2>(1, 1) * r.transpose());
    }
    const GlobalGmm g = CombineFrames(m, frames);
    const Eigen::Vector2d pm = g.means[0].segment<2>(1);
    const Eigen::Matrix2d ps = g.covariances[0].block<2, 2>(1, 1);
    const int n = 50;
    std::vector<double> prod(n * n), model(n * n);
    double sp = 0, sm = 0;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        const Eigen::Vector2d p(pm.x() - 2.0 + 4.0 * i / (n - 1), pm.y() - 2.0 + 4.0 * k / (n - 1));
        sp += prod[i * n + k] = oracle::Normal2d(p, lm[0], ls[0]) * oracle::Normal2d(p, lm[1], ls[1]);
        sm += model[i * n + k] = oracle::Normal2d(p, pm, ps);
      }
    }
    for (int i = 0; i < n * n; ++i) {
      const double a = prod[i] / sp;
      if (a > 1e-300) worst = std::max(worst, std::abs(a - model[i] / sm) / a);
    }
  }
  const double secs = Seconds(t0);
  Report(1, worst <= 1e-6 && secs < 10.0, "Gaussian product vs grid-multiplied densities",
         Fmt("50 cases, max rel err %.2e <= 1e-6, %.2f s < 10 s", worst, secs));
}

void JacobianCheck() {
  const auto t0 = Clock::now();
  const KinematicChain chain = ReferenceChain();
  std::mt19937_64 rng(102);
  const double h = 1e-6;
  double worst = 0.0;
  for (int c = 0; c < 100; ++c) {
    const JointVector q = oracle::RandomConfig(chain, rng);
    const Jacobian jac = ComputeJacobian(chain, q);
    for (int j = 0; j < kNumJoints; ++j) {
      JointVector qp = q, qm = q;
      qp(j) += h;
      qm(j) -= h;
      const Pose a = ForwardKinematics(chain, qp), b = ForwardKinematics(chain, qm);
      Twist fd;
      fd.head<3>() = (a.position - b.position) / (2 * h);
      fd.tail<3>() = OrientationError(a.orientation, b.orientation) / (2 * h);
      worst = std::max(worst, (fd - jac.col(j)).cwiseAbs().maxCoeff());
    }
  }
  const double secs = Seconds(t0);
  Report(2, worst <= 1e-5 && secs < 5.0, "Jacobian vs central finite differences",
         Fmt("100 configs, max abs err %.2e <= 1e-5, %.2f s < 5 s", worst, secs));
}

void NullSpace() {
  std::mt19937_64 rng(103);
  std::normal_distribution<double> n(0.0, 1.0);
  double worst_null = 0.0, worst_idem = 0.0;
  for (int c = 0; c < 100; ++c) {
    Jacobian j;
    for (int r = 0; r < 6; ++r)
      for (int k = 0; k < kNumJoints; ++k) j(r, k) = n(rng);
    const NullProjector p = ComputeNullProjector(j);
    worst_null = std::max(worst_null, (j * p).norm());
    worst_idem = std::max(worst_idem, (p * p - p).cwiseAbs().maxCoeff());
  }
  Report(3, worst_null <= 1e-8 && worst_idem <= 1e-10, "null-space projector contract",
         Fmt("100 Jacobians, max |J P|_F %.2e <= 1e-8, max |PP - P| %.2e <= 1e-10", worst_null,
             worst_idem));
}

void ClikConvergence() {
  const auto t0 = Clock::now();
  const KinematicChain chain = ReferenceChain();
  const ClikParams params;
  const JointVector q0 = chain.start_config;
  std::mt19937_64 rng(104);
  double worst_pos = 0.0, worst_rot = 0.0;
  int feasible = 0;
  for (int c = 0; c < 20; ++c) {
    const auto path = fixture::JointSpaceReach(chain, q0, fixture::NearbyGoal(chain, q0, 0.4, rng), 100, params.dt);
    const JointTrajectory out = TrackTrajectory(chain, q0, path, {}, params);
    feasible += out.feasible;
    worst_pos = std::max(worst_pos, out.final_position_error);
    worst_rot = std::max(worst_rot, out.final_orientation_error);
  }
  const Pose start = ForwardKinematics(chain, q0);
  const auto far = fixture::StraightReach(start, Eigen::Vector3d(2.0, 0.0, 0.0), 100, params.dt);
  const JointTrajectory bad = TrackTrajectory(chain, q0, far, {}, params);
  const double secs = Seconds(t0);
  const double deg = worst_rot * 180.0 / std::numbers::pi;
  Report(4,
         feasible == 20 && worst_pos <= 2e-3 && deg <= 1.0 && !bad.feasible && secs < 30.0,
         "CLIK convergence and unreachable detection",
         Fmt("%d/20 feasible, max pos err %.2e m <= 2e-3, max rot err %.3f deg <= 1, unreachable "
             "feasible=%s (%s), %.2f s < 30 s",
             feasible, worst_pos, deg, bad.feasible ? "true" : "false",
             TrackingFailureName(bad.failure), secs));
}

void CleanPipeline() {
  const auto t0 = Clock::now();
  const KinematicChain chain = ReferenceChain();
  const TaskWorld world = ReferenceWorld();
  const EvalParams params;
  TrialResult r[2];
  for (FaceId face : {FaceId::kLow, FaceId::kHigh}) {
    DemoSet set;
    for (const Target& t : DemonstratedTargets(world, face)) {
      const ReferencePath ref = PlanReferencePath(chain, world, t);
      set.demos.push_back(CorruptPath(chain, world, ref, DemonstratorProfile{},
                                      DemoMeta{t.index, face, 1, 1, "P01"}, 3, 1));
    }
    r[face == FaceId::kLow ? 0 : 1] = EvaluateTrial(chain, set, world, face, params);
  }
  const double secs = Seconds(t0);
  const int low_task = static_cast<int>(std::lround(r[0].task_rate * 9));
  const int low_gen = static_cast<int>(std::lround(r[0].gen_rate * 49));
  const int high_task = static_cast<int>(std::lround(r[1].task_rate * 9));
  Report(5, low_task == 9 && low_gen >= 45 && high_task >= 8 && secs < 120.0,
         "clean-pipeline reproduction",
         Fmt("low task %d/9 == 9, low gen %d/49 >= 45, high task %d/9 >= 8 (high gen %d/49), %.2f s < 120 s",
             low_task, low_gen, high_task, static_cast<int>(std::lround(r[1].gen_rate * 49)), secs));
}

void Threshold() {
  const bool ok = ClassifyQuality(0.80, 0.8) == QualityLabel::kLow &&
                  ClassifyQuality(0.90, 0.8) == QualityLabel::kHigh &&
                  ClassifyQuality(0.49, 0.8) == QualityLabel::kLow;
  Report(6, ok, "threshold semantics",
         Fmt("0.80 -> %s, 0.90 -> %s, 0.49 -> %s at delta 0.8",
             QualityLabelName(ClassifyQuality(0.80, 0.8)), QualityLabelName(ClassifyQuality(0.90, 0.8)),
             QualityLabelName(ClassifyQuality(0.49, 0.8))));
}

double SessionMean(const StudyReport& report, AdapterLabel label, int session) {
  double sum = 0.0;
  int n = 0;
  for (const TrialResult& r : report.trials) {
    if (r.key.session == session && report.adapters.at(r.key.demonstrator) == label) {
      sum += r.task_rate;
      ++n;
    }
  }
  return n ? sum / n : std::nan("");
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Full synthetic study through the same file round trip the CLI uses.
StudyReport FullStudy(std::uint64_t seed, const testing::TempDir& dir, double* seconds) {
  const auto t0 = Clock::now();
  CohortSpec spec;
  spec.seed = seed;
  const std::string cohort_dir = dir / ("cohort_" + std::to_string(seed));
  SaveCohort(GenerateCohort(ReferenceChain(), ReferenceWorld(), spec), cohort_dir);
  const Cohort cohort = LoadCohort(cohort_dir);
  const EvalParams params = LoadEvalParams(std::string(LFDQ_DATA_DIR) + "/params.json");
  StudyReport report = RunStudy(cohort, cohort.world, params);
  const std::string results = dir / ("results_" + std::to_string(seed));
  std::filesystem::create_directories(results);
  SaveResults(report.trials, params.delta, results);
  *seconds = Seconds(t0);
  return report;
}

void CohortClaims() {
  testing::TempDir dir("acceptance");
  bool rho_ok = true, adapt_ok = true;
  std::string rho_detail, adapt_detail;
  double first_seconds = 0.0;
  for (std::uint64_t seed : {1, 2, 3}) {
    double secs = 0.0;
    const StudyReport report = FullStudy(seed, dir, &secs);
    if (seed == 1) first_seconds = secs;
    const double rho = report.rho.value_or(std::nan(""));
    rho_ok = rho_ok && rho >= 0.7;
    int fast = 0;
    for (const auto& [id, label] : report.adapters) fast += label == AdapterLabel::kFast;
    rho_detail += Fmt("%sseed %d: rho %.3f", rho_detail.empty() ? "" : "; ", int(seed), rho);
    const double slow_gain = SessionMean(report, AdapterLabel::kSlow, 2) - SessionMean(report, AdapterLabel::kSlow, 1);
    const double fast_diff = std::abs(SessionMean(report, AdapterLabel::kFast, 2) - SessionMean(report, AdapterLabel::kFast, 1));
    adapt_ok = adapt_ok && slow_gain >= 0.15 && fast_diff <= 0.10;
    adapt_detail += Fmt("%sseed %d: %d fast/%d slow, slow gain %.3f >= 0.15, fast diff %.3f <= 0.10",
                        adapt_detail.empty() ? "" : "; ", int(seed), fast,
                        static_cast<int>(report.adapters.size()) - fast, slow_gain, fast_diff);
  }
  Report(7, rho_ok, "pooled task/generalization correlation >= 0.7 on 3 seeds", rho_detail);
  Report(8, adapt_ok, "slow adapters improve across sessions, fast adapters stay level", adapt_detail);

  // Second evaluation of the seed-1 cohort with a different thread count.
  const Cohort cohort = LoadCohort(dir / "cohort_1");
  EvalParams params = LoadEvalParams(std::string(LFDQ_DATA_DIR) + "/params.json");
  params.threads = params.threads == 1 ? 2 : 1;
  const StudyReport again = RunStudy(cohort, cohort.world, params);
  const std::string second = dir / "results_1b";
  std::filesystem::create_directories(second);
  SaveResults(again.trials, params.delta, second);
  const std::string a = ReadFile(dir / "results_1/rates.csv");
  const std::string b = ReadFile(second + "/rates.csv");
  Report(9, !a.empty() && a == b, "repeated evaluation gives byte-identical rates.csv",
         Fmt("%zu bytes, %s", a.size(), a == b ? "identical" : "different"));

  Report(10, first_seconds <= 600.0, "full 27-demonstrator study runtime",
         Fmt("generate + save + load + evaluate %zu trials in %.1f s <= 600 s on %u hardware threads",
             again.trials.size(), first_seconds, std::thread::hardware_concurrency()));
}

}  // namespace
}  // namespace lfdq

int main() {
  lfdq::GaussianProduct();
  lfdq::JacobianCheck();
  lfdq::NullSpace();
  lfdq::ClikConvergence();
  lfdq::CleanPipeline();
  lfdq::Threshold();
  lfdq::CohortClaims();
  std::printf("%d of 10 criteria failed\n", lfdq::failures);
  return lfdq::failures;
}
