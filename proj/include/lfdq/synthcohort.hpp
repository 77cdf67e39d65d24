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


#ifndef LFDQ_SYNTHCOHORT_HPP_
#define LFDQ_SYNTHCOHORT_HPP_

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lfdq/clik.hpp"
#include "lfdq/demonstrations.hpp"
#include "lfdq/kinematics.hpp"
#include "lfdq/taskworld.hpp"

namespace lfdq {

// Teaching behaviour of one synthetic demonstrator.
struct DemonstratorProfile {
  double base_noise = 0.0;            // m, std of the smooth Cartesian noise
  double detour_amp = 0.0;            // m, via-point deviation amplitude
  double approach_consistency = 1.0;  // 1 = always the reference approach
  double improvement_rate = 0.0;      // per-trial decay of noise and detours
  double collision_proneness = 0.0;   // chance a detour heads into the box

  void Validate() const;
  bool IsClean() const;

  static DemonstratorProfile Fast();
  static DemonstratorProfile Slow();
};

struct CohortSpec {
  int n_fast = 12;
  int n_slow = 15;
  int sessions = 2;
  int trials_per_face = 3;
  std::uint64_t seed = 1;
  int samples = 100;  // points per reference path
  // Log-normal spread of the per-demonstrator profile around its group.
  double profile_spread = 0.25;
  DemonstratorProfile fast = DemonstratorProfile::Fast();
  DemonstratorProfile slow = DemonstratorProfile::Slow();
  // Optional chain and world files; empty means the reference ones. Paths
  // read from a spec file are resolved against its directory.
  std::string chain_file;
  std::string world_file;

  static constexpr int kFaces = 2;
  static constexpr int kTargetsPerFace = 9;

  void Validate() const;
  int DemosPerDemonstrator() const { return sessions * trials_per_face * kFaces * kTargetsPerFace; }
};

CohortSpec CohortSpecFromJsonText(const std::string& text);
CohortSpec LoadCohortSpec(const std::string& path);
std::string CohortSpecToJsonText(const CohortSpec& spec);

struct ReferencePath {
  Target target;
  std::vector<Eigen::Vector3d> via_points;
  std::vector<StatePoint> cart;  // t in seconds, params.dt apart
  JointTrajectory joints;
};

// Start pose -> (wrap-around via points on the high face) -> pre-approach
// point 8 cm out along the face normal -> target, solved with
// TrackTrajectory. Throws Error(kNoFeasiblePlan) if tracking fails, the
// path collides, or the goal is never touched.
ReferencePath PlanReferencePath(const KinematicChain& chain, const TaskWorld& world,
                                const Target& target, int samples = 100,
                                const ClikParams& params = ClikParams{});

// Zero-based index of a trial across sessions, the exponent of the decay.
int TrialIndexAcrossSessions(int session, int trial, int trials_per_session);

// Degrades the reference with the profile and re-solves the joints. Tracking
// failures are kept: the demonstration is still emitted.
Demonstration CorruptPath(const KinematicChain& chain, const TaskWorld& world,
                          const ReferencePath& reference, const DemonstratorProfile& profile,
                          const DemoMeta& meta, int trials_per_session, std::uint64_t seed,
                          const ClikParams& params = ClikParams{});

std::uint64_t DeriveSeed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

struct TrialKey {
  std::string demonstrator;
  int session = 1;
  int trial = 1;
  FaceId face = FaceId::kLow;

  auto operator<=>(const TrialKey&) const = default;
};

struct CohortMember {
  std::string id;
  std::string group;  // "fast" or "slow", the generating profile
  DemonstratorProfile profile;
};

struct Cohort {
  KinematicChain chain;
  TaskWorld world;
  CohortSpec spec;
  std::vector<CohortMember> members;
  std::map<TrialKey, DemoSet> trials;

  std::size_t DemoCount() const;
};

// Deterministic per seed; every demonstration draws from its own derived
// seed so the thread count does not change the result. threads <= 0 uses
// the hardware concurrency.
Cohort GenerateCohort(const KinematicChain& chain, const TaskWorld& world, const CohortSpec& spec,
                      int threads = 0, const ClikParams& params = ClikParams{});

// cohort/<demonstrator>/<session>/<trial>/<face>/target_<k>.json plus
// manifest.json, chain.json and world.json at the root.
void SaveCohort(const Cohort& cohort, const std::string& directory);
Cohort LoadCohort(const std::string& directory);

}  // namespace lfdq

#endif  // LFDQ_SYNTHCOHORT_HPP_
