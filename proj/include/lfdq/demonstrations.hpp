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

#ifndef LFDQ_DEMONSTRATIONS_HPP_
#define LFDQ_DEMONSTRATIONS_HPP_

#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "lfdq/kinematics.hpp"

namespace lfdq {

// One point of a Cartesian state trajectory: time (seconds, or phase in
// [0, 1] after alignment), tool position and tool orientation.
struct StatePoint {
  double t = 0.0;
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();

  // Flat 8-vector (t, x, w, qx, qy, qz).
  Eigen::Matrix<double, 8, 1> ToVector() const;
  static StatePoint FromVector(const Eigen::Matrix<double, 8, 1>& v);
};

struct JointSample {
  double t = 0.0;
  JointVector q = JointVector::Zero();
};

enum class FaceId { kLow, kHigh };

const char* FaceName(FaceId face);
FaceId ParseFace(const std::string& name);

struct DemoMeta {
  int target_id = 0;
  FaceId face = FaceId::kLow;
  int session = 1;
  int trial = 1;
  std::string demonstrator_id;
};

struct Demonstration {
  DemoMeta meta;
  std::vector<JointSample> joint_traj;
  std::vector<StatePoint> cart_traj;
};

struct DemoSet {
  std::vector<Demonstration> demos;
  // Points per demonstration after alignment; 0 when not aligned yet.
  int aligned_length = 0;
};

// Per-sample forward kinematics with quaternion hemisphere continuity.
// Throws Error(kNonMonotonicTime) unless timestamps strictly increase.
std::vector<StatePoint> DeriveStates(const KinematicChain& chain,
                                     const std::vector<JointSample>& joint_traj);

// Builds a demonstration (cartesian channel derived) from joint samples.
Demonstration MakeDemonstration(const KinematicChain& chain, DemoMeta meta,
                                std::vector<JointSample> joint_traj);

// Index of the medoid demonstration under DTW distance on positions; ties go
// to the lowest index.
int MedoidIndex(const DemoSet& set);

// DTW cost (Euclidean on positions) and optimal warping path between two
// position sequences. The path runs from (0, 0) to (n - 1, m - 1).
struct WarpingPath {
  double cost = 0.0;
  std::vector<std::pair<int, int>> steps;
};
WarpingPath DynamicTimeWarp(const std::vector<Eigen::Vector3d>& reference,
                            const std::vector<Eigen::Vector3d>& query);

// Warps every demonstration onto the medoid's time axis and resamples to
// `target_length` points with a normalized phase time channel. Sets whose
// demonstrations all already have `target_length` points are only
// re-timed, never warped.
// Throws Error(kEmptyDemonstration) if any demo has fewer than two points.
DemoSet DtwAlign(const DemoSet& set, int target_length);

// Position-only uniform resampling to `target_length` points.
std::vector<Eigen::Vector3d> UniformResample(const std::vector<Eigen::Vector3d>& xs,
                                             int target_length);

// Demonstration file: {"meta": {...}, "samples": [{"t": .., "q": [7]}]}.
std::string DemonstrationToJsonText(const Demonstration& demo);
Demonstration DemonstrationFromJsonText(const KinematicChain& chain, const std::string& text);
void SaveDemonstration(const Demonstration& demo, const std::string& path);
Demonstration LoadDemonstration(const KinematicChain& chain, const std::string& path);

// Whole-set file keeping the Cartesian channel so a round trip is lossless.
void SaveDemoSet(const DemoSet& set, const std::string& path);
DemoSet LoadDemoSet(const std::string& path);

// One CSV per demonstration (header t,q1..q7) plus index.csv with metadata.
void ExportDemoSetCsv(const DemoSet& set, const std::string& directory);

}  // namespace lfdq

#endif  // LFDQ_DEMONSTRATIONS_HPP_
