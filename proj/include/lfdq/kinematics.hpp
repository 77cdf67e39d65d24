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

#ifndef LFDQ_KINEMATICS_HPP_
#define LFDQ_KINEMATICS_HPP_

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "lfdq/geometry.hpp"

namespace lfdq {

inline constexpr int kNumJoints = 7;

using JointVector = Eigen::Matrix<double, kNumJoints, 1>;
using Jacobian = Eigen::Matrix<double, 6, kNumJoints>;
using Twist = Eigen::Matrix<double, 6, 1>;

// Standard Denavit-Hartenberg row: T = Rz(q + theta0) Tz(d) Tx(a) Rx(alpha).
struct DhRow {
  double a = 0.0;
  double alpha = 0.0;
  double d = 0.0;
  double theta0 = 0.0;
};

struct JointLimit {
  double lower = 0.0;
  double upper = 0.0;
};

// Gripper tip box, centred on the tool frame. Height runs along tool z.
struct TipBox {
  double width = 0.021;
  double length = 0.022;
  double height = 0.035;

  Eigen::Vector3d HalfExtents() const { return {0.5 * width, 0.5 * length, 0.5 * height}; }
  double Diagonal() const;
};

// Description of a 7-DoF serial arm. Construct through Validated(); all query
// functions below are pure and safe to call concurrently.
struct KinematicChain {
  std::array<DhRow, kNumJoints> dh{};
  std::array<JointLimit, kNumJoints> limits{};
  std::array<double, kNumJoints> link_radii{};
  TipBox tip_box;
  // Offset from the last DH frame to the tool frame along its z axis.
  double tool_offset = 0.0;
  JointVector start_config = JointVector::Zero();

  // Throws Error(kSchemaViolation) when an invariant does not hold.
  void Validate() const;

  JointVector Midrange() const;
  bool WithinLimits(const JointVector& q) const;
};

// PR2-right-arm-like reference chain, identical to data/reference_chain.json.
KinematicChain ReferenceChain();

KinematicChain LoadChain(const std::string& path);
KinematicChain ChainFromJsonText(const std::string& text);
std::string ChainToJsonText(const KinematicChain& chain);
void SaveChain(const KinematicChain& chain, const std::string& path);

// Base-frame transforms of DH frames 0..7 followed by the tool frame (9 entries).
std::array<Eigen::Isometry3d, kNumJoints + 2> FrameTransforms(const KinematicChain& chain,
                                                              const JointVector& q);

Pose ForwardKinematics(const KinematicChain& chain, const JointVector& q);

// Geometric Jacobian of the tool frame: rows 0-2 linear, rows 3-5 angular.
Jacobian ComputeJacobian(const KinematicChain& chain, const JointVector& q);

// Jacobian together with the tool pose it was evaluated at.
struct KinematicState {
  Pose tool;
  Jacobian jacobian;
};
KinematicState ComputeKinematicState(const KinematicChain& chain, const JointVector& q);

// One capsule per link (joint origin to next joint origin) then the tip capsule.
std::vector<Capsule> LinkCapsules(const KinematicChain& chain, const JointVector& q);

// min(q - lower, upper - q) per joint; negative entries are violations.
JointVector LimitMargin(const KinematicChain& chain, const JointVector& q);

}  // namespace lfdq

#endif  // LFDQ_KINEMATICS_HPP_
