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

#ifndef LFDQ_TASKWORLD_HPP_
#define LFDQ_TASKWORLD_HPP_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "lfdq/demonstrations.hpp"
#include "lfdq/geometry.hpp"
#include "lfdq/kinematics.hpp"

namespace lfdq {

// Geometry of one instrumented cube face. uv coordinates run over
// [0, edge]^2 from `corner` along `u_axis` and `v_axis`.
struct FaceGeometry {
  Eigen::Vector3d center;
  Eigen::Vector3d normal;  // outward
  Eigen::Vector3d u_axis;
  Eigen::Vector3d v_axis;
  Eigen::Vector3d corner;

  Eigen::Vector3d PointAt(const Eigen::Vector2d& uv) const;
  // Tool orientation pressing into the face: tool z along -normal.
  Eigen::Quaterniond PressOrientation() const;
};

// The button box: a cube with two instrumented faces.
struct TaskWorld {
  Pose box_pose;
  double edge = 0.26;
  // Cube face labels in the box frame: one of "+x", "-x", "+y", "-y", "+z", "-z".
  std::string low_face = "-x";
  std::string high_face = "+y";
  double goal_radius = 0.015;
  double corner_inset = 0.02;

  void Validate() const;
  FaceGeometry Face(FaceId face) const;
  Eigen::Vector3d HalfExtents() const { return Eigen::Vector3d::Constant(0.5 * edge); }
};

TaskWorld ReferenceWorld();
TaskWorld WorldFromJsonText(const std::string& text);
TaskWorld LoadWorld(const std::string& path);
std::string WorldToJsonText(const TaskWorld& world);

enum class TargetKind { kDemonstrated, kGrid };

struct Target {
  FaceId face = FaceId::kLow;
  int index = 0;
  Eigen::Vector2d uv = Eigen::Vector2d::Zero();
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
  TargetKind kind = TargetKind::kDemonstrated;

  Pose ToPose() const { return Pose{position, orientation}; }
};

// Centre, four inset corners, and the four corner-to-centre midpoints.
// Index order: 0 centre, 1-4 corners, 5-8 midpoints (5 pairs with 1, ...).
std::vector<Target> DemonstratedTargets(const TaskWorld& world, FaceId face);

// Interior 7x7 grid at spacing edge / 8, row-major in (u, v).
std::vector<Target> GeneralizationGrid(const TaskWorld& world, FaceId face);

// True iff the target centre lies within goal_radius of the tip box.
bool GoalReached(const Pose& tip, const TipBox& tip_box, const TaskWorld& world,
                 const Target& target);

struct CollisionReport {
  bool box_hit = false;
  int box_sample = -1;
  int box_link = -1;
  bool self_hit = false;
  int self_sample = -1;
  std::pair<int, int> self_links{-1, -1};
  bool clear = true;
  // First sample at which the goal was touched, -1 if never.
  int goal_sample = -1;
};

// Capsule pairs that are tested for self collision: links separated by at
// least one link of non-zero length.
std::vector<std::pair<int, int>> SelfCollisionPairs(const KinematicChain& chain);

// Checks every sample up to and including the first goal contact.
CollisionReport CheckCollisions(const KinematicChain& chain, const std::vector<JointVector>& traj,
                                const TaskWorld& world, const Target& target);

}  // namespace lfdq

#endif  // LFDQ_TASKWORLD_HPP_
