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

#ifndef LFDQ_GEOMETRY_HPP_
#define LFDQ_GEOMETRY_HPP_

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace lfdq {

// Rigid pose of a frame in the robot base frame. Orientation is a unit
// quaternion; vector forms in this library use (w, x, y, z) ordering.
struct Pose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();

  Eigen::Isometry3d ToIsometry() const;
  static Pose FromIsometry(const Eigen::Isometry3d& iso);
};

// Line segment with a radius; a capsule degenerates to a sphere when a == b.
struct Capsule {
  Eigen::Vector3d a;
  Eigen::Vector3d b;
  double radius = 0.0;
};

Eigen::Vector4d QuatToWxyz(const Eigen::Quaterniond& q);
Eigen::Quaterniond WxyzToQuat(const Eigen::Vector4d& v);

// Left-multiplication operator L(r) with L(r) * wxyz(q) == wxyz(r * q).
Eigen::Matrix4d QuatLeftMatrix(const Eigen::Quaterniond& r);

// Axis-angle vector of desired * current^-1, angle wrapped into (-pi, pi].
Eigen::Vector3d OrientationError(const Eigen::Quaterniond& desired,
                                 const Eigen::Quaterniond& current);

// Angle in radians between two orientations, in [0, pi].
double OrientationDistance(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b);

double PointSegmentDistance(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                            const Eigen::Vector3d& b);

double SegmentSegmentDistance(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                              const Eigen::Vector3d& q0, const Eigen::Vector3d& q1);

// Distance from a point to a solid oriented box (zero inside).
double PointBoxDistance(const Eigen::Vector3d& p, const Pose& box,
                        const Eigen::Vector3d& half_extents);

// Distance from a segment to a solid oriented box (zero when they intersect).
double SegmentBoxDistance(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Pose& box,
                          const Eigen::Vector3d& half_extents);

}  // namespace lfdq

#endif  // LFDQ_GEOMETRY_HPP_
