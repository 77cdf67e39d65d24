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

#include "lfdq/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lfdq {

Eigen::Isometry3d Pose::ToIsometry() const {
  Eigen::Isometry3d iso = Eigen::Isometry3d::Identity();
  iso.linear() = orientation.toRotationMatrix();
  iso.translation() = position;
  return iso;
}

Pose Pose::FromIsometry(const Eigen::Isometry3d& iso) {
  Pose pose;
  pose.position = iso.translation();
  pose.orientation = Eigen::Quaterniond(iso.linear()).normalized();
  return pose;
}

Eigen::Vector4d QuatToWxyz(const Eigen::Quaterniond& q) {
  return {q.w(), q.x(), q.y(), q.z()};
}

Eigen::Quaterniond WxyzToQuat(const Eigen::Vector4d& v) {
  return Eigen::Quaterniond(v(0), v(1), v(2), v(3));
}

Eigen::Matrix4d QuatLeftMatrix(const Eigen::Quaterniond& r) {
  const double w = r.w(), x = r.x(), y = r.y(), z = r.z();
  Eigen::Matrix4d m;
  m << w, -x, -y, -z,
       x,  w, -z,  y,
       y,  z,  w, -x,
       z, -y,  x,  w;
  return m;
}

Eigen::Vector3d OrientationError(const Eigen::Quaterniond& desired,
                                 const Eigen::Quaterniond& current) {
  Eigen::Quaterniond err = desired * current.inverse();
  if (err.w() < 0.0) err.coeffs() = -err.coeffs();
  const Eigen::Vector3d v = err.vec();
  const double s = v.norm();
  if (s < 1e-15) return 2.0 * v;
  const double angle = 2.0 * std::atan2(s, err.w());
  return v / s * angle;
}

double OrientationDistance(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b) {
  return OrientationError(a, b).norm();
}

double PointSegmentDistance(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                            const Eigen::Vector3d& b) {
  const Eigen::Vector3d ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * ab - p).norm();
}

// Closest points between two segments, after Ericson, Real-Time Collision
// Detection, 5.1.9.
double SegmentSegmentDistance(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                              const Eigen::Vector3d& q0, const Eigen::Vector3d& q1) {
  constexpr double kEps = 1e-14;
  const Eigen::Vector3d d1 = p1 - p0;
  const Eigen::Vector3d d2 = q1 - q0;
  const Eigen::Vector3d r = p0 - q0;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  double s = 0.0;
  double t = 0.0;
  if (a <= kEps && e <= kEps) return r.norm();
  if (a <= kEps) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= kEps) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > kEps ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((p0 + s * d1) - (q0 + t * d2)).norm();
}

namespace {

double LocalPointBoxDistance(const Eigen::Vector3d& local, const Eigen::Vector3d& half) {
  const Eigen::Vector3d excess = (local.cwiseAbs() - half).cwiseMax(0.0);
  return excess.norm();
}

}  // namespace

double PointBoxDistance(const Eigen::Vector3d& p, const Pose& box,
                        const Eigen::Vector3d& half_extents) {
  const Eigen::Vector3d local = box.orientation.conjugate() * (p - box.position);
  return LocalPointBoxDistance(local, half_extents);
}

double SegmentBoxDistance(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Pose& box,
                          const Eigen::Vector3d& half_extents) {
  const Eigen::Quaterniond inv = box.orientation.conjugate();
  const Eigen::Vector3d la = inv * (a - box.position);
  const Eigen::Vector3d lb = inv * (b - box.position);
  const Eigen::Vector3d d = lb - la;

  // Slab test first: an intersecting segment has distance exactly zero.
  double t0 = 0.0, t1 = 1.0;
  bool hit = true;
  for (int i = 0; i < 3 && hit; ++i) {
    if (std::abs(d(i)) < 1e-15) {
      if (std::abs(la(i)) > half_extents(i)) hit = false;
    } else {
      double ta = (-half_extents(i) - la(i)) / d(i);
      double tb = (half_extents(i) - la(i)) / d(i);
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
      if (t0 > t1) hit = false;
    }
  }
  if (hit) return 0.0;

  // Distance along the segment is convex in the segment parameter.
  auto f = [&](double t) { return LocalPointBoxDistance(la + t * d, half_extents); };
  constexpr double kInvPhi = 0.6180339887498949;
  double lo = 0.0, hi = 1.0;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  return std::min({f(0.0), f(1.0), f(0.5 * (lo + hi))});
}

}  // namespace lfdq
