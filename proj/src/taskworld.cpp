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

#include "lfdq/taskworld.hpp"

#include <cmath>
#include <numbers>

#include "lfdq/error.hpp"
#include "lfdq/jsonio.hpp"

namespace lfdq {

using nlohmann::json;

Eigen::Vector3d FaceGeometry::PointAt(const Eigen::Vector2d& uv) const {
  return corner + uv(0) * u_axis + uv(1) * v_axis;
}

Eigen::Quaterniond FaceGeometry::PressOrientation() const {
  Eigen::Matrix3d r;
  r.col(0) = u_axis;
  r.col(1) = -v_axis;
  r.col(2) = -normal;
  return Eigen::Quaterniond(r).normalized();
}

namespace {

bool ValidFaceLabel(const std::string& label) {
  return label.size() == 2 && (label[0] == '+' || label[0] == '-') &&
         (label[1] == 'x' || label[1] == 'y' || label[1] == 'z');
}

// Local (box frame) normal, u and v axes with u x v = normal.
void LocalFaceAxes(const std::string& label, Eigen::Vector3d& n, Eigen::Vector3d& u,
                   Eigen::Vector3d& v) {
  const double s = label[0] == '+' ? 1.0 : -1.0;
  const int axis = label[1] - 'x';
  n = Eigen::Vector3d::Zero();
  n(axis) = s;
  const int a = (axis + 1) % 3;
  const int b = (axis + 2) % 3;
  u = Eigen::Vector3d::Unit(s > 0 ? a : b);
  v = Eigen::Vector3d::Unit(s > 0 ? b : a);
}

}  // namespace

void TaskWorld::Validate() const {
  if (!(edge > 0.0)) throw Error(ErrorCode::kSchemaViolation, "edge must be positive");
  if (!(goal_radius > 0.0)) throw Error(ErrorCode::kSchemaViolation, "goal_radius must be positive");
  if (!(corner_inset >= 0.0 && corner_inset < 0.5 * edge)) {
    throw Error(ErrorCode::kSchemaViolation, "corner_inset must lie in [0, edge/2)");
  }
  if (!ValidFaceLabel(low_face) || !ValidFaceLabel(high_face)) {
    throw Error(ErrorCode::kSchemaViolation, "face labels must be one of +x,-x,+y,-y,+z,-z");
  }
  if (low_face == high_face) {
    throw Error(ErrorCode::kSchemaViolation, "the two instrumented faces must differ");
  }
  if (std::abs(box_pose.orientation.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::kSchemaViolation, "box orientation must be a unit quaternion");
  }
}

FaceGeometry TaskWorld::Face(FaceId face) const {
  const std::string& label = face == FaceId::kLow ? low_face : high_face;
  if (!ValidFaceLabel(label)) throw Error(ErrorCode::kUnknownFace, label);
  Eigen::Vector3d n, u, v;
  LocalFaceAxes(label, n, u, v);
  const Eigen::Matrix3d r = box_pose.orientation.toRotationMatrix();
  FaceGeometry g;
  g.normal = r * n;
  g.u_axis = r * u;
  g.v_axis = r * v;
  g.center = box_pose.position + 0.5 * edge * g.normal;
  g.corner = g.center - 0.5 * edge * (g.u_axis + g.v_axis);
  return g;
}

TaskWorld ReferenceWorld() {
  TaskWorld world;
  // Right of the arm, yawed 15 degrees; the +y face looks back toward the
  // robot's midline so reaching it means threading between body and box.
  world.box_pose.position = Eigen::Vector3d(0.7, -0.4, -0.025);
  world.box_pose.orientation =
      Eigen::Quaterniond(Eigen::AngleAxisd(15.0 * std::numbers::pi / 180.0, Eigen::Vector3d::UnitZ()));
  return world;
}

TaskWorld WorldFromJsonText(const std::string& text) {
  const json doc = ParseJsonText(text);
  for (const char* key : {"box_pose", "edge", "face_assignments", "goal_radius", "corner_inset"}) {
    RequireKey(doc, key);
  }
  TaskWorld world;
  const json& pose = doc["box_pose"];
  RequireKey(pose, "position");
  RequireKey(pose, "orientation");
  ReadNumbers(pose["position"], world.box_pose.position.data(), 3, "box_pose.position");
  double wxyz[4];
  ReadNumbers(pose["orientation"], wxyz, 4, "box_pose.orientation");
  world.box_pose.orientation = Eigen::Quaterniond(wxyz[0], wxyz[1], wxyz[2], wxyz[3]);
  world.edge = doc["edge"].get<double>();
  const json& faces = doc["face_assignments"];
  RequireKey(faces, "low_constraint");
  RequireKey(faces, "high_constraint");
  world.low_face = faces["low_constraint"].get<std::string>();
  world.high_face = faces["high_constraint"].get<std::string>();
  world.goal_radius = doc["goal_radius"].get<double>();
  world.corner_inset = doc["corner_inset"].get<double>();
  world.Validate();
  return world;
}

TaskWorld LoadWorld(const std::string& path) { return WorldFromJsonText(ReadTextFile(path)); }

std::string WorldToJsonText(const TaskWorld& world) {
  json doc;
  doc["units"] = "meters";
  const Eigen::Vector3d& p = world.box_pose.position;
  const Eigen::Quaterniond& q = world.box_pose.orientation;
  doc["box_pose"] = {{"position", {p.x(), p.y(), p.z()}},
                     {"orientation", {q.w(), q.x(), q.y(), q.z()}}};
  doc["edge"] = world.edge;
  doc["face_assignments"] = {{"low_constraint", world.low_face},
                             {"high_constraint", world.high_face}};
  doc["goal_radius"] = world.goal_radius;
  doc["corner_inset"] = world.corner_inset;
  return doc.dump(2) + "\n";
}

namespace {

Target MakeTarget(const FaceGeometry& g, FaceId face, int index, const Eigen::Vector2d& uv,
                  TargetKind kind) {
  Target t;
  t.face = face;
  t.index = index;
  t.uv = uv;
  t.position = g.PointAt(uv);
  t.orientation = g.PressOrientation();
  t.kind = kind;
  return t;
}

}  // namespace

std::vector<Target> DemonstratedTargets(const TaskWorld& world, FaceId face) {
  const FaceGeometry g = world.Face(face);
  const double e = world.edge;
  const double i = world.corner_inset;
  const Eigen::Vector2d center(0.5 * e, 0.5 * e);
  const std::array<Eigen::Vector2d, 4> corners = {
      Eigen::Vector2d(i, i), Eigen::Vector2d(e - i, i), Eigen::Vector2d(e - i, e - i),
      Eigen::Vector2d(i, e - i)};
  std::vector<Target> targets;
  targets.reserve(9);
  targets.push_back(MakeTarget(g, face, 0, center, TargetKind::kDemonstrated));
  for (int k = 0; k < 4; ++k) {
    targets.push_back(MakeTarget(g, face, 1 + k, corners[k], TargetKind::kDemonstrated));
  }
  for (int k = 0; k < 4; ++k) {
    targets.push_back(
        MakeTarget(g, face, 5 + k, 0.5 * (corners[k] + center), TargetKind::kDemonstrated));
  }
  return targets;
}

std::vector<Target> GeneralizationGrid(const TaskWorld& world, FaceId face) {
  const FaceGeometry g = world.Face(face);
  const double step = world.edge / 8.0;
  std::vector<Target> targets;
  targets.reserve(49);
  for (int i = 1; i <= 7; ++i) {
    for (int j = 1; j <= 7; ++j) {
      targets.push_back(MakeTarget(g, face, static_cast<int>(targets.size()),
                                   Eigen::Vector2d(i * step, j * step), TargetKind::kGrid));
    }
  }
  return targets;
}

bool GoalReached(const Pose& tip, const TipBox& tip_box, const TaskWorld& world,
                 const Target& target) {
  return PointBoxDistance(target.position, tip, tip_box.HalfExtents()) <= world.goal_radius;
}

std::vector<std::pair<int, int>> SelfCollisionPairs(const KinematicChain& chain) {
  // Link lengths at q = 0 decide which links are structurally adjacent.
  const auto capsules = LinkCapsules(chain, JointVector::Zero());
  const int n = static_cast<int>(capsules.size());
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 2; j < n; ++j) {
      bool separated = false;
      for (int k = i + 1; k < j; ++k) {
        if ((capsules[k].b - capsules[k].a).norm() > 1e-9) separated = true;
      }
      if (separated) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

CollisionReport CheckCollisions(const KinematicChain& chain, const std::vector<JointVector>& traj,
                                const TaskWorld& world, const Target& target) {
  CollisionReport report;
  const auto pairs = SelfCollisionPairs(chain);
  const Eigen::Vector3d half = world.HalfExtents();
  const double tip_exempt = world.goal_radius + chain.tip_box.Diagonal();
  for (std::size_t s = 0; s < traj.size(); ++s) {
    const auto capsules = LinkCapsules(chain, traj[s]);
    const Pose tip = ForwardKinematics(chain, traj[s]);
    const bool reached = GoalReached(tip, chain.tip_box, world, target);
    const int tip_index = static_cast<int>(capsules.size()) - 1;
    if (!report.box_hit) {
      for (int c = 0; c <= tip_index; ++c) {
        if (c == tip_index && (tip.position - target.position).norm() < tip_exempt) continue;
        const Capsule& cap = capsules[c];
        if (SegmentBoxDistance(cap.a, cap.b, world.box_pose, half) < cap.radius) {
          report.box_hit = true;
          report.box_sample = static_cast<int>(s);
          report.box_link = c;
          break;
        }
      }
    }
    if (!report.self_hit) {
      for (const auto& [i, j] : pairs) {
        const double d =
            SegmentSegmentDistance(capsules[i].a, capsules[i].b, capsules[j].a, capsules[j].b);
        if (d < capsules[i].radius + capsules[j].radius) {
          report.self_hit = true;
          report.self_sample = static_cast<int>(s);
          report.self_links = {i, j};
          break;
        }
      }
    }
    if (reached) {
      report.goal_sample = static_cast<int>(s);
      break;
    }
  }
  report.clear = !report.box_hit && !report.self_hit;
  return report;
}

}  // namespace lfdq
