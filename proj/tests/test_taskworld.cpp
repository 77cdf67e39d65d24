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


#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "lfdq/error.hpp"
#include "lfdq/taskworld.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace lfdq {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

Eigen::Isometry3d ToIsometry(const Pose& p) {
  Eigen::Isometry3d iso = Eigen::Isometry3d::Identity();
  iso.linear() = p.orientation.toRotationMatrix();
  iso.translation() = p.position;
  return iso;
}

TEST_CASE("target sets lie on their faces") {
  const TaskWorld world = ReferenceWorld();
  for (FaceId face : {FaceId::kLow, FaceId::kHigh}) {
    const FaceGeometry g = world.Face(face);
    CHECK(std::abs(g.u_axis.cross(g.v_axis).dot(g.normal) - 1.0) < 1e-12);
    CHECK((g.center - world.box_pose.position).norm() == doctest::Approx(0.13).epsilon(1e-12));
    const auto demo = DemonstratedTargets(world, face);
    const auto grid = GeneralizationGrid(world, face);
    REQUIRE(demo.size() == 9);
    REQUIRE(grid.size() == 49);
    CHECK((demo[0].uv - Eigen::Vector2d(0.13, 0.13)).norm() < 1e-12);
    for (int k = 0; k < 4; ++k) {
      CHECK((demo[5 + k].uv - 0.5 * (demo[1 + k].uv + demo[0].uv)).norm() < 1e-12);
      for (int c = 0; c < 2; ++c) {
        const double x = demo[1 + k].uv(c);
        CHECK((std::abs(x - 0.02) < 1e-12 || std::abs(x - 0.24) < 1e-12));
      }
    }
    for (const auto* set : {&demo, &grid}) {
      for (const Target& t : *set) {
        CHECK(std::abs((t.position - g.center).dot(g.normal)) < 1e-9);
        CHECK((t.position - g.PointAt(t.uv)).norm() < 1e-12);
        CHECK(t.face == face);
        // Pressing orientation points the tool into the face.
        CHECK((t.orientation * Eigen::Vector3d::UnitZ() + g.normal).norm() < 1e-12);
      }
    }
    double min_spacing = 1e9, min_margin = 1e9;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(grid[i].kind == TargetKind::kGrid);
      min_margin = std::min({min_margin, grid[i].uv.minCoeff(), world.edge - grid[i].uv.maxCoeff()});
      for (std::size_t j = i + 1; j < grid.size(); ++j) {
        min_spacing = std::min(min_spacing, (grid[i].position - grid[j].position).norm());
      }
    }
    CHECK(min_spacing == doctest::Approx(0.0325).epsilon(1e-9));
    CHECK(min_margin >= 0.0325 - 1e-12);
  }
}

TEST_CASE("world validation and files") {
  const TaskWorld world = ReferenceWorld();
  const std::string text = WorldToJsonText(world);
  const TaskWorld back = WorldFromJsonText(text);
  CHECK((back.box_pose.position - world.box_pose.position).norm() < 1e-15);
  CHECK(back.box_pose.orientation.isApprox(world.box_pose.orientation, 1e-15));
  CHECK(back.high_face == "+y");
  CHECK(WorldToJsonText(back) == text);

  const TaskWorld shipped = LoadWorld(std::string(LFDQ_DATA_DIR) + "/world.json");
  CHECK(WorldToJsonText(shipped) == text);

  auto doc = nlohmann::json::parse(text);
  auto broken = doc;
  broken["face_assignments"]["high_constraint"] = "+w";
  CHECK(CodeOf([&] { WorldFromJsonText(broken.dump()); }) == ErrorCode::kSchemaViolation);
  broken = doc;
  broken["face_assignments"]["high_constraint"] = "-x";
  CHECK(CodeOf([&] { WorldFromJsonText(broken.dump()); }) == ErrorCode::kSchemaViolation);
  broken = doc;
  broken["edge"] = -1.0;
  CHECK(CodeOf([&] { WorldFromJsonText(broken.dump()); }) == ErrorCode::kSchemaViolation);
  broken = doc;
  broken.erase("goal_radius");
  CHECK(CodeOf([&] { WorldFromJsonText(broken.dump()); }) == ErrorCode::kSchemaViolation);
  CHECK(CodeOf([&] { LoadWorld("/nonexistent/world.json"); }) == ErrorCode::kFileMissing);

  TaskWorld odd = world;
  odd.low_face = "front";
  CHECK(CodeOf([&] { odd.Face(FaceId::kLow); }) == ErrorCode::kUnknownFace);
  CHECK(CodeOf([&] { DemonstratedTargets(odd, FaceId::kLow); }) == ErrorCode::kUnknownFace);
}

TEST_CASE("goal sphere contact") {
  const TaskWorld world = ReferenceWorld();
  const KinematicChain chain = ReferenceChain();
  const TipBox& tip = chain.tip_box;
  const Target target = DemonstratedTargets(world, FaceId::kLow)[0];
  Pose p{target.position, target.orientation};
  CHECK(GoalReached(p, tip, world, target));

  const Eigen::Vector3d n = world.Face(FaceId::kLow).normal;
  p.position = target.position + (world.goal_radius + 0.5 * tip.Diagonal() + 1e-3) * n;
  CHECK_FALSE(GoalReached(p, tip, world, target));

  // Tip face exactly tangent to the sphere along the tip's own z axis.
  const Eigen::Vector3d z = target.orientation * Eigen::Vector3d::UnitZ();
  p.position = target.position - (world.goal_radius + 0.5 * tip.height) * z;
  CHECK(GoalReached(p, tip, world, target));
  p.position -= 1e-6 * z;
  CHECK_FALSE(GoalReached(p, tip, world, target));

  std::mt19937_64 rng(21);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int agreed = 0, compared = 0;
  for (int i = 0; i < 200; ++i) {
    Pose tip_pose;
    tip_pose.orientation =
        Eigen::Quaterniond(gauss(rng), gauss(rng), gauss(rng), gauss(rng)).normalized();
    const Eigen::Vector3d dir = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng)).normalized();
    tip_pose.position = target.position + 0.04 * std::abs(gauss(rng)) * dir;
    const double sampled =
        oracle::PointBoxDistanceBySampling(target.position, ToIsometry(tip_pose), tip.HalfExtents(), 60);
    const bool reached = GoalReached(tip_pose, tip, world, target);
    // Sampling overestimates by at most half a cell diagonal.
    if (std::abs(sampled - world.goal_radius) < 1e-3) continue;
    ++compared;
    if (reached == (sampled <= world.goal_radius)) ++agreed;

    // Sliding the tip toward the target keeps contact.
    if (reached) {
      Pose closer = tip_pose;
      closer.position = target.position + 0.5 * (tip_pose.position - target.position);
      CHECK(GoalReached(closer, tip, world, target));
    }
  }
  CHECK(compared > 150);
  CHECK(agreed == compared);
}

// Dense 1 mm samples along each capsule axis, tested against the analytic box distance.
bool BoxHitBySampling(const KinematicChain& chain, const JointVector& q, const TaskWorld& world,
                      const Target& target, double* closest_gap) {
  const auto caps = LinkCapsules(chain, q);
  const Pose tip = ForwardKinematics(chain, q);
  const double exempt = world.goal_radius + chain.tip_box.Diagonal();
  *closest_gap = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < caps.size(); ++c) {
    if (c + 1 == caps.size() && (tip.position - target.position).norm() < exempt) continue;
    const double len = (caps[c].b - caps[c].a).norm();
    const int steps = std::max(1, static_cast<int>(std::ceil(len / 1e-3)));
    for (int s = 0; s <= steps; ++s) {
      const Eigen::Vector3d pt = caps[c].a + (caps[c].b - caps[c].a) * (double(s) / steps);
      const double gap = PointBoxDistance(pt, world.box_pose, world.HalfExtents()) - caps[c].radius;
      *closest_gap = std::min(*closest_gap, gap);
    }
  }
  return *closest_gap < 0.0;
}

TEST_CASE("collision checks") {
  const KinematicChain chain = ReferenceChain();
  const TaskWorld world = ReferenceWorld();
  const Target target = DemonstratedTargets(world, FaceId::kLow)[0];
  const JointVector q0 = chain.start_config;

  SUBCASE("adjacent links are never paired") {
    for (const auto& [i, j] : SelfCollisionPairs(chain)) CHECK(j > i + 1);
    CHECK_FALSE(SelfCollisionPairs(chain).empty());
  }
  SUBCASE("start configuration is clear") {
    const CollisionReport r = CheckCollisions(chain, {q0, q0}, world, target);
    CHECK(r.clear);
    CHECK(r.goal_sample == -1);
  }
  SUBCASE("elbow inside the cube is flagged at its first sample") {
    JointVector qa = q0;
    qa(0) += 1.2;
    TaskWorld moved = world;
    const auto caps = LinkCapsules(chain, qa);
    moved.box_pose.position = 0.5 * (caps[3].a + caps[3].b);
    REQUIRE(CheckCollisions(chain, {q0}, moved, target).clear);
    const CollisionReport r = CheckCollisions(chain, {q0, q0, q0, qa, qa}, moved, target);
    CHECK(r.box_hit);
    CHECK(r.box_sample == 3);
    CHECK_FALSE(r.clear);
  }
  SUBCASE("nothing after the goal counts") {
    JointVector qa = q0;
    qa(0) += 1.2;
    TaskWorld moved = world;
    const auto caps = LinkCapsules(chain, qa);
    moved.box_pose.position = 0.5 * (caps[3].a + caps[3].b);
    Target reachable = target;
    const Pose tip = ForwardKinematics(chain, q0);
    reachable.position = tip.position;
    const CollisionReport r = CheckCollisions(chain, {q0, qa}, moved, reachable);
    CHECK(r.goal_sample == 0);
    CHECK(r.clear);
  }
  SUBCASE("folded arm collides with itself") {
    TaskWorld far = world;
    far.box_pose.position = Eigen::Vector3d(10, 10, 10);
    // Elbow and wrist fully flexed: the tip folds back onto the upper arm.
    JointVector folded;
    folded << -0.10486, 0.958389, 1.96847, -2.28716, 0.0944841, -1.92426, 0.596342;
    const CollisionReport r = CheckCollisions(chain, {q0, q0, folded}, far, target);
    CHECK(r.self_hit);
    CHECK(r.self_sample == 2);
    CHECK(r.self_links == std::pair<int, int>(2, 7));
    const auto caps = LinkCapsules(chain, folded);
    CHECK(SegmentSegmentDistance(caps[2].a, caps[2].b, caps[7].a, caps[7].b) <
          caps[2].radius + caps[7].radius);
    CHECK_FALSE(r.clear);

    std::mt19937_64 rng(22);
    for (int i = 0; i < 300; ++i) {
      const CollisionReport any = CheckCollisions(chain, {oracle::RandomConfig(chain, rng)}, world, target);
      CHECK(any.clear == (!any.box_hit && !any.self_hit));
    }
  }
  SUBCASE("box contact agrees with point sampling") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-0.25, 0.25);
    int compared = 0, agreed = 0, hits = 0;
    for (int i = 0; i < 200; ++i) {
      const JointVector q = oracle::RandomConfig(chain, rng);
      TaskWorld w = world;
      // Put the cube somewhere near the arm so both outcomes occur.
      const auto caps = LinkCapsules(chain, q);
      w.box_pose.position = caps[2 + i % 5].b + Eigen::Vector3d(u(rng), u(rng), u(rng));
      double gap = 0.0;
      const bool oracle_hit = BoxHitBySampling(chain, q, w, target, &gap);
      if (std::abs(gap) < 1e-4) continue;
      ++compared;
      const CollisionReport r = CheckCollisions(chain, {q}, w, target);
      if (r.box_hit == oracle_hit) ++agreed;
      hits += oracle_hit;
    }
    CHECK(compared > 180);
    CHECK(agreed == compared);
    CHECK(hits > 20);
    CHECK(hits < compared - 20);
  }
}

}  // namespace
}  // namespace lfdq
