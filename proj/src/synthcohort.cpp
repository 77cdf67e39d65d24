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


#include "lfdq/synthcohort.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>

#include "lfdq/error.hpp"
#include "lfdq/jsonio.hpp"
#include "parallel.hpp"

namespace lfdq {

using nlohmann::json;

namespace {

constexpr double kWrapClearance = 0.06;
constexpr double kPreApproach = 0.08;
// Largest approach tilt, reached at approach_consistency = 0.
constexpr double kMaxApproachTilt = 0.6;
// Largest relative change of the demonstration length and of the time warp.
constexpr double kMaxTimingSpread = 0.15;
constexpr double kMaxWarp = 0.5;

double Smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

std::vector<Eigen::Vector3d> Chaikin(std::vector<Eigen::Vector3d> pts, int iterations) {
  for (int it = 0; it < iterations; ++it) {
    std::vector<Eigen::Vector3d> out{pts.front()};
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      out.push_back(0.75 * pts[i] + 0.25 * pts[i + 1]);
      out.push_back(0.25 * pts[i] + 0.75 * pts[i + 1]);
    }
    out.push_back(pts.back());
    pts = std::move(out);
  }
  return pts;
}

Eigen::Vector3d RandomUnit(std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Eigen::Vector3d v;
  do {
    v = Eigen::Vector3d(n01(rng), n01(rng), n01(rng));
  } while (v.norm() < 1e-9);
  return v.normalized();
}

// Low-pass filtered white noise with unit marginal std, one column per axis.
std::vector<Eigen::Vector3d> SmoothNoise(std::mt19937_64& rng, int n, double sigma_samples) {
  const int half = static_cast<int>(std::ceil(3.0 * sigma_samples));
  std::vector<double> kernel(2 * half + 1);
  double sum = 0.0;
  for (int i = -half; i <= half; ++i) {
    kernel[i + half] = std::exp(-0.5 * (i * i) / (sigma_samples * sigma_samples));
    sum += kernel[i + half];
  }
  double sq = 0.0;
  for (double& w : kernel) {
    w /= sum;
    sq += w * w;
  }
  const double gain = 1.0 / std::sqrt(sq);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<Eigen::Vector3d> white(n + 2 * half);
  for (auto& w : white) w = Eigen::Vector3d(n01(rng), n01(rng), n01(rng));
  std::vector<Eigen::Vector3d> out(n, Eigen::Vector3d::Zero());
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i <= 2 * half; ++i) out[k] += kernel[i] * white[k + i];
    out[k] *= gain;
  }
  return out;
}

StatePoint InterpolateState(const std::vector<StatePoint>& path, double phase) {
  const double f = std::clamp(phase, 0.0, 1.0) * (path.size() - 1);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(f), path.size() - 2);
  const double w = f - i;
  StatePoint p;
  p.x = (1.0 - w) * path[i].x + w * path[i + 1].x;
  p.orientation = path[i].orientation.slerp(w, path[i + 1].orientation);
  return p;
}

double ReadDouble(const json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

int ReadInt(const json& j, const char* key, int fallback) {
  return j.contains(key) ? j.at(key).get<int>() : fallback;
}

DemonstratorProfile ProfileFromJson(const json& j, const DemonstratorProfile& fallback) {
  DemonstratorProfile p;
  p.base_noise = ReadDouble(j, "base_noise", fallback.base_noise);
  p.detour_amp = ReadDouble(j, "detour_amp", fallback.detour_amp);
  p.approach_consistency = ReadDouble(j, "approach_consistency", fallback.approach_consistency);
  p.improvement_rate = ReadDouble(j, "improvement_rate", fallback.improvement_rate);
  p.collision_proneness = ReadDouble(j, "collision_proneness", fallback.collision_proneness);
  p.Validate();
  return p;
}

json ProfileToJson(const DemonstratorProfile& p) {
  return json{{"base_noise", p.base_noise},
              {"detour_amp", p.detour_amp},
              {"approach_consistency", p.approach_consistency},
              {"improvement_rate", p.improvement_rate},
              {"collision_proneness", p.collision_proneness}};
}

CohortSpec SpecFromJson(const json& doc) {
  CohortSpec spec;
  spec.n_fast = ReadInt(doc, "n_fast", spec.n_fast);
  spec.n_slow = ReadInt(doc, "n_slow", spec.n_slow);
  spec.sessions = ReadInt(doc, "sessions", spec.sessions);
  spec.trials_per_face = ReadInt(doc, "trials_per_face", spec.trials_per_face);
  if (doc.contains("seed")) spec.seed = doc.at("seed").get<std::uint64_t>();
  spec.samples = ReadInt(doc, "samples", spec.samples);
  spec.profile_spread = ReadDouble(doc, "profile_spread", spec.profile_spread);
  if (doc.contains("fast_profile")) spec.fast = ProfileFromJson(doc.at("fast_profile"), spec.fast);
  if (doc.contains("slow_profile")) spec.slow = ProfileFromJson(doc.at("slow_profile"), spec.slow);
  spec.chain_file = doc.value("chain", "");
  spec.world_file = doc.value("world", "");
  if (ReadInt(doc, "faces", CohortSpec::kFaces) != CohortSpec::kFaces ||
      ReadInt(doc, "targets_per_face", CohortSpec::kTargetsPerFace) != CohortSpec::kTargetsPerFace) {
    throw Error(ErrorCode::kSchemaViolation, "cohort spec: faces must be 2 and targets_per_face 9");
  }
  spec.Validate();
  return spec;
}

json SpecToJson(const CohortSpec& spec) {
  json doc{{"n_fast", spec.n_fast},
              {"n_slow", spec.n_slow},
              {"sessions", spec.sessions},
              {"trials_per_face", spec.trials_per_face},
              {"faces", CohortSpec::kFaces},
              {"targets_per_face", CohortSpec::kTargetsPerFace},
              {"seed", spec.seed},
              {"samples", spec.samples},
              {"profile_spread", spec.profile_spread},
              {"fast_profile", ProfileToJson(spec.fast)},
              {"slow_profile", ProfileToJson(spec.slow)}};
  if (!spec.chain_file.empty()) doc["chain"] = spec.chain_file;
  if (!spec.world_file.empty()) doc["world"] = spec.world_file;
  return doc;
}

// Group profile scaled by one log-normal factor per demonstrator.
DemonstratorProfile JitterProfile(const DemonstratorProfile& group, double spread,
                                  std::uint64_t seed) {
  if (spread <= 0.0 || group.IsClean()) return group;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  const double f = std::exp(spread * n01(rng));
  DemonstratorProfile p = group;
  p.base_noise *= f;
  p.detour_amp *= f;
  p.approach_consistency = std::clamp(1.0 - (1.0 - p.approach_consistency) * f, 0.0, 1.0);
  p.collision_proneness = std::clamp(p.collision_proneness * f, 0.0, 1.0);
  return p;
}

std::string MemberId(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "P%02d", index + 1);
  return buf;
}

std::filesystem::path DemoPath(const std::filesystem::path& root, const TrialKey& key, int target) {
  return root / key.demonstrator / std::to_string(key.session) / std::to_string(key.trial) /
         FaceName(key.face) / ("target_" + std::to_string(target) + ".json");
}

}  // namespace

void DemonstratorProfile::Validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!(base_noise >= 0.0) || !(detour_amp >= 0.0) || !unit(approach_consistency) ||
      !unit(improvement_rate) || !unit(collision_proneness)) {
    throw Error(ErrorCode::kSchemaViolation, "demonstrator profile field out of range");
  }
}

bool DemonstratorProfile::IsClean() const {
  return base_noise == 0.0 && detour_amp == 0.0 && approach_consistency == 1.0;
}

DemonstratorProfile DemonstratorProfile::Fast() {
  DemonstratorProfile p;
  p.base_noise = 0.008;
  p.detour_amp = 0.05;
  p.approach_consistency = 0.8;
  p.improvement_rate = 0.15;
  p.collision_proneness = 0.15;
  return p;
}

DemonstratorProfile DemonstratorProfile::Slow() {
  DemonstratorProfile p;
  p.base_noise = 0.03;
  p.detour_amp = 0.2;
  p.approach_consistency = 0.5;
  p.improvement_rate = 0.35;
  p.collision_proneness = 0.6;
  return p;
}

void CohortSpec::Validate() const {
  if (n_fast < 0 || n_slow < 0) throw Error(ErrorCode::kSchemaViolation, "counts must be >= 0");
  if (n_fast + n_slow > 99) throw Error(ErrorCode::kSchemaViolation, "at most 99 demonstrators");
  if (sessions < 1 || trials_per_face < 1) {
    throw Error(ErrorCode::kSchemaViolation, "sessions and trials_per_face must be >= 1");
  }
  if (samples < 10) throw Error(ErrorCode::kSchemaViolation, "samples must be >= 10");
  if (!(profile_spread >= 0.0)) throw Error(ErrorCode::kSchemaViolation, "profile_spread must be >= 0");
  fast.Validate();
  slow.Validate();
}

CohortSpec CohortSpecFromJsonText(const std::string& text) {
  const json doc = ParseJsonText(text);
  if (!doc.is_object()) throw Error(ErrorCode::kSchemaViolation, "cohort spec must be an object");
  try {
    return SpecFromJson(doc);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, std::string("cohort spec: ") + e.what());
  }
}

CohortSpec LoadCohortSpec(const std::string& path) {
  CohortSpec spec = CohortSpecFromJsonText(ReadTextFile(path));
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  for (std::string* file : {&spec.chain_file, &spec.world_file}) {
    if (!file->empty() && std::filesystem::path(*file).is_relative()) *file = (base / *file).string();
  }
  return spec;
}

std::string CohortSpecToJsonText(const CohortSpec& spec) { return SpecToJson(spec).dump(2) + "\n"; }

ReferencePath PlanReferencePath(const KinematicChain& chain, const TaskWorld& world,
                                const Target& target, int samples, const ClikParams& params) {
  if (samples < 2) throw Error(ErrorCode::kInvalidArgument, "samples must be >= 2");
  const Pose start = ForwardKinematics(chain, chain.start_config);
  const FaceGeometry face = world.Face(target.face);
  const Eigen::Quaterniond press =
      Eigen::Quaterniond::FromTwoVectors(start.orientation * Eigen::Vector3d::UnitZ(), -face.normal) *
      start.orientation;

  ReferencePath ref;
  ref.target = target;
  ref.via_points.push_back(start.position);
  if (target.face == FaceId::kHigh) {
    // Wrap around the shared edge: first out in front of the low face, then
    // past the corner, both 6 cm clear of the cube.
    const FaceGeometry low = world.Face(FaceId::kLow);
    const Eigen::Vector3d c = world.box_pose.position;
    const Eigen::Vector3d along = face.normal.cross(low.normal);
    const double h = (target.position - c).dot(along);
    const double r = 0.5 * world.edge + kWrapClearance;
    ref.via_points.push_back(c + r * low.normal + 0.5 * world.edge * face.normal + h * along);
    ref.via_points.push_back(c + r * (low.normal + face.normal) + h * along);
  }
  ref.via_points.push_back(target.position + kPreApproach * face.normal);
  ref.via_points.push_back(target.position);

  // The final approach stays straight; the rest is corner-cut.
  std::vector<Eigen::Vector3d> pts =
      Chaikin({ref.via_points.begin(), ref.via_points.end() - 1}, 3);
  pts.push_back(ref.via_points.back());
  std::vector<double> cum{0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) cum.push_back(cum.back() + (pts[i] - pts[i - 1]).norm());
  const double length = cum.back();
  // Orientation settles by the pre-approach point, earlier when wrapping.
  const double s_rot = cum[cum.size() - 2] * (target.face == FaceId::kHigh ? 0.6 : 1.0);

  ref.cart.resize(samples);
  for (int k = 0; k < samples; ++k) {
    const double tau = static_cast<double>(k) / (samples - 1);
    const double s = length * tau * tau * tau * (10.0 - 15.0 * tau + 6.0 * tau * tau);
    std::size_t i = 1;
    while (i < cum.size() - 1 && cum[i] < s) ++i;
    const double f = (s - cum[i - 1]) / std::max(1e-12, cum[i] - cum[i - 1]);
    StatePoint& p = ref.cart[k];
    p.t = k * params.dt;
    p.x = pts[i - 1] + std::clamp(f, 0.0, 1.0) * (pts[i] - pts[i - 1]);
    p.orientation = start.orientation.slerp(Smoothstep(s / s_rot), press);
  }

  ref.joints = TrackTrajectory(chain, chain.start_config, ref.cart, {}, params);
  if (!ref.joints.feasible) {
    throw Error(ErrorCode::kNoFeasiblePlan, std::string("reference path not trackable (") +
                                                TrackingFailureName(ref.joints.failure) + ")");
  }
  const CollisionReport report = CheckCollisions(chain, ref.joints.q, world, target);
  if (!report.clear) throw Error(ErrorCode::kNoFeasiblePlan, "reference path collides");
  if (report.goal_sample < 0) throw Error(ErrorCode::kNoFeasiblePlan, "reference path misses the goal");
  return ref;
}

int TrialIndexAcrossSessions(int session, int trial, int trials_per_session) {
  return (session - 1) * trials_per_session + (trial - 1);
}

Demonstration CorruptPath(const KinematicChain& chain, const TaskWorld& world,
                          const ReferencePath& reference, const DemonstratorProfile& profile,
                          const DemoMeta& meta, int trials_per_session, std::uint64_t seed,
                          const ClikParams& params) {
  profile.Validate();
  const int n = static_cast<int>(reference.cart.size());
  if (n < 2) throw Error(ErrorCode::kEmptyDemonstration, "reference path too short");
  const int index = TrialIndexAcrossSessions(meta.session, meta.trial, trials_per_session);
  const double decay = std::pow(1.0 - profile.improvement_rate, std::max(0, index));
  const FaceGeometry face = world.Face(reference.target.face);
  const Eigen::Vector3d goal = reference.target.position;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> n01(0.0, 1.0);

  // Every draw happens regardless of the profile so the random stream does
  // not depend on which terms are active.
  const std::vector<Eigen::Vector3d> noise = SmoothNoise(rng, n, n / 12.0);
  const double detour_center = 0.3 + 0.4 * u01(rng);
  const double detour_width = 0.06 + 0.06 * u01(rng);
  const double detour_scale = 0.5 + 0.5 * u01(rng);
  const bool into_box = u01(rng) < profile.collision_proneness;
  const Eigen::Vector3d random_dir = RandomUnit(rng);
  const double tilt_draw = 2.0 * u01(rng) - 1.0;
  const double tilt_azimuth = 2.0 * std::numbers::pi * u01(rng);
  const double warp_draw = 2.0 * u01(rng) - 1.0;
  const double length_draw = n01(rng);

  const double noise_std = profile.base_noise * decay;
  const double detour = profile.detour_amp * decay * detour_scale;
  const double inconsistency = 1.0 - profile.approach_consistency;
  const double tilt = kMaxApproachTilt * inconsistency * tilt_draw;

  std::vector<StatePoint> path = reference.cart;
  if (noise_std > 0.0 || detour > 0.0) {
    const int centre = std::clamp(static_cast<int>(std::lround(detour_center * (n - 1))), 0, n - 1);
    const Eigen::Vector3d detour_dir =
        into_box ? (world.box_pose.position - reference.cart[centre].x).normalized() : random_dir;
    for (int k = 0; k < n; ++k) {
      const double s = static_cast<double>(k) / (n - 1);
      Eigen::Vector3d d = noise_std * Smoothstep(s / 0.25) * noise[k];
      const double z = (s - detour_center) / detour_width;
      d += detour * std::exp(-0.5 * z * z) * detour_dir;
      // Near the end the face stops motion along its normal.
      d -= Smoothstep((s - 0.6) / 0.3) * d.dot(face.normal) * face.normal;
      path[k].x += d;
    }
  }
  if (tilt != 0.0) {
    const Eigen::Vector3d axis =
        (std::cos(tilt_azimuth) * face.u_axis + std::sin(tilt_azimuth) * face.v_axis).normalized();
    for (int k = 0; k < n; ++k) {
      const double s = static_cast<double>(k) / (n - 1);
      const Eigen::AngleAxisd rot(Smoothstep((s - 0.3) / 0.55) * tilt, axis);
      path[k].x = goal + rot * (path[k].x - goal);
      path[k].orientation = Eigen::Quaterniond(rot) * path[k].orientation;
    }
  }
  if (inconsistency > 0.0) {
    // Demonstrators also differ in pace: a length change plus a monotone
    // time warp u + b sin(2 pi u) / (2 pi), |b| < 1.
    const double spread = kMaxTimingSpread * inconsistency;
    const int m = std::clamp(static_cast<int>(std::lround(n * (1.0 + spread * length_draw))),
                             static_cast<int>(0.7 * n), static_cast<int>(1.3 * n));
    const double b = kMaxWarp * inconsistency * warp_draw;
    std::vector<StatePoint> warped(m);
    for (int k = 0; k < m; ++k) {
      const double u = static_cast<double>(k) / (m - 1);
      warped[k] = InterpolateState(path, u + b * std::sin(2.0 * std::numbers::pi * u) /
                                                  (2.0 * std::numbers::pi));
      warped[k].t = k * params.dt;
    }
    path = std::move(warped);
  }

  const JointTrajectory solved = TrackTrajectory(chain, chain.start_config, path, {}, params);
  std::vector<JointSample> samples(solved.q.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    samples[k].t = path[k].t;
    samples[k].q = solved.q[k];
  }
  return MakeDemonstration(chain, meta, std::move(samples));
}

std::uint64_t DeriveSeed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
  // splitmix64 finaliser folded over the parts.
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(base);
  for (std::uint64_t p : parts) h = mix(h ^ mix(p));
  return h;
}

std::size_t Cohort::DemoCount() const {
  std::size_t count = 0;
  for (const auto& [key, set] : trials) count += set.demos.size();
  return count;
}

Cohort GenerateCohort(const KinematicChain& chain, const TaskWorld& world, const CohortSpec& spec,
                      int threads, const ClikParams& params) {
  spec.Validate();
  chain.Validate();
  world.Validate();
  Cohort cohort;
  cohort.chain = chain;
  cohort.world = world;
  cohort.spec = spec;

  std::vector<std::string> groups(spec.n_fast, "fast");
  groups.insert(groups.end(), spec.n_slow, "slow");
  std::mt19937_64 shuffle_rng(DeriveSeed(spec.seed, {0x5eed}));
  std::shuffle(groups.begin(), groups.end(), shuffle_rng);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const DemonstratorProfile& base = groups[i] == "fast" ? spec.fast : spec.slow;
    cohort.members.push_back(
        {MemberId(static_cast<int>(i)), groups[i],
         JitterProfile(base, spec.profile_spread, DeriveSeed(spec.seed, {0x9f0f, i}))});
  }
  if (cohort.members.empty()) return cohort;

  std::vector<ReferencePath> refs;
  for (FaceId face : {FaceId::kLow, FaceId::kHigh}) {
    for (const Target& t : DemonstratedTargets(world, face)) {
      refs.push_back(PlanReferencePath(chain, world, t, spec.samples, params));
    }
  }

  struct Job {
    TrialKey key;
    std::size_t member;
    int target;
  };
  std::vector<Job> jobs;
  for (std::size_t m = 0; m < cohort.members.size(); ++m) {
    for (int s = 1; s <= spec.sessions; ++s) {
      for (int tr = 1; tr <= spec.trials_per_face; ++tr) {
        for (FaceId face : {FaceId::kLow, FaceId::kHigh}) {
          TrialKey key{cohort.members[m].id, s, tr, face};
          cohort.trials[key].demos.resize(CohortSpec::kTargetsPerFace);
          for (int k = 0; k < CohortSpec::kTargetsPerFace; ++k) jobs.push_back({key, m, k});
        }
      }
    }
  }
  detail::ParallelFor(jobs.size(), threads, [&](std::size_t j) {
    const Job& job = jobs[j];
    const int face_index = job.key.face == FaceId::kLow ? 0 : 1;
    const ReferencePath& ref = refs[face_index * CohortSpec::kTargetsPerFace + job.target];
    DemoMeta meta{job.target, job.key.face, job.key.session, job.key.trial, job.key.demonstrator};
    const std::uint64_t seed =
        DeriveSeed(spec.seed, {job.member, static_cast<std::uint64_t>(job.key.session),
                               static_cast<std::uint64_t>(job.key.trial),
                               static_cast<std::uint64_t>(face_index),
                               static_cast<std::uint64_t>(job.target)});
    // Each job owns a distinct pre-sized slot, so no locking is needed.
    cohort.trials.at(job.key).demos[job.target] =
        CorruptPath(chain, world, ref, cohort.members[job.member].profile, meta,
                    spec.trials_per_face, seed, params);
  });
  return cohort;
}

void SaveCohort(const Cohort& cohort, const std::string& directory) {
  namespace fs = std::filesystem;
  const fs::path root(directory);
  json manifest;
  manifest["format"] = "lfdq-cohort-v1";
  CohortSpec spec = cohort.spec;
  // The cohort carries its own chain.json and world.json.
  spec.chain_file.clear();
  spec.world_file.clear();
  manifest["spec"] = SpecToJson(spec);
  manifest["chain"] = "chain.json";
  manifest["world"] = "world.json";
  json members = json::array();
  for (const CohortMember& m : cohort.members) {
    members.push_back({{"id", m.id}, {"group", m.group}, {"profile", ProfileToJson(m.profile)}});
  }
  manifest["members"] = members;
  WriteTextFile((root / "manifest.json").string(), manifest.dump(2) + "\n");
  SaveChain(cohort.chain, (root / "chain.json").string());
  WriteTextFile((root / "world.json").string(), WorldToJsonText(cohort.world));
  for (const auto& [key, set] : cohort.trials) {
    for (const Demonstration& demo : set.demos) {
      SaveDemonstration(demo, DemoPath(root, key, demo.meta.target_id).string());
    }
  }
}

Cohort LoadCohort(const std::string& directory) {
  namespace fs = std::filesystem;
  const fs::path root(directory);
  const json manifest = LoadJsonFile((root / "manifest.json").string());
  Cohort cohort;
  try {
    if (manifest.value("format", "") != "lfdq-cohort-v1") {
      throw Error(ErrorCode::kSchemaViolation, "manifest.json: unknown format");
    }
    cohort.spec = SpecFromJson(manifest.at("spec"));
    cohort.chain = LoadChain((root / manifest.value("chain", "chain.json")).string());
    cohort.world = LoadWorld((root / manifest.value("world", "world.json")).string());
    for (const json& m : manifest.at("members")) {
      CohortMember member;
      member.id = m.at("id").get<std::string>();
      member.group = m.value("group", "");
      if (m.contains("profile")) member.profile = ProfileFromJson(m.at("profile"), member.profile);
      cohort.members.push_back(member);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, std::string("manifest.json: ") + e.what());
  }
  for (const CohortMember& m : cohort.members) {
    for (int s = 1; s <= cohort.spec.sessions; ++s) {
      for (int tr = 1; tr <= cohort.spec.trials_per_face; ++tr) {
        for (FaceId face : {FaceId::kLow, FaceId::kHigh}) {
          TrialKey key{m.id, s, tr, face};
          DemoSet set;
          for (int k = 0; k < CohortSpec::kTargetsPerFace; ++k) {
            const fs::path path = DemoPath(root, key, k);
            // A session directory may be absent altogether; the assessment
            // reports that as a missing session.
            if (!fs::exists(path.parent_path())) break;
            set.demos.push_back(LoadDemonstration(cohort.chain, path.string()));
          }
          if (!set.demos.empty()) cohort.trials.emplace(key, std::move(set));
        }
      }
    }
  }
  return cohort;
}

}  // namespace lfdq
