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


#include "lfdq/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include <Eigen/SVD>

#include "lfdq/assessment.hpp"
#include "lfdq/clik.hpp"
#include "lfdq/geometry.hpp"
#include "lfdq/kinematics.hpp"
#include "lfdq/tpgmm.hpp"

namespace lfdq {

namespace {

// Independent DH product built from elementary homogeneous matrices.
Eigen::Matrix4d DhProduct(const KinematicChain& chain, const JointVector& q) {
  Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
  for (int i = 0; i < kNumJoints; ++i) {
    const DhRow& r = chain.dh[i];
    const double th = q(i) + r.theta0;
    Eigen::Matrix4d rz = Eigen::Matrix4d::Identity(), tz = rz, tx = rz, rx = rz;
    rz.block<2, 2>(0, 0) << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    tz(2, 3) = r.d;
    tx(0, 3) = r.a;
    rx.block<2, 2>(1, 1) << std::cos(r.alpha), -std::sin(r.alpha), std::sin(r.alpha), std::cos(r.alpha);
    t = t * rz * tz * tx * rx;
  }
  Eigen::Matrix4d tool = Eigen::Matrix4d::Identity();
  tool(2, 3) = chain.tool_offset;
  return t * tool;
}

JointVector RandomConfig(const KinematicChain& chain, std::mt19937_64& rng) {
  JointVector q;
  for (int i = 0; i < kNumJoints; ++i) {
    std::uniform_real_distribution<double> u(chain.limits[i].lower, chain.limits[i].upper);
    q(i) = u(rng);
  }
  return q;
}

}  // namespace

int RunSelftest(const std::function<void(const std::string&)>& emit) {
  int failures = 0;
  auto report = [&](const char* name, bool ok, double value, double tol) {
    char line[160];
    std::snprintf(line, sizeof line, "%s %-28s max_err=%.3e tol=%.0e", ok ? "PASS" : "FAIL", name, value, tol);
    emit(line);
    failures += ok ? 0 : 1;
  };
  const KinematicChain chain = ReferenceChain();
  std::mt19937_64 rng(20260101);

  double fk_err = 0.0, jac_err = 0.0, null_err = 0.0, idem_err = 0.0, sr_err = 0.0;
  for (int n = 0; n < 25; ++n) {
    const JointVector q = RandomConfig(chain, rng);
    const Pose pose = ForwardKinematics(chain, q);
    const Eigen::Matrix4d oracle = DhProduct(chain, q);
    fk_err = std::max(fk_err, (pose.position - oracle.block<3, 1>(0, 3)).norm());
    fk_err = std::max(fk_err, (pose.orientation.toRotationMatrix() - oracle.block<3, 3>(0, 0)).norm());

    const Jacobian jac = ComputeJacobian(chain, q);
    const double h = 1e-6;
    for (int i = 0; i < kNumJoints; ++i) {
      JointVector qp = q, qm = q;
      qp(i) += h;
      qm(i) -= h;
      const Eigen::Matrix4d tp = DhProduct(chain, qp), tm = DhProduct(chain, qm);
      const Eigen::Vector3d dv = (tp.block<3, 1>(0, 3) - tm.block<3, 1>(0, 3)) / (2 * h);
      const Eigen::Matrix3d dr = (tp.block<3, 3>(0, 0) - tm.block<3, 3>(0, 0)) / (2 * h);
      const Eigen::Matrix3d w = dr * oracle.block<3, 3>(0, 0).transpose();
      const Eigen::Vector3d omega(w(2, 1), w(0, 2), w(1, 0));
      jac_err = std::max(jac_err, (jac.block<3, 1>(0, i) - dv).cwiseAbs().maxCoeff());
      jac_err = std::max(jac_err, (jac.block<3, 1>(3, i) - omega).cwiseAbs().maxCoeff());
    }

    const NullProjector p = ComputeNullProjector(jac);
    null_err = std::max(null_err, (jac * p).norm());
    idem_err = std::max(idem_err, (p * p - p).cwiseAbs().maxCoeff());

    const double lambda = 0.05;
    Eigen::JacobiSVD<Jacobian> svd(jac, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix<double, kNumJoints, 6> sr = Eigen::Matrix<double, kNumJoints, 6>::Zero();
    for (int i = 0; i < 6; ++i) {
      const double s = svd.singularValues()(i);
      sr += s / (s * s + lambda * lambda) * svd.matrixV().col(i) * svd.matrixU().col(i).transpose();
    }
    sr_err = std::max(sr_err, (ComputeSrInverse(jac, lambda) - sr).cwiseAbs().maxCoeff());
  }
  report("forward kinematics", fk_err <= 1e-10, fk_err, 1e-10);
  report("jacobian vs differences", jac_err <= 1e-5, jac_err, 1e-5);
  report("null space J(I-J+J)", null_err <= 1e-8, null_err, 1e-8);
  report("projector idempotence", idem_err <= 1e-10, idem_err, 1e-10);
  report("sr inverse vs svd", sr_err <= 1e-10, sr_err, 1e-10);

  // Product of two single-component frames in closed form.
  double prod_err = 0.0;
  for (int n = 0; n < 10; ++n) {
    TpgmmModel model;
    model.num_components = 1;
    model.num_frames = 2;
    model.priors = {1.0};
    model.means.assign(2, std::vector<StateVector>(1));
    model.covariances.assign(2, std::vector<StateMatrix>(1));
    std::normal_distribution<double> n01(0.0, 1.0);
    for (int j = 0; j < 2; ++j) {
      StateMatrix a;
      for (int r = 0; r < kStateDim; ++r)
        for (int c = 0; c < kStateDim; ++c) a(r, c) = n01(rng);
      model.covariances[j][0] = a * a.transpose() + StateMatrix::Identity();
      for (int r = 0; r < kStateDim; ++r) model.means[j][0](r) = n01(rng);
    }
    const GlobalGmm g = CombineFrames(model, {TaskFrame::Identity(), TaskFrame::Identity()});
    const StateMatrix l0 = model.covariances[0][0].inverse(), l1 = model.covariances[1][0].inverse();
    const StateMatrix sigma = (l0 + l1).inverse();
    const StateVector mu = sigma * (l0 * model.means[0][0] + l1 * model.means[1][0]);
    prod_err = std::max(prod_err, (g.means[0] - mu).cwiseAbs().maxCoeff());
    prod_err = std::max(prod_err, (g.covariances[0] - sigma).cwiseAbs().maxCoeff());
  }
  report("gaussian product", prod_err <= 1e-8, prod_err, 1e-8);

  // Point-box distance on points with a known answer.
  double box_err = 0.0;
  const Pose box{Eigen::Vector3d(0.3, -0.2, 0.1),
                 Eigen::Quaterniond(Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()))};
  const Eigen::Vector3d half(0.1, 0.2, 0.3);
  for (int n = 0; n < 50; ++n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Eigen::Vector3d local(u(rng) * 0.4, u(rng) * 0.5, u(rng) * 0.6);
    const Eigen::Vector3d outside = (local.cwiseAbs() - half).cwiseMax(0.0);
    const double expected = outside.norm();
    box_err = std::max(box_err, std::abs(PointBoxDistance(box.ToIsometry() * local, box, half) - expected));
  }
  report("point-box distance", box_err <= 1e-12, box_err, 1e-12);

  // Pearson against the textbook formula.
  const std::vector<double> x{0.2, 0.5, 0.9}, y{0.3, 0.4, 0.95};
  const double mx = (0.2 + 0.5 + 0.9) / 3, my = (0.3 + 0.4 + 0.95) / 3;
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < 3; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double rho_err = std::abs(Pearson(x, y) - sxy / std::sqrt(sxx * syy));
  report("pearson", rho_err <= 1e-12, rho_err, 1e-12);

  const bool labels = ClassifyQuality(0.80, 0.8) == QualityLabel::kLow &&
                      ClassifyQuality(0.90, 0.8) == QualityLabel::kHigh &&
                      ClassifyQuality(0.49, 0.8) == QualityLabel::kLow;
  report("quality threshold", labels, labels ? 0.0 : 1.0, 0.0);
  return failures;
}

}  // namespace lfdq
