// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

#include "homog/tensor.hpp"

#include <cmath>

#include "homog/error.hpp"

namespace homog {

PrincipalPair principal_decomposition(const StressV& s) {
  const double center = 0.5 * (s.sxx + s.syy);
  const double half_diff = 0.5 * (s.sxx - s.syy);
  const double radius = std::hypot(half_diff, s.sxy);

  PrincipalPair out;
  out.max = center + radius;
  out.min = center - radius;
  if (radius == 0.0) return out;

  const double angle = 0.5 * std::atan2(s.sxy, half_diff);
  const double c = std::cos(angle);
  const double sn = std::sin(angle);
  out.directions[0] = {c, sn};
  out.directions[1] = {-sn, c};
  return out;
}

namespace {

// Voigt image of n (x) n in the stress convention.
Vec3 dyad(const Eigen::Vector2d& n) { return {n.x() * n.x(), n.y() * n.y(), n.x() * n.y()}; }

}  // namespace

std::pair<StressV, StressV> spectral_split(const StressV& s) {
  const PrincipalPair pp = principal_decomposition(s);
  Vec3 plus = Vec3::Zero();
  if (pp.max > 0.0) plus += pp.max * dyad(pp.directions[0]);
  if (pp.min > 0.0) plus += pp.min * dyad(pp.directions[1]);
  const StressV pos = StressV::from(plus);
  return {pos, s - pos};
}

Mat3 positive_projector(const StressV& s) {
  const PrincipalPair pp = principal_decomposition(s);
  // sigma_i = p_i : sigma with the shear entry counted twice.
  const Vec3 contraction_weights(1.0, 1.0, 2.0);
  Mat3 p = Mat3::Zero();
  const double values[2] = {pp.max, pp.min};
  for (int i = 0; i < 2; ++i) {
    if (values[i] <= 0.0) continue;
    const Vec3 d = dyad(pp.directions[i]);
    p += d * d.cwiseProduct(contraction_weights).transpose();
  }
  return p;
}

Invariants invariants(const StressV& s) {
  Invariants inv;
  inv.i1 = s.sxx + s.syy;
  inv.j2 = (s.sxx * s.sxx + s.syy * s.syy - s.sxx * s.syy) / 3.0 + s.sxy * s.sxy;
  return inv;
}

bool is_spd(const Mat3& m) {
  if (!m.allFinite()) return false;
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return false;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) return false;
  Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  const Vec3 ev = es.eigenvalues();
  return ev.maxCoeff() > 0.0 && ev.minCoeff() > 1e-12 * ev.maxCoeff();
}

Mat3 spd_sqrt(const Mat3& m) {
  if (!is_spd(m)) fail(ErrorKind::NotSPD, "spd_sqrt: matrix is not symmetric positive definite");
  Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (m + m.transpose()));
  const Mat3& v = es.eigenvectors();
  const Mat3 r = v * es.eigenvalues().cwiseSqrt().asDiagonal() * v.transpose();
  return 0.5 * (r + r.transpose());
}

Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  const double cutoff = sv.size() > 0 ? 1e-10 * sv.maxCoeff() : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff) inv[i] = 1.0 / sv[i];
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace homog
