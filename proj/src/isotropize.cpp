// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

#include "homog/isotropize.hpp"

#include <cmath>

#include "homog/error.hpp"

namespace homog {

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> extract_linear_pairs(const Campaign& c) {
  const Eigen::Index n = static_cast<Eigen::Index>(c.records.size());
  Eigen::MatrixXd strains(3, n);
  Eigen::MatrixXd stresses(3, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const HistoryRecord& r = c.records[i];
    if (r.steps.empty()) fail(ErrorKind::RankDeficient, "case " + std::to_string(r.case_id) + " has no steps");
    strains.col(i) = r.steps.front().strain.vec();
    stresses.col(i) = r.steps.front().stress.vec();
  }
  if (n < 3) fail(ErrorKind::RankDeficient, "at least 3 experiments are needed to fit the elasticity");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(strains);
  const auto& sv = svd.singularValues();
  if (!(sv[2] > 1e-10 * sv[0])) {
    fail(ErrorKind::RankDeficient, "first-step strains do not span the plane-stress space");
  }
  return {strains, stresses};
}

Mat3 raw_elasticity(const Eigen::MatrixXd& strains, const Eigen::MatrixXd& stresses) {
  if (strains.rows() != 3 || stresses.rows() != 3 || strains.cols() != stresses.cols()) {
    fail(ErrorKind::InvalidArgument, "strain and stress blocks must both be 3 x n");
  }
  // C^T solves strains^T C^T = stresses^T in the least-squares sense.
  const Eigen::MatrixXd ct = strains.transpose().colPivHouseholderQr().solve(stresses.transpose());
  return ct.transpose();
}

Mat3 orthotropize(const Mat3& c_raw) {
  Mat3 c = c_raw;
  c(0, 2) = c(1, 2) = c(2, 0) = c(2, 1) = 0.0;
  c = 0.5 * (c + c.transpose()).eval();
  if (!is_spd(c)) fail(ErrorKind::NotSPD, "orthotropic elasticity is not positive definite");
  return c;
}

Mat3 isotropic_matrix(double kappa, double mu) {
  Mat3 c;
  c << kappa + mu, kappa - mu, 0.0, kappa - mu, kappa + mu, 0.0, 0.0, 0.0, mu;
  return c;
}

double tensor_metric_distance2(const Mat3& a, const Mat3& b) {
  // Multiplicity of each Voigt entry among the 16 tensor components.
  static const double w[3][3] = {{1, 1, 2}, {1, 1, 2}, {2, 2, 4}};
  double d = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double x = a(i, j) - b(i, j);
      d += w[i][j] * x * x;
    }
  }
  return d;
}

IsotropicProjection closest_isotropic(const Mat3& c) {
  if (!is_spd(c)) fail(ErrorKind::NotSPD, "closest_isotropic needs a positive definite matrix");
  IsotropicProjection p;
  const Eigen::Vector3d m(1.0, 1.0, 0.0);
  const double alpha = 2.0;
  p.kappa = m.dot(c * m) / (alpha * alpha);
  p.mu = (c(0, 0) + c(1, 1) - c(0, 1) - c(1, 0) + 4.0 * c(2, 2)) / 8.0;
  p.c_iso = isotropic_matrix(p.kappa, p.mu);
  return p;
}

Mat3 transformation_matrix(const Mat3& c_ortho, const Mat3& c_iso) {
  const Mat3 root_iso = spd_sqrt(c_iso);
  const Mat3 root_ortho = spd_sqrt(c_ortho);
  return root_iso.inverse() * root_ortho;
}

HistoryRecord map_history(const HistoryRecord& h, const Mat3& t) {
  Eigen::FullPivLU<Mat3> lu(t);
  if (!lu.isInvertible()) fail(ErrorKind::Singular, "transformation matrix is singular");
  const Mat3 t_inv_t = lu.inverse().transpose();
  HistoryRecord out = h;
  for (auto& s : out.steps) {
    s.strain = StrainV::from(t * s.strain.vec());
    s.stress = StressV::from(t_inv_t * s.stress.vec());
  }
  return out;
}

IsotropicConstants identify_e_nu(const Mat3& c_iso) {
  if (!(c_iso(0, 0) > 0.0)) fail(ErrorKind::InvalidElastic, "isotropic matrix needs a positive C11");
  IsotropicConstants k;
  k.nu = c_iso(0, 1) / c_iso(0, 0);
  k.e = c_iso(0, 0) * (1.0 - k.nu * k.nu);
  return k;
}

ElasticityFit fit_from_orthotropic(const Mat3& c_ortho) {
  ElasticityFit f;
  f.c_raw = c_ortho;
  f.c_ortho = orthotropize(c_ortho);
  f.frobenius_gap = (f.c_raw - f.c_ortho).norm();
  const IsotropicProjection p = closest_isotropic(f.c_ortho);
  f.c_iso = p.c_iso;
  f.kappa = p.kappa;
  f.mu = p.mu;
  f.iso_gap = (f.c_ortho - f.c_iso).norm();
  f.t = transformation_matrix(f.c_ortho, f.c_iso);
  const IsotropicConstants k = identify_e_nu(f.c_iso);
  f.e_iso = k.e;
  f.nu_iso = k.nu;
  return f;
}

ElasticityFit fit_elasticity(const Campaign& c) {
  const auto [strains, stresses] = extract_linear_pairs(c);
  const Mat3 raw = raw_elasticity(strains, stresses);
  ElasticityFit f = fit_from_orthotropic(raw);
  f.c_raw = raw;
  f.frobenius_gap = (f.c_raw - f.c_ortho).norm();
  return f;
}

Json to_json(const ElasticityFit& f) {
  return Json{{"C_raw", to_json(f.c_raw)},
              {"C_ortho", to_json(f.c_ortho)},
              {"C_iso", to_json(f.c_iso)},
              {"T", to_json(f.t)},
              {"frobenius_gap", f.frobenius_gap},
              {"iso_gap", f.iso_gap},
              {"kappa", f.kappa},
              {"mu", f.mu},
              {"E", f.e_iso},
              {"nu", f.nu_iso}};
}

}  // namespace homog
