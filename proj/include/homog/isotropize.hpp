// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

/// Data isotropization: fit the linear elasticity of the campaign, reduce it
/// to orthotropic form, find the closest isotropic matrix and the linear map
/// T that carries orthotropic pairs into the fictitious isotropic space.
///
/// Isotropic plane-stress matrices are written as
///   [[k + m, k - m, 0], [k - m, k + m, 0], [0, 0, m]]
/// with bulk-like k and shear m.

#pragma once

#include <string>
#include <utility>

#include <Eigen/Dense>

#include "homog/json_io.hpp"
#include "homog/tensor.hpp"
#include "homog/vlab.hpp"

namespace homog {

struct ElasticityFit {
  Mat3 c_raw = Mat3::Zero();
  Mat3 c_ortho = Mat3::Zero();
  Mat3 c_iso = Mat3::Zero();
  Mat3 t = Mat3::Identity();
  double frobenius_gap = 0.0;  ///< |C_raw - C_ortho|_F
  double iso_gap = 0.0;        ///< |C_ortho - C_iso|_F
  double kappa = 0.0;
  double mu = 0.0;
  double e_iso = 0.0;
  double nu_iso = 0.0;
};

/// First-step strain and stress of every record as 3 x n blocks. Throws
/// RankDeficient when the strains do not span the plane-stress space.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> extract_linear_pairs(const Campaign& c);

/// Least-squares C with stresses ~= C * strains.
Mat3 raw_elasticity(const Eigen::MatrixXd& strains, const Eigen::MatrixXd& stresses);

/// Drops the shear-normal couplings and symmetrizes. Throws NotSPD.
Mat3 orthotropize(const Mat3& c_raw);

struct IsotropicProjection {
  Mat3 c_iso;
  double kappa = 0.0;
  double mu = 0.0;
};

/// Closest isotropic matrix in the fourth-order tensor metric, where the
/// shear entry weighs 4 and the normal off-diagonals 2. Throws NotSPD.
IsotropicProjection closest_isotropic(const Mat3& c);

/// Squared tensor-metric distance used by closest_isotropic.
double tensor_metric_distance2(const Mat3& a, const Mat3& b);

Mat3 isotropic_matrix(double kappa, double mu);

/// T = sqrt(C_iso)^-1 sqrt(C_ortho), so that T^T C_iso T = C_ortho.
Mat3 transformation_matrix(const Mat3& c_ortho, const Mat3& c_iso);

/// eps_iso = T eps, sigma_iso = T^-T sigma for every step. Throws Singular.
HistoryRecord map_history(const HistoryRecord& h, const Mat3& t);

struct IsotropicConstants {
  double e = 0.0;
  double nu = 0.0;
};

IsotropicConstants identify_e_nu(const Mat3& c_iso);

/// Runs the chain from an orthotropic matrix onwards.
ElasticityFit fit_from_orthotropic(const Mat3& c_ortho);

/// Full chain from a campaign.
ElasticityFit fit_elasticity(const Campaign& c);

Json to_json(const ElasticityFit& f);

}  // namespace homog
