// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

/// Plane-stress tensor algebra in 3-component Voigt form.
///
/// Strains carry the engineering shear gamma_xy = 2 eps_xy, stresses carry the
/// tensor component sigma_xy, so the work product is a plain dot product:
///   sigma : eps = sxx*exx + syy*eyy + sxy*gxy.

#pragma once

#include <array>
#include <cmath>
#include <utility>

#include <Eigen/Dense>

namespace homog {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct StrainV {
  double exx = 0.0;
  double eyy = 0.0;
  double gxy = 0.0;

  Vec3 vec() const { return {exx, eyy, gxy}; }
  static StrainV from(const Vec3& v) { return {v[0], v[1], v[2]}; }
  double norm() const { return vec().norm(); }

  friend StrainV operator*(double s, const StrainV& e) { return {s * e.exx, s * e.eyy, s * e.gxy}; }
  friend StrainV operator+(const StrainV& a, const StrainV& b) { return {a.exx + b.exx, a.eyy + b.eyy, a.gxy + b.gxy}; }
  friend bool operator==(const StrainV&, const StrainV&) = default;
};

struct StressV {
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;

  Vec3 vec() const { return {sxx, syy, sxy}; }
  static StressV from(const Vec3& v) { return {v[0], v[1], v[2]}; }
  /// Norm of the symmetric 2x2 tensor (shear counted twice).
  double norm() const { return std::sqrt(sxx * sxx + syy * syy + 2.0 * sxy * sxy); }

  friend StressV operator+(const StressV& a, const StressV& b) { return {a.sxx + b.sxx, a.syy + b.syy, a.sxy + b.sxy}; }
  friend StressV operator-(const StressV& a, const StressV& b) { return {a.sxx - b.sxx, a.syy - b.syy, a.sxy - b.sxy}; }
  friend StressV operator*(double s, const StressV& v) { return {s * v.sxx, s * v.syy, s * v.sxy}; }
  friend bool operator==(const StressV&, const StressV&) = default;
};

/// Work density of a stress on a strain (engineering shear convention).
inline double work_product(const StressV& s, const StrainV& e) {
  return s.sxx * e.exx + s.syy * e.eyy + s.sxy * e.gxy;
}

struct PrincipalPair {
  double max = 0.0;
  double min = 0.0;
  /// directions[0] belongs to max, directions[1] to min.
  std::array<Eigen::Vector2d, 2> directions{Eigen::Vector2d::UnitX(), Eigen::Vector2d::UnitY()};
};

struct Invariants {
  double i1 = 0.0;
  double j2 = 0.0;
};

inline int heaviside(double x) { return x > 0.0 ? 1 : 0; }
inline double macaulay(double x) { return x > 0.0 ? x : 0.0; }

/// Eigenpairs of [[sxx, sxy], [sxy, syy]]. Tied eigenvalues return the
/// canonical axes.
PrincipalPair principal_decomposition(const StressV& s);

/// Positive/negative parts of a stress built from its principal values.
/// The negative part is the remainder, so the two always sum to the input.
std::pair<StressV, StressV> spectral_split(const StressV& s);

/// Voigt matrix P+ with spectral_split(s).first == P+ * s for fixed
/// principal directions.
Mat3 positive_projector(const StressV& s);

/// I1 and J2 of the plane-stress state embedded in 3D (sigma_zz = 0).
Invariants invariants(const StressV& s);

/// Symmetric square root of a symmetric positive definite matrix. Throws
/// ErrorKind::NotSPD otherwise.
Mat3 spd_sqrt(const Mat3& m);

/// True when m is symmetric (relative 1e-10) with min eigenvalue above
/// 1e-12 of the max eigenvalue.
bool is_spd(const Mat3& m);

/// Moore-Penrose inverse, singular values below 1e-10 * sigma_max dropped.
Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& a);

}  // namespace homog
