// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

/// Isotropic d+/d- continuum damage law for plane stress.
///
/// The effective stress C:eps is split into positive and negative spectral
/// parts, each degraded by its own scalar damage:
///   sigma = (1 - d+) sigma_eff+ + (1 - d-) sigma_eff-
/// Damage onset is detected by Lubliner-type equivalent stresses, tension
/// softens exponentially and compression follows a three-segment quadratic
/// Bezier hardening/softening curve. Both are regularised with a
/// characteristic length so that a fully softened point dissipates G/l.

#pragma once

#include "homog/tensor.hpp"

namespace homog {

struct MaterialParams {
  double E = 0.0;      ///< Young's modulus [Pa]
  double nu = 0.0;     ///< Poisson ratio
  double ft = 0.0;     ///< tensile strength, onset == peak [Pa]
  double Gt = 0.0;     ///< tensile fracture energy [N/m]
  double f0c = 0.0;    ///< compressive elastic limit [Pa]
  double fpc = 0.0;    ///< compressive peak [Pa]
  double frc = 0.0;    ///< compressive residual [Pa]
  double epc = 0.0;    ///< strain at compressive peak
  double Gc = 0.0;     ///< compressive fracture energy [N/m]
  double kb = 1.2;     ///< biaxial / uniaxial compressive strength ratio
  double kappa = 0.0;  ///< shear-compression reductor
  double c1 = 0.65;    ///< hardening shape
  double c2 = 0.5;     ///< softening stress level
  double c3 = 1.5;     ///< residual approach spread

  /// Throws ErrorKind::InvalidArgument (or InvalidElastic) naming the first
  /// violated bound.
  void validate() const;

  friend bool operator==(const MaterialParams&, const MaterialParams&) = default;
};

struct DamageState {
  double r_t = 0.0;
  double r_c = 0.0;
  double d_t = 0.0;
  double d_c = 0.0;

  static DamageState virgin(const MaterialParams& p) { return {p.ft, p.f0c, 0.0, 0.0}; }
  friend bool operator==(const DamageState&, const DamageState&) = default;
};

struct BezierCurve {
  double x1 = 0.0, x2 = 0.0, x3 = 0.0;
  double y1 = 0.0, y2 = 0.0, y3 = 0.0;
};

/// Ordinate of the quadratic Bezier curve at abscissa X in [x1, x3].
double bezier_eval(const BezierCurve& c, double X);

/// Exact area under the curve between x1 and x3.
double bezier_area(const BezierCurve& c);

/// Control points of the regularised uniaxial compression curve. Strains are
/// the abscissae of the three Bezier segments, followed by a residual plateau
/// at fu.
struct CompressionLaw {
  double e0 = 0, ei = 0, ep = 0, ej = 0, ek = 0, er = 0, eu = 0;
  double f0 = 0, fi = 0, fp = 0, fj = 0, fk = 0, fr = 0, fu = 0;
  double l_ch = 0;
  double E = 0;

  BezierCurve hardening() const { return {e0, ei, ep, f0, fi, fp}; }
  BezierCurve softening() const { return {ep, ej, ek, fp, fj, fk}; }
  BezierCurve residual() const { return {ek, er, eu, fk, fr, fu}; }

  /// Uniaxial stress at strain-like threshold xi.
  double stress(double xi) const;
  /// Area under the curve from zero strain to eu.
  double dissipated_area() const;
};

/// Energy below the peak and the unregularised total, used by the
/// compressive snap-back check.
struct CompressionEnergy {
  double pre_peak = 0.0;
  double unstretched_total = 0.0;
};

CompressionEnergy compression_energy(const MaterialParams& p);

/// Builds the compression curve and stretches its post-peak abscissae so the
/// full area equals Gc / l_ch. Throws SnapBack when that is impossible.
CompressionLaw build_compression_law(const MaterialParams& p, double l_ch);

/// Isotropic plane-stress elasticity, engineering shear.
Mat3 plane_stress_elasticity(double E, double nu);

struct YieldShape {
  double alpha = 0.0;
  double beta = 0.0;
};

YieldShape alpha_beta(const MaterialParams& p);

double tau_plus(const StressV& s_eff, const MaterialParams& p);
double tau_minus(const StressV& s_eff, const MaterialParams& p);

inline double update_threshold(double tau, double r_prev) { return tau > r_prev ? tau : r_prev; }

double d_minus(double r_c, const CompressionLaw& law, double E);

/// Exponential softening parameter A. Throws SnapBack if l_dis is too large
/// for the tensile fracture energy.
double tension_softening_parameter(const MaterialParams& p, double l_dis);

double d_plus(double r_t, const MaterialParams& p, double l_dis);

struct StressUpdate {
  StressV stress;
  DamageState state;
};

/// Precomputed constitutive kernel for one material at one regularisation
/// length. Immutable after construction and safe to share across threads.
class DamageModel {
 public:
  DamageModel(const MaterialParams& p, double l_dis);

  StressUpdate integrate(const StrainV& eps, const DamageState& state) const;

  /// Forward-difference tangent at the frozen input state. h <= 0 selects
  /// 1e-8 * max(|eps|, 1e-6).
  Mat3 tangent(const StrainV& eps, const DamageState& state, double h = 0.0) const;
  /// Stress with the damage of `state` held fixed.
  StressV frozen_stress(const StrainV& eps, const DamageState& state) const;

  /// Secant matrix mapping eps to sigma with the damage of the updated state.
  Mat3 secant(const StrainV& eps, const DamageState& updated) const;

  const MaterialParams& params() const { return params_; }
  const Mat3& elasticity() const { return elastic_; }
  const CompressionLaw& compression() const { return compression_; }
  double softening_a() const { return softening_a_; }
  double l_dis() const { return l_dis_; }

  double damage_tension(double r_t) const;
  double damage_compression(double r_c) const;

 private:
  MaterialParams params_;
  double l_dis_;
  Mat3 elastic_;
  YieldShape shape_;
  CompressionLaw compression_;
  double softening_a_;
};

StressUpdate integrate_stress(const StrainV& eps, const DamageState& state, const MaterialParams& p, double l_dis);

Mat3 tangent_fd(const StrainV& eps, const DamageState& state, const MaterialParams& p, double l_dis, double h = 0.0);

}  // namespace homog
