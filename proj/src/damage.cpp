// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

#include "homog/damage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "homog/error.hpp"

namespace homog {

namespace {

constexpr double kMaxDamage = 1.0 - 1e-12;

void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) fail(kind, what);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void MaterialParams::validate() const {
  require(finite_positive(E), ErrorKind::InvalidElastic, "E must be positive");
  require(std::isfinite(nu) && nu >= 0.0 && nu < 0.5, ErrorKind::InvalidElastic, "nu must lie in [0, 0.5)");
  require(finite_positive(ft), ErrorKind::InvalidArgument, "ft must be positive");
  require(finite_positive(Gt), ErrorKind::InvalidArgument, "Gt must be positive");
  require(finite_positive(f0c), ErrorKind::InvalidArgument, "f0c must be positive");
  require(std::isfinite(fpc) && fpc >= f0c, ErrorKind::InvalidArgument, "fpc must be >= f0c");
  require(finite_positive(frc) && frc <= fpc, ErrorKind::InvalidArgument, "frc must lie in (0, fpc]");
  require(std::isfinite(epc) && epc > f0c / E, ErrorKind::InvalidArgument, "epc must exceed f0c / E");
  require(finite_positive(Gc), ErrorKind::InvalidArgument, "Gc must be positive");
  require(std::isfinite(kb) && kb > 1.0, ErrorKind::InvalidArgument, "kb must exceed 1");
  require(std::isfinite(kappa) && kappa >= 0.0, ErrorKind::InvalidArgument, "kappa must be non-negative");
  require(finite_positive(c1) && c1 <= 1.0, ErrorKind::InvalidArgument, "c1 must lie in (0, 1]");
  require(finite_positive(c2) && c2 < 1.0, ErrorKind::InvalidArgument, "c2 must lie in (0, 1)");
  require(finite_positive(c3), ErrorKind::InvalidArgument, "c3 must be positive");
}

double bezier_eval(const BezierCurve& c, double X) {
  const double a = c.x1 - 2.0 * c.x2 + c.x3;
  const double b = 2.0 * (c.x2 - c.x1);
  const double cc = c.x1 - X;
  const double tol = 1e-12 * std::max({std::abs(c.x1), std::abs(c.x3), 1e-300});
  if (!(X >= c.x1 - tol && X <= c.x3 + tol)) {
    fail(ErrorKind::OutOfSegment, "bezier_eval: abscissa outside [x1, x3]");
  }
  double p = 0.0;
  if (a == 0.0 && b == 0.0) return c.y1;
  if (a == 0.0) {
    p = -cc / b;
  } else {
    const double disc = std::max(b * b - 4.0 * a * cc, 0.0);
    const double den = b + std::sqrt(disc);
    p = den != 0.0 ? -2.0 * cc / den : 0.0;
  }
  return (c.y1 - 2.0 * c.y2 + c.y3) * p * p + 2.0 * p * (c.y2 - c.y1) + c.y1;
}

double bezier_area(const BezierCurve& c) {
  const double a = c.x2 - c.x1;
  const double b = c.x3 - c.x2;
  return a * (c.y1 / 2.0 + c.y2 / 3.0 + c.y3 / 6.0) + b * (c.y1 / 6.0 + c.y2 / 3.0 + c.y3 / 2.0);
}

double CompressionLaw::stress(double xi) const {
  if (xi <= e0) return E * xi;
  if (xi <= ep) return bezier_eval(hardening(), xi);
  if (xi <= ek) return bezier_eval(softening(), xi);
  if (xi <= eu) return bezier_eval(residual(), xi);
  return fu;
}

double CompressionLaw::dissipated_area() const {
  return 0.5 * f0 * e0 + bezier_area(hardening()) + bezier_area(softening()) + bezier_area(residual());
}

namespace {

CompressionLaw unstretched_law(const MaterialParams& p) {
  CompressionLaw law;
  law.E = p.E;
  law.f0 = p.f0c;
  law.fp = p.fpc;
  law.fr = p.frc;
  law.e0 = p.f0c / p.E;
  law.ep = p.epc;
  law.ei = law.e0 + p.c1 * (law.ep - law.e0);
  law.fi = p.fpc;

  const double span = law.ep - law.e0;
  law.ej = law.ep + 0.5 * span;
  law.fj = p.fpc;
  law.ek = law.ep + span;
  law.fk = p.frc + p.c2 * (p.fpc - p.frc);
  if (p.fpc > law.fk) {
    law.er = law.ej + (law.ek - law.ej) * (p.fpc - p.frc) / (p.fpc - law.fk);
  } else {
    law.er = law.ek + (law.ek - law.ej);
  }
  law.eu = law.er + p.c3 * (law.er - law.ek);
  law.fu = p.frc;
  return law;
}

}  // namespace

CompressionEnergy compression_energy(const MaterialParams& p) {
  const CompressionLaw law = unstretched_law(p);
  CompressionEnergy out;
  out.pre_peak = 0.5 * law.f0 * law.e0 + bezier_area(law.hardening());
  out.unstretched_total = law.dissipated_area();
  return out;
}

CompressionLaw build_compression_law(const MaterialParams& p, double l_ch) {
  p.validate();
  require(finite_positive(l_ch), ErrorKind::InvalidArgument, "characteristic length must be positive");
  CompressionLaw law = unstretched_law(p);
  law.l_ch = l_ch;
  const double pre = 0.5 * law.f0 * law.e0 + bezier_area(law.hardening());
  const double post = law.dissipated_area() - pre;
  const double stretch = (p.Gc / l_ch - pre) / post;
  if (!(stretch > 0.0) || !std::isfinite(stretch)) {
    fail(ErrorKind::SnapBack, "compressive fracture energy Gc/l = " + std::to_string(p.Gc / l_ch) +
                                  " does not exceed the pre-peak energy " + std::to_string(pre));
  }
  auto scale = [&](double& e) { e = law.ep + stretch * (e - law.ep); };
  scale(law.ej);
  scale(law.ek);
  scale(law.er);
  scale(law.eu);
  return law;
}

Mat3 plane_stress_elasticity(double E, double nu) {
  require(finite_positive(E) && std::isfinite(nu) && nu >= 0.0 && nu < 0.5, ErrorKind::InvalidElastic,
          "plane stress elasticity needs E > 0 and 0 <= nu < 0.5");
  const double f = E / (1.0 - nu * nu);
  Mat3 c;
  c << f, f * nu, 0.0, f * nu, f, 0.0, 0.0, 0.0, f * 0.5 * (1.0 - nu);
  return c;
}

YieldShape alpha_beta(const MaterialParams& p) {
  YieldShape y;
  y.alpha = (p.kb - 1.0) / (2.0 * p.kb - 1.0);
  y.beta = (1.0 - y.alpha) * p.fpc / p.ft - (1.0 + y.alpha);
  return y;
}

namespace {

struct EquivalentInputs {
  double smax;
  double smin;
  double i1;
  double j2;
};

EquivalentInputs equivalent_inputs(const PrincipalPair& pp) {
  // Principal-frame invariants of the plane-stress state with sigma_zz = 0.
  return {pp.max, pp.min, pp.max + pp.min, (pp.max * pp.max + pp.min * pp.min - pp.max * pp.min) / 3.0};
}

double tau_plus_impl(const EquivalentInputs& in, const YieldShape& y, const MaterialParams& p) {
  if (heaviside(in.smax) == 0) return 0.0;
  const double core = y.alpha * in.i1 + std::sqrt(3.0 * std::max(in.j2, 0.0)) + y.beta * in.smax;
  return core / (1.0 - y.alpha) * (p.ft / p.fpc);
}

double tau_minus_impl(const EquivalentInputs& in, const YieldShape& y, const MaterialParams& p) {
  if (heaviside(-in.smin) == 0) return 0.0;
  const double core = y.alpha * in.i1 + std::sqrt(3.0 * std::max(in.j2, 0.0)) + p.kappa * y.beta * macaulay(in.smax);
  return core / (1.0 - y.alpha);
}

}  // namespace

double tau_plus(const StressV& s_eff, const MaterialParams& p) {
  return tau_plus_impl(equivalent_inputs(principal_decomposition(s_eff)), alpha_beta(p), p);
}

double tau_minus(const StressV& s_eff, const MaterialParams& p) {
  return tau_minus_impl(equivalent_inputs(principal_decomposition(s_eff)), alpha_beta(p), p);
}

double d_minus(double r_c, const CompressionLaw& law, double E) {
  if (r_c <= law.f0) return 0.0;
  const double d = 1.0 - law.stress(r_c / E) / r_c;
  return std::clamp(d, 0.0, kMaxDamage);
}

double tension_softening_parameter(const MaterialParams& p, double l_dis) {
  require(finite_positive(l_dis), ErrorKind::InvalidArgument, "characteristic length must be positive");
  const double den = p.Gt * p.E / (l_dis * p.ft * p.ft) - 0.5;
  if (!(den > 0.0)) {
    fail(ErrorKind::SnapBack, "tensile softening snaps back: l = " + std::to_string(l_dis) +
                                  " exceeds 2 E Gt / ft^2 = " + std::to_string(2.0 * p.E * p.Gt / (p.ft * p.ft)));
  }
  return 1.0 / den;
}

namespace {

double d_plus_with(double r_t, double r0, double a) {
  if (r_t <= r0) return 0.0;
  const double d = 1.0 - (r0 / r_t) * std::exp(a * (1.0 - r_t / r0));
  return std::clamp(d, 0.0, kMaxDamage);
}

}  // namespace

double d_plus(double r_t, const MaterialParams& p, double l_dis) {
  return d_plus_with(r_t, p.ft, tension_softening_parameter(p, l_dis));
}

DamageModel::DamageModel(const MaterialParams& p, double l_dis)
    : params_(p),
      l_dis_(l_dis),
      elastic_(plane_stress_elasticity(p.E, p.nu)),
      shape_(alpha_beta(p)),
      compression_(build_compression_law(p, l_dis)),
      softening_a_(tension_softening_parameter(p, l_dis)) {}

double DamageModel::damage_tension(double r_t) const { return d_plus_with(r_t, params_.ft, softening_a_); }

double DamageModel::damage_compression(double r_c) const { return d_minus(r_c, compression_, params_.E); }

StressUpdate DamageModel::integrate(const StrainV& eps, const DamageState& state) const {
  const StressV eff = StressV::from(elastic_ * eps.vec());
  const PrincipalPair pp = principal_decomposition(eff);

  Vec3 plus = Vec3::Zero();
  if (pp.max > 0.0) plus += pp.max * Vec3(pp.directions[0].x() * pp.directions[0].x(),
                                          pp.directions[0].y() * pp.directions[0].y(),
                                          pp.directions[0].x() * pp.directions[0].y());
  if (pp.min > 0.0) plus += pp.min * Vec3(pp.directions[1].x() * pp.directions[1].x(),
                                          pp.directions[1].y() * pp.directions[1].y(),
                                          pp.directions[1].x() * pp.directions[1].y());
  const StressV pos = StressV::from(plus);
  const StressV neg = eff - pos;

  const EquivalentInputs in = equivalent_inputs(pp);
  StressUpdate out;
  out.state.r_t = update_threshold(tau_plus_impl(in, shape_, params_), state.r_t);
  out.state.r_c = update_threshold(tau_minus_impl(in, shape_, params_), state.r_c);
  out.state.d_t = std::max(state.d_t, damage_tension(out.state.r_t));
  out.state.d_c = std::max(state.d_c, damage_compression(out.state.r_c));
  out.stress = (1.0 - out.state.d_t) * pos + (1.0 - out.state.d_c) * neg;
  return out;
}

Mat3 DamageModel::tangent(const StrainV& eps, const DamageState& state, double h) const {
  if (!(h > 0.0)) h = 1e-8 * std::max(eps.norm(), 1e-6);
  const Vec3 base = integrate(eps, state).stress.vec();
  Mat3 t;
  for (int j = 0; j < 3; ++j) {
    Vec3 e = eps.vec();
    e[j] += h;
    t.col(j) = (integrate(StrainV::from(e), state).stress.vec() - base) / h;
  }
  return t;
}

StressV DamageModel::frozen_stress(const StrainV& eps, const DamageState& state) const {
  const StressV eff = StressV::from(elastic_ * eps.vec());
  const Mat3 pplus = positive_projector(eff);
  const Vec3 pos = pplus * eff.vec();
  return StressV::from((1.0 - state.d_t) * pos + (1.0 - state.d_c) * (eff.vec() - pos));
}

Mat3 DamageModel::secant(const StrainV& eps, const DamageState& updated) const {
  const StressV eff = StressV::from(elastic_ * eps.vec());
  const Mat3 pplus = positive_projector(eff);
  const Mat3 d = (1.0 - updated.d_t) * pplus + (1.0 - updated.d_c) * (Mat3::Identity() - pplus);
  return d * elastic_;
}

StressUpdate integrate_stress(const StrainV& eps, const DamageState& state, const MaterialParams& p, double l_dis) {
  return DamageModel(p, l_dis).integrate(eps, state);
}

Mat3 tangent_fd(const StrainV& eps, const DamageState& state, const MaterialParams& p, double l_dis, double h) {
  return DamageModel(p, l_dis).tangent(eps, state, h);
}

}  // namespace homog
