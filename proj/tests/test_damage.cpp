// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "homog/damage.hpp"
#include "homog/error.hpp"

namespace homog {
namespace {

MaterialParams mortar() {
  MaterialParams p;
  p.E = 1.8e9;
  p.nu = 0.2;
  p.ft = 0.12e6;
  p.Gt = 16.0;
  p.f0c = 3e6;
  p.fpc = 10e6;
  p.frc = 2e6;
  p.epc = 0.04;
  p.Gc = 80000.0;
  p.kb = 1.2;
  p.kappa = 0.16;
  return p;
}

// Quadratic Bezier inverted with the textbook root (-B + sqrt(D)) / 2A.
double bezier_textbook(double x1, double x2, double x3, double y1, double y2, double y3, double X) {
  const double a = x1 - 2 * x2 + x3;
  const double b = 2 * (x2 - x1);
  const double c = x1 - X;
  const double p = std::abs(a) < 1e-300 ? -c / b : (-b + std::sqrt(b * b - 4 * a * c)) / (2 * a);
  return (1 - p) * (1 - p) * y1 + 2 * p * (1 - p) * y2 + p * p * y3;
}

TEST(Elasticity, Examples) {
  const Mat3 c0 = plane_stress_elasticity(10.0, 0.0);
  EXPECT_DOUBLE_EQ(c0(0, 0), 10.0);
  EXPECT_DOUBLE_EQ(c0(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(c0(2, 2), 5.0);

  Mat3 expect;
  expect << 16.0 / 15, 4.0 / 15, 0, 4.0 / 15, 16.0 / 15, 0, 0, 0, 0.4;
  EXPECT_LE((plane_stress_elasticity(1.0, 0.25) - expect).norm(), 1e-15);

  const Mat3 c = plane_stress_elasticity(4.4670e9, 0.21639);
  EXPECT_NEAR(c(0, 0) / 4.686e9, 1.0, 2e-3);
  EXPECT_NEAR(c(0, 1) / 1.014e9, 1.0, 2e-3);
  EXPECT_NEAR(c(2, 2) / 1.836e9, 1.0, 2e-3);

  EXPECT_THROW(plane_stress_elasticity(-1.0, 0.2), Error);
  EXPECT_THROW(plane_stress_elasticity(1.0, 0.5), Error);
}

TEST(YieldShape, AlphaBeta) {
  MaterialParams p = mortar();
  EXPECT_NEAR(alpha_beta(p).alpha, 0.2 / 1.4, 1e-15);

  p.kb = 1.15;
  p.fpc = 1.0e7;
  p.ft = 2.6e5;
  const YieldShape y = alpha_beta(p);
  EXPECT_NEAR(y.alpha, 0.11538461538, 1e-10);
  const double beta_oracle = (1 - 0.15 / 1.3) * (1.0e7 / 2.6e5) - (1 + 0.15 / 1.3);
  EXPECT_NEAR(y.beta, beta_oracle, 1e-12);
  EXPECT_NEAR(y.beta, 32.906, 5e-3);

  p.kb = 1.0 + 1e-12;
  EXPECT_NEAR(alpha_beta(p).alpha, 0.0, 1e-11);
  EXPECT_NEAR(alpha_beta(p).beta, p.fpc / p.ft - 1.0, 1e-9);
}

TEST(EquivalentStress, UniaxialIdentities) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    MaterialParams p = mortar();
    p.kb = 1.05 + 0.6 * u(rng);
    p.ft = 1e5 + 1e6 * u(rng);
    p.fpc = p.ft * (3 + 40 * u(rng));
    p.kappa = 0.3 * u(rng);
    const double s = 1e4 + 1e7 * u(rng);
    EXPECT_NEAR(tau_plus({s, 0, 0}, p) / s, 1.0, 1e-12);
    EXPECT_NEAR(tau_minus({-s, 0, 0}, p) / s, 1.0, 1e-12);
  }
}

TEST(EquivalentStress, Gates) {
  const MaterialParams p = mortar();
  EXPECT_EQ(tau_plus({-2e6, -1e6, 1e5}, p), 0.0);
  EXPECT_EQ(tau_minus({2e6, 1e6, 1e5}, p), 0.0);
  EXPECT_EQ(tau_plus({0, 0, 0}, p), 0.0);
  EXPECT_EQ(tau_minus({0, 0, 0}, p), 0.0);
}

TEST(EquivalentStress, PureShearScalarOracle) {
  MaterialParams p = mortar();
  p.kappa = 0.0;
  const double t = 1.3e6;
  // Principal stresses (t, -t), I1 = 0, J2 = t^2 in the sigma_zz = 0 deviator.
  const double alpha = (p.kb - 1) / (2 * p.kb - 1);
  const double beta = (1 - alpha) * p.fpc / p.ft - (1 + alpha);
  const double smax = t;
  const double smin = -t;
  const double i1 = smax + smin;
  const double sm = i1 / 3.0;
  const double j2 = 0.5 * ((smax - sm) * (smax - sm) + (smin - sm) * (smin - sm) + sm * sm);
  const double tm = (alpha * i1 + std::sqrt(3 * j2)) / (1 - alpha);
  const double tp = (alpha * i1 + std::sqrt(3 * j2) + beta * smax) / (1 - alpha) * p.ft / p.fpc;
  EXPECT_NEAR(tau_minus({0, 0, t}, p), tm, 1e-9 * tm);
  EXPECT_NEAR(tau_plus({0, 0, t}, p), tp, 1e-9 * tp);

  p.kappa = 0.16;
  const double tmk = (alpha * i1 + std::sqrt(3 * j2) + p.kappa * beta * smax) / (1 - alpha);
  EXPECT_NEAR(tau_minus({0, 0, t}, p), tmk, 1e-9 * tmk);
}

TEST(Threshold, Update) {
  EXPECT_EQ(update_threshold(5, 7), 7);
  EXPECT_EQ(update_threshold(9, 7), 9);
  EXPECT_EQ(update_threshold(3, 3), 3);
}

TEST(Bezier, Endpoints) {
  const BezierCurve c{1.0, 2.5, 3.0, 10.0, 20.0, 5.0};
  EXPECT_DOUBLE_EQ(bezier_eval(c, 1.0), 10.0);
  EXPECT_NEAR(bezier_eval(c, 3.0), 5.0, 1e-12);
  EXPECT_THROW(bezier_eval(c, 3.5), Error);
  EXPECT_THROW(bezier_eval(c, 0.5), Error);
}

TEST(Bezier, DegenerateLinearParameter) {
  const BezierCurve c{0.0, 1.0, 2.0, 0.0, 8.0, 2.0};
  // Oracle: sample the parametric curve finely and invert x(p) by bisection.
  for (double X : {0.1, 0.7, 1.0, 1.3, 1.95}) {
    double lo = 0, hi = 1;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double x = 2 * mid * (1 - mid) * c.x2 + mid * mid * c.x3;
      (x < X ? lo : hi) = mid;
    }
    const double p = 0.5 * (lo + hi);
    const double y = (1 - p) * (1 - p) * c.y1 + 2 * p * (1 - p) * c.y2 + p * p * c.y3;
    EXPECT_NEAR(bezier_eval(c, X), y, 1e-12);
  }
  EXPECT_EQ(bezier_eval({1, 1, 1, 4, 5, 6}, 1.0), 4.0);
}

TEST(Bezier, MatchesTextbookRootAndArea) {
  const BezierCurve c{0.001, 0.004, 0.006, 3e6, 10e6, 10e6};
  for (int k = 0; k <= 20; ++k) {
    const double X = c.x1 + (c.x3 - c.x1) * k / 20.0;
    EXPECT_NEAR(bezier_eval(c, X), bezier_textbook(c.x1, c.x2, c.x3, c.y1, c.y2, c.y3, X), 1e-6);
  }
  const int n = 20000;
  double area = 0.0;
  for (int k = 0; k < n; ++k) {
    const double a = c.x1 + (c.x3 - c.x1) * k / n;
    const double b = c.x1 + (c.x3 - c.x1) * (k + 1) / n;
    area += 0.5 * (bezier_eval(c, a) + bezier_eval(c, b)) * (b - a);
  }
  EXPECT_NEAR(bezier_area(c) / area, 1.0, 1e-7);
}

double trapezoid_area(const CompressionLaw& law, double from, double to, int n) {
  double area = 0.0;
  for (int k = 0; k < n; ++k) {
    const double a = from + (to - from) * k / n;
    const double b = from + (to - from) * (k + 1) / n;
    area += 0.5 * (law.stress(a) + law.stress(b)) * (b - a);
  }
  return area;
}

TEST(CompressionLaw, AreaMatchesFractureEnergy) {
  const MaterialParams p = mortar();
  for (double l : {0.01, 0.05, 0.2}) {
    const CompressionLaw law = build_compression_law(p, l);
    const double area = trapezoid_area(law, 0.0, law.e0, 100) + trapezoid_area(law, law.e0, law.ep, 10000) +
                        trapezoid_area(law, law.ep, law.ek, 10000) + trapezoid_area(law, law.ek, law.eu, 10000);
    EXPECT_NEAR(area / (p.Gc / l), 1.0, 0.02) << "l = " << l;
    EXPECT_NEAR(law.dissipated_area() / (p.Gc / l), 1.0, 1e-12);
  }
}

TEST(CompressionLaw, ShapeAndMonotoneControlPoints) {
  const MaterialParams p = mortar();
  const CompressionLaw law = build_compression_law(p, 0.05);
  EXPECT_DOUBLE_EQ(law.stress(law.ep), p.fpc);
  EXPECT_NEAR(law.stress(law.e0), p.f0c, 1e-6);
  EXPECT_DOUBLE_EQ(law.stress(10 * law.eu), p.frc);
  const double xs[] = {law.e0, law.ei, law.ep, law.ej, law.ek, law.er, law.eu};
  for (int i = 0; i + 1 < 7; ++i) EXPECT_LE(xs[i], xs[i + 1]);
  EXPECT_GT(law.fk, 0.0);
}

TEST(CompressionLaw, AreaScalesWithLength) {
  const MaterialParams p = mortar();
  const double a1 = build_compression_law(p, 0.02).dissipated_area();
  const double a2 = build_compression_law(p, 0.04).dissipated_area();
  EXPECT_NEAR(a2 / a1, 0.5, 1e-12);
}

TEST(CompressionLaw, SnapBack) {
  MaterialParams p = mortar();
  p.Gc = 1.0;
  try {
    build_compression_law(p, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SnapBack);
  }
}

TEST(DamageCompression, OnsetLimitAndOracle) {
  const MaterialParams p = mortar();
  const CompressionLaw law = build_compression_law(p, 0.05);
  EXPECT_EQ(d_minus(p.f0c, law, p.E), 0.0);
  EXPECT_NEAR(d_minus(1e12, law, p.E), 1.0 - p.frc / 1e12, 1e-15);

  // Mid-softening: evaluate the second segment directly from its control points.
  const double xi = 0.5 * (law.ep + law.ek);
  const double psi = bezier_textbook(law.ep, law.ej, law.ek, law.fp, law.fj, law.fk, xi);
  const double r = xi * p.E;
  EXPECT_NEAR(d_minus(r, law, p.E), 1.0 - psi / r, 1e-9);

  double prev = 0.0;
  for (int k = 0; k <= 2000; ++k) {
    const double rr = p.f0c * (1.0 + 0.05 * k);
    const double d = d_minus(rr, law, p.E);
    EXPECT_GE(d, prev - 1e-15);
    EXPECT_LE(d, 1.0);
    prev = d;
  }
}

TEST(DamageTension, ClosedForm) {
  const MaterialParams p = mortar();
  EXPECT_EQ(d_plus(p.ft, p, 0.05), 0.0);
  // Choose l so that A = 1: Gt E / (l ft^2) - 1/2 = 1.
  const double l = p.Gt * p.E / (1.5 * p.ft * p.ft);
  EXPECT_NEAR(tension_softening_parameter(p, l), 1.0, 1e-12);
  EXPECT_NEAR(d_plus(2 * p.ft, p, l), 1.0 - 0.5 * std::exp(-1.0), 1e-12);
  EXPECT_NEAR(d_plus(2 * p.ft, p, l), 0.81606, 1e-5);
}

TEST(DamageTension, SnapBack) {
  const MaterialParams p = mortar();
  const double l_crit = 2 * p.E * p.Gt / (p.ft * p.ft);
  EXPECT_NO_THROW(tension_softening_parameter(p, 0.99 * l_crit));
  try {
    d_plus(2 * p.ft, p, 1.01 * l_crit);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SnapBack);
  }
}

// Drives a material point along a uniaxial-stress strain path and integrates
// sigma:d(eps) with the trapezoid rule.
double uniaxial_dissipation(const DamageModel& m, double sign, double lambda_max, int n) {
  const double nu = m.params().nu;
  DamageState st = DamageState::virgin(m.params());
  StressV prev_s{};
  StrainV prev_e{};
  double w = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double lam = sign * lambda_max * k / n;
    const StrainV e{lam, -nu * lam, 0.0};
    const StressUpdate up = m.integrate(e, st);
    st = up.state;
    w += 0.5 * ((up.stress + prev_s).vec()).dot(e.vec() - prev_e.vec());
    prev_s = up.stress;
    prev_e = e;
  }
  return w;
}

TEST(Integration, TensionDissipationEqualsGtOverL) {
  const MaterialParams p = mortar();
  for (double l : {0.01, 0.05, 0.2}) {
    const DamageModel m(p, l);
    const double e_peak = p.ft / p.E;
    const double a = m.softening_a();
    // Stress has decayed to ~1e-9 ft by this strain.
    const double lambda_max = e_peak * (1.0 + 25.0 / a);
    const double w = uniaxial_dissipation(m, 1.0, lambda_max, 400000);
    EXPECT_NEAR(w / (p.Gt / l), 1.0, 0.02) << "l = " << l;
  }
}

TEST(Integration, CompressionDissipationEqualsGcOverL) {
  const MaterialParams p = mortar();
  for (double l : {0.01, 0.05, 0.2}) {
    const DamageModel m(p, l);
    const double w = uniaxial_dissipation(m, -1.0, m.compression().eu, 200000);
    EXPECT_NEAR(w / (p.Gc / l), 1.0, 0.02) << "l = " << l;
  }
}

TEST(Integration, ZeroAndElastic) {
  const MaterialParams p = mortar();
  const DamageModel m(p, 0.05);
  const DamageState v = DamageState::virgin(p);
  const StressUpdate z = m.integrate({0, 0, 0}, v);
  EXPECT_EQ(z.stress.vec().norm(), 0.0);
  EXPECT_EQ(z.state, v);

  const StrainV e{1e-5, -2e-6, 0.0};
  const StressUpdate u = m.integrate(e, v);
  EXPECT_LE((u.stress.vec() - m.elasticity() * e.vec()).norm(), 1e-9 * u.stress.norm());
  EXPECT_EQ(u.state.d_t, 0.0);
  EXPECT_EQ(u.state.d_c, 0.0);
}

TEST(Integration, UnloadingIsSecant) {
  const MaterialParams p = mortar();
  const DamageModel m(p, 0.05);
  const double lam = 2 * p.ft / p.E;
  const StressUpdate loaded = m.integrate({lam, -p.nu * lam, 0}, DamageState::virgin(p));
  EXPECT_GT(loaded.state.d_t, 0.0);
  const StressUpdate back = m.integrate({0, 0, 0}, loaded.state);
  EXPECT_EQ(back.stress.vec().norm(), 0.0);
  const StressUpdate half = m.integrate({0.5 * lam, -0.5 * p.nu * lam, 0}, loaded.state);
  EXPECT_NEAR(half.stress.sxx / loaded.stress.sxx, 0.5, 1e-12);
  EXPECT_EQ(half.state, loaded.state);
}

TEST(Integration, MonotoneStateRandomHistory) {
  const MaterialParams p = mortar();
  const DamageModel m(p, 0.05);
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0.0, 2e-3);
  DamageState st = DamageState::virgin(p);
  for (int k = 0; k < 2000; ++k) {
    const StressUpdate up = m.integrate({g(rng), g(rng), g(rng)}, st);
    EXPECT_GE(up.state.r_t, st.r_t);
    EXPECT_GE(up.state.r_c, st.r_c);
    EXPECT_GE(up.state.d_t, st.d_t);
    EXPECT_GE(up.state.d_c, st.d_c);
    EXPECT_LE(up.state.d_t, 1.0);
    EXPECT_LE(up.state.d_c, 1.0);
    st = up.state;
  }
}

TEST(Integration, RadialDissipationNonNegative) {
  const MaterialParams p = mortar();
  const DamageModel m(p, 0.05);
  const StrainV dir{0.6, -0.3, 0.74};
  DamageState st = DamageState::virgin(p);
  StressV prev{};
  for (int k = 1; k <= 2000; ++k) {
    const StressUpdate up = m.integrate((1e-5 * k) * dir, st);
    const double inc = 0.5 * (up.stress + prev).vec().dot(1e-5 * dir.vec());
    EXPECT_GE(inc, -1e-12);
    prev = up.stress;
    st = up.state;
  }
}

TEST(Tangent, ElasticRegime) {
  const MaterialParams p = mortar();
  const DamageModel m(p, 0.05);
  const Mat3 t = m.tangent({1e-5, 2e-6, -3e-6}, DamageState::virgin(p));
  EXPECT_LE((t - m.elasticity()).norm(), 1e-5 * m.elasticity().norm());
  EXPECT_LE((tangent_fd({0, 0, 0}, DamageState::virgin(p), p, 0.05) - m.elasticity()).norm(),
            1e-5 * m.elasticity().norm());
}

TEST(Tangent, DamagedMatchesCentralDifference) {
  const MaterialParams p = mortar();
  const DamageModel m(p, 0.05);
  const double lam = 1.5 * p.ft / p.E;
  const StrainV e0{lam, -p.nu * lam, 0.0};
  const DamageState st = m.integrate(e0, DamageState::virgin(p)).state;
  const StrainV e{1.02 * lam, -p.nu * lam, 0.1 * lam};
  const double h = 1e-8 * e.norm();
  Mat3 central;
  for (int j = 0; j < 3; ++j) {
    Vec3 a = e.vec(), b = e.vec();
    a[j] += 0.5 * h;
    b[j] -= 0.5 * h;
    central.col(j) = (m.integrate(StrainV::from(a), st).stress.vec() - m.integrate(StrainV::from(b), st).stress.vec()) / h;
  }
  const Mat3 t = m.tangent(e, st);
  EXPECT_LE((t - central).norm(), 1e-4 * central.norm());
}

TEST(Tangent, FullyDamaged) {
  const MaterialParams p = mortar();
  const DamageModel m(p, 0.05);
  const DamageState dead{10 * p.ft, 10 * p.f0c, 1.0, 1.0};
  const Mat3 t = m.tangent({1e-3, -5e-4, 2e-4}, dead);
  EXPECT_LE(t.norm(), 1e-6 * p.E);
}

TEST(Params, Validate) {
  MaterialParams p = mortar();
  EXPECT_NO_THROW(p.validate());
  p.epc = 1e-4;
  EXPECT_THROW(p.validate(), Error);
  p = mortar();
  p.kb = 1.0;
  EXPECT_THROW(p.validate(), Error);
  p = mortar();
  p.nu = 0.5;
  try {
    p.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidElastic);
  }
}

}  // namespace
}  // namespace homog
