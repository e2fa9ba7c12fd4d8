// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstring>
#include <random>

#include <gtest/gtest.h>

#include "homog/error.hpp"
#include "homog/isotropize.hpp"
#include "homog/macro.hpp"

namespace homog {
namespace {

Mat3 published_ortho() {
  Mat3 c;
  c << 5.442, 0.83, 0.0, 0.83, 4.291, 0.0, 0.0, 0.0, 1.707;
  return c * 1e9;
}

MacroLaw calibrated_law() {
  const ElasticityFit f = fit_from_orthotropic(published_ortho());
  MacroLaw law;
  law.theta = published_theta_star();
  law.E = f.e_iso;
  law.nu = f.nu_iso;
  law.t = f.t;
  law.l_rse = 0.005;
  return law;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

TEST(Theta, NormalizeEndpointsAndMidpoint) {
  const Bounds b = default_bounds();
  EXPECT_EQ(normalize(ThetaVector::from(b.lower), b), ThetaArray::Zero());
  const ThetaArray mid = normalize(ThetaVector::from(0.5 * (b.lower + b.upper)), b);
  for (int i = 0; i < kThetaSize; ++i) EXPECT_NEAR(mid[i], 0.5, 1e-15);
}

TEST(Theta, PublishedStartNormalized) {
  const ThetaArray xi = normalize(default_theta0(), default_bounds());
  EXPECT_NEAR(xi[0], 0.5714, 1e-4);
}

TEST(Theta, RoundTripAndOutOfBounds) {
  const Bounds b = default_bounds();
  const ThetaVector t = default_theta0();
  const ThetaArray back = denormalize(normalize(t, b), b).array();
  for (int i = 0; i < kThetaSize; ++i) EXPECT_NEAR(back[i], t.array()[i], 1e-12 * std::abs(t.array()[i]) + 1e-300);
  ThetaVector bad = t;
  bad.Gt = 5000;
  try {
    normalize(bad, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfBounds);
    EXPECT_NE(std::string(e.what()).find("Gt"), std::string::npos);
  }
}

TEST(Theta, StartAndPublishedInsideBounds) {
  const Bounds b = default_bounds();
  EXPECT_TRUE(b.contains(default_theta0().array()));
  EXPECT_TRUE(b.contains(published_theta_star().array()));
}

TEST(Theta, JsonRoundTrip) {
  const ThetaVector t = published_theta_star();
  EXPECT_EQ(theta_from_json(Json::parse(dump_json(to_json(t)))), t);
  const Bounds b = bounds_from_json(Json::parse(dump_json(to_json(default_bounds()))));
  EXPECT_EQ(b.lower, default_bounds().lower);
  EXPECT_EQ(b.upper, default_bounds().upper);
}

TEST(OmegaCh, Ratios) {
  EXPECT_EQ(omega_ch(0.07, 0.07), 1.0);
  EXPECT_DOUBLE_EQ(omega_ch(0.2, 0.05), 4.0);
}

TEST(MacroIntegrate, IdentityMapIsDamageLaw) {
  MacroLaw law = calibrated_law();
  law.t = Mat3::Identity();
  const DamageModel ref(law.material(), 0.01);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2e-3, 2e-3);
  DamageState a = DamageState::virgin(law.material()), b = a;
  const MacroPointLaw m(law, 0.01);
  for (int k = 0; k < 200; ++k) {
    const StrainV e{u(rng), u(rng), u(rng)};
    const StressUpdate x = m.integrate(e, a);
    const StressUpdate y = ref.integrate(e, b);
    EXPECT_EQ(x.stress, y.stress);
    EXPECT_EQ(x.state, y.state);
    a = x.state;
    b = y.state;
  }
}

TEST(MacroIntegrate, ElasticMatchesOrthotropic) {
  const MacroLaw law = calibrated_law();
  const MacroPointLaw m(law, 0.01);
  const DamageState v = m.virgin();
  for (const StrainV& d : strain_directions()) {
    const StrainV e = 1e-6 * d;
    const StressUpdate up = m.integrate(e, v);
    const Vec3 expect = published_ortho() * e.vec();
    EXPECT_LE((up.stress.vec() - expect).norm(), 1e-10 * expect.norm());
  }
  EXPECT_LE((m.tangent({1e-7, 0, 0}, v) - published_ortho()).norm(), 1e-8 * published_ortho().norm());
}

TEST(MacroIntegrate, ZeroStrainZeroStress) {
  const MacroLaw law = calibrated_law();
  const StressUpdate up = macro_integrate({0, 0, 0}, DamageState::virgin(law.material()), law, 0.01);
  EXPECT_EQ(up.stress.vec().norm(), 0.0);
}

TEST(MacroIntegrate, UnloadToZeroAfterDamage) {
  const MacroLaw law = calibrated_law();
  const MacroPointLaw m(law, 0.01);
  const StressUpdate loaded = m.integrate({3e-4, 0.0, 1e-4}, m.virgin());
  EXPECT_GT(loaded.state.d_t, 0.0);
  EXPECT_EQ(m.integrate({0, 0, 0}, loaded.state).stress.vec().norm(), 0.0);
}

TEST(MacroIntegrate, SnapBackNamesLength) {
  const MacroLaw law = calibrated_law();
  const double big = 1.5 * law.max_length();
  try {
    MacroPointLaw(law, big);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SnapBack);
    EXPECT_NE(std::string(e.what()).find("macro element length"), std::string::npos);
  }
  EXPECT_NO_THROW(MacroPointLaw(law, 0.9 * law.max_length()));
}

// Work per unit volume of a uniaxial isotropic-space path driven through the
// macro law, integrated by the trapezoid rule on macro quantities.
double uniaxial_macro_work(const MacroLaw& law, double l, double sign, double amp, int n) {
  const MacroPointLaw m(law, l);
  const Mat3 t_inv = law.t.inverse();
  const Vec3 dir_iso(sign, -sign * law.nu, 0.0);
  DamageState st = m.virgin();
  Vec3 e_prev = Vec3::Zero(), s_prev = Vec3::Zero();
  double w = 0.0;
  for (int k = 1; k <= n; ++k) {
    const Vec3 e = t_inv * (amp * k / n * dir_iso);
    const StressUpdate up = m.integrate(StrainV::from(e), st);
    w += 0.5 * (up.stress.vec() + s_prev).dot(e - e_prev);
    e_prev = e;
    s_prev = up.stress.vec();
    st = up.state;
  }
  return w;
}

TEST(Regularization, TensionDissipationIndependentOfLength) {
  const MacroLaw law = calibrated_law();
  for (double l : {0.005, 0.01}) {
    const DamageModel iso(law.material(), l);
    const double e_peak = law.theta.f0t / law.E;
    const double amp = e_peak * (1.0 + 25.0 / iso.softening_a());
    const double w = uniaxial_macro_work(law, l, 1.0, amp, 400000);
    EXPECT_NEAR(w * l / law.theta.Gt, 1.0, 0.03) << "l = " << l;
  }
}

TEST(Regularization, CompressionDissipationIndependentOfLength) {
  MacroLaw law = calibrated_law();
  const double l_max = law.max_length();
  for (double l : {0.25 * l_max, 0.5 * l_max}) {
    const DamageModel iso(law.material(), l);
    const double w = uniaxial_macro_work(law, l, -1.0, iso.compression().eu, 200000);
    EXPECT_NEAR(w * l / law.theta.Gc, 1.0, 0.03) << "l = " << l;
  }
}

TEST(LawFile, BitwiseRoundTrip) {
  MacroLaw law = calibrated_law();
  law.campaign_hash = "0123456789abcdef";
  const MacroLaw back = import_law(Json::parse(dump_json(export_law(law))));
  EXPECT_EQ(back.theta, law.theta);
  EXPECT_EQ(back.t, law.t);
  EXPECT_EQ(back.campaign_hash, law.campaign_hash);
  const MacroPointLaw a(law, 0.012), b(back, 0.012);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1e-3, 1e-3);
  DamageState sa = a.virgin(), sb = b.virgin();
  for (int k = 0; k < 100; ++k) {
    const StrainV e{u(rng), u(rng), u(rng)};
    const StressUpdate x = a.integrate(e, sa), y = b.integrate(e, sb);
    for (int i = 0; i < 3; ++i) EXPECT_TRUE(same_bits(x.stress.vec()[i], y.stress.vec()[i]));
    sa = x.state;
    sb = y.state;
  }
}

TEST(LawFile, MissingFieldNamed) {
  Json j = export_law(calibrated_law());
  j["theta"].erase("Gc");
  try {
    import_law(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
    EXPECT_NE(std::string(e.what()).find("'Gc'"), std::string::npos);
  }
  Json k = export_law(calibrated_law());
  k.erase("l_rse");
  EXPECT_THROW(import_law(k), Error);
}

TEST(LawFile, UnitsMetadata) {
  const Json j = export_law(calibrated_law());
  EXPECT_EQ(j["units"]["Gt"], "N/m");
  EXPECT_EQ(j["units"]["f0t"], "Pa");
  EXPECT_EQ(j["theta"]["Gc"].get<double>(), 803.32);
}

}  // namespace
}  // namespace homog
