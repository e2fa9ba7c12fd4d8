// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

#include "homog/theta.hpp"

#include <cmath>

#include "homog/error.hpp"

namespace homog {

ThetaArray ThetaVector::array() const {
  ThetaArray a;
  a << f0t, Gt, kb, kappa, Gc, fpc, epc, f0c, frc, c1, c2, c3;
  return a;
}

ThetaVector ThetaVector::from(const ThetaArray& a) {
  return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7], a[8], a[9], a[10], a[11]};
}

const std::array<const char*, kThetaSize>& theta_names() {
  static const std::array<const char*, kThetaSize> names{"f0t", "Gt",  "kb",  "kappa", "Gc", "fpc",
                                                         "epc", "f0c", "frc", "c1",    "c2", "c3"};
  return names;
}

const std::array<const char*, kThetaSize>& theta_units() {
  static const std::array<const char*, kThetaSize> units{"Pa", "N/m", "-", "-", "N/m", "Pa",
                                                         "-",  "Pa",  "Pa", "-", "-",   "-"};
  return units;
}

MaterialParams to_material(const ThetaVector& t, double E, double nu) {
  MaterialParams p;
  p.E = E;
  p.nu = nu;
  p.ft = t.f0t;
  p.Gt = t.Gt;
  p.f0c = t.f0c;
  p.fpc = t.fpc;
  p.frc = t.frc;
  p.epc = t.epc;
  p.Gc = t.Gc;
  p.kb = t.kb;
  p.kappa = t.kappa;
  p.c1 = t.c1;
  p.c2 = t.c2;
  p.c3 = t.c3;
  return p;
}

ThetaVector theta_from_material(const MaterialParams& p) {
  return {p.ft, p.Gt, p.kb, p.kappa, p.Gc, p.fpc, p.epc, p.f0c, p.frc, p.c1, p.c2, p.c3};
}

void Bounds::validate() const {
  for (int i = 0; i < kThetaSize; ++i) {
    if (!(lower[i] < upper[i]) || !std::isfinite(lower[i]) || !std::isfinite(upper[i])) {
      fail(ErrorKind::InvalidArgument, std::string("bounds of ") + theta_names()[i] + " need lower < upper");
    }
  }
}

bool Bounds::contains(const ThetaArray& a) const {
  for (int i = 0; i < kThetaSize; ++i) {
    if (!(a[i] >= lower[i] && a[i] <= upper[i])) return false;
  }
  return true;
}

Bounds default_bounds() {
  Bounds b;
  b.lower << 1.5e5, 100, 1.15, 0.0, 600, 7.0e6, 6.0e-3, 3.9e6, 1.0e4, 0.01, 0.01, 0.3;
  b.upper << 5.0e5, 2.0e3, 1.7, 0.2, 1500, 11.0e6, 9.0e-3, 4.2e6, 1.0e5, 0.9, 0.6, 2.2;
  return b;
}

ThetaVector default_theta0() {
  return {3.5e5, 500, 1.15, 2.7443e-5, 778.1, 1e7, 6.10e-3, 3.997e6, 1e4, 0.49547, 0.6, 2.1997};
}

ThetaVector published_theta_star() {
  return {2.6e5, 1e3, 1.15, 2.7650e-7, 803.32, 1e7, 6.1007e-3, 3.9874e6, 1e4, 0.49547, 0.6, 2.2};
}

ThetaArray normalize(const ThetaVector& t, const Bounds& b) {
  const ThetaArray a = t.array();
  for (int i = 0; i < kThetaSize; ++i) {
    if (!(a[i] >= b.lower[i] && a[i] <= b.upper[i])) {
      fail(ErrorKind::OutOfBounds, std::string(theta_names()[i]) + " = " + std::to_string(a[i]) + " is outside its bounds");
    }
  }
  return ((a - b.lower).array() / (b.upper - b.lower).array()).matrix();
}

ThetaVector denormalize(const ThetaArray& xi, const Bounds& b) {
  return ThetaVector::from((b.lower.array() + xi.array() * (b.upper - b.lower).array()).matrix());
}

Json to_json(const ThetaVector& t) {
  Json j = Json::object();
  const ThetaArray a = t.array();
  for (int i = 0; i < kThetaSize; ++i) j[theta_names()[i]] = a[i];
  return j;
}

ThetaVector theta_from_json(const Json& j) {
  ThetaArray a;
  for (int i = 0; i < kThetaSize; ++i) a[i] = require_number(j, theta_names()[i]);
  return ThetaVector::from(a);
}

Json to_json(const Bounds& b) {
  Json j = Json::object();
  for (int i = 0; i < kThetaSize; ++i) j[theta_names()[i]] = Json::array({b.lower[i], b.upper[i]});
  return j;
}

Bounds bounds_from_json(const Json& j) {
  Bounds b;
  for (int i = 0; i < kThetaSize; ++i) {
    const char* name = theta_names()[i];
    if (!j.is_object() || !j.contains(name)) fail(ErrorKind::Config, std::string("missing bounds for '") + name + "'");
    const Json& pair = j.at(name);
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      fail(ErrorKind::Config, std::string("bounds for '") + name + "' must be [lower, upper]");
    }
    b.lower[i] = pair[0].get<double>();
    b.upper[i] = pair[1].get<double>();
  }
  b.validate();
  return b;
}

}  // namespace homog
