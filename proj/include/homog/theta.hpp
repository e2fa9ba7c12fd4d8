// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

/// The 12 nonlinear macro parameters, their bounds and the map to the unit
/// box the optimizer works in.

#pragma once

#include <array>
#include <string>

#include <Eigen/Dense>

#include "homog/damage.hpp"
#include "homog/json_io.hpp"

namespace homog {

inline constexpr int kThetaSize = 12;
using ThetaArray = Eigen::Matrix<double, kThetaSize, 1>;

/// Order: f0t, Gt, kb, kappa, Gc, fpc, epc, f0c, frc, c1, c2, c3.
struct ThetaVector {
  double f0t = 0.0;    ///< tensile strength [Pa]
  double Gt = 0.0;     ///< tensile fracture energy [N/m]
  double kb = 0.0;
  double kappa = 0.0;
  double Gc = 0.0;     ///< compressive fracture energy [N/m]
  double fpc = 0.0;    ///< compressive peak [Pa]
  double epc = 0.0;    ///< strain at compressive peak
  double f0c = 0.0;    ///< compressive elastic limit [Pa]
  double frc = 0.0;    ///< compressive residual [Pa]
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  ThetaArray array() const;
  static ThetaVector from(const ThetaArray& a);
  friend bool operator==(const ThetaVector&, const ThetaVector&) = default;
};

const std::array<const char*, kThetaSize>& theta_names();
const std::array<const char*, kThetaSize>& theta_units();

/// Damage-law parameters of the isotropic space.
MaterialParams to_material(const ThetaVector& t, double E, double nu);
ThetaVector theta_from_material(const MaterialParams& p);

/// Closed box; a parameter may sit on its bound.
struct Bounds {
  ThetaArray lower;
  ThetaArray upper;
  void validate() const;
  bool contains(const ThetaArray& a) const;
};

/// Published search box of the Flemish bond calibration.
Bounds default_bounds();
/// Published starting point.
ThetaVector default_theta0();
/// Published converged parameters and the isotropic constants they go with.
ThetaVector published_theta_star();
inline constexpr double kPublishedE = 4.46701076e9;
inline constexpr double kPublishedNu = 0.21639363;

/// xi = (theta - lo) / (hi - lo). Throws OutOfBounds.
ThetaArray normalize(const ThetaVector& t, const Bounds& b);
ThetaVector denormalize(const ThetaArray& xi, const Bounds& b);

Json to_json(const ThetaVector& t);
/// Throws Config naming the first missing field.
ThetaVector theta_from_json(const Json& j);
Json to_json(const Bounds& b);
Bounds bounds_from_json(const Json& j);

}  // namespace homog
