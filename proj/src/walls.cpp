// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

#include "homog/walls.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "homog/error.hpp"

namespace homog {

const char* to_string(WallTest t) { return t == WallTest::Compression ? "compression" : "shear"; }

WallTest wall_test_from_string(const std::string& s) {
  if (s == "compression") return WallTest::Compression;
  if (s == "shear") return WallTest::ShearCompression;
  fail(ErrorKind::Config, "unknown wall test '" + s + "' (expected compression or shear)");
}

WallSupports wall_supports(const Mesh& mesh) {
  const double y0 = mesh.min_corner().y();
  const double y1 = mesh.max_corner().y();
  const double tol = 1e-9 * std::max(1.0, y1 - y0);
  WallSupports s;
  for (std::size_t n = 0; n < mesh.num_nodes(); ++n) {
    if (std::abs(mesh.nodes[n].y() - y0) <= tol) {
      s.dofs.push_back(2 * static_cast<int>(n));
      s.dofs.push_back(2 * static_cast<int>(n) + 1);
    }
  }
  for (std::size_t n = 0; n < mesh.num_nodes(); ++n) {
    if (std::abs(mesh.nodes[n].y() - y1) <= tol) {
      s.top_x.push_back(static_cast<int>(s.dofs.size()));
      s.dofs.push_back(2 * static_cast<int>(n));
      s.top_y.push_back(static_cast<int>(s.dofs.size()));
      s.dofs.push_back(2 * static_cast<int>(n) + 1);
    }
  }
  if (s.top_x.empty() || s.dofs.size() == 2 * s.top_x.size()) fail(ErrorKind::Geometry, "wall mesh needs a base and a top edge");
  return s;
}

std::vector<std::pair<double, double>> wall_program_path(const WallProgram& p) {
  if (p.steps < 1 || p.precompression_steps < 1) fail(ErrorKind::InvalidArgument, "wall program needs at least one step");
  std::vector<std::pair<double, double>> path;
  if (p.test == WallTest::Compression) {
    for (int k = 1; k <= p.steps; ++k) path.emplace_back(0.0, -p.dy_max * k / p.steps);
    return path;
  }
  for (int k = 1; k <= p.precompression_steps; ++k) path.emplace_back(0.0, -p.precompression * k / p.precompression_steps);
  for (int k = 1; k <= p.steps; ++k) path.emplace_back(p.dx_max * k / p.steps, -p.precompression);
  return path;
}

WallRun run_wall(const Mesh& mesh, const LawTable& laws, const WallProgram& program, const SolverOptions& solver,
                 const WallObserver& observer) {
  const WallSupports sup = wall_supports(mesh);
  FemModel model(mesh, laws, sup.dofs, solver);
  FieldState state = model.initial_state();
  const auto path = wall_program_path(program);
  Eigen::VectorXd current = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sup.dofs.size()));
  WallRun run;
  run.curve.push_back({});
  double peak_reaction = 0.0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    Eigen::VectorXd target = Eigen::VectorXd::Zero(current.size());
    for (int i : sup.top_x) target[i] = path[k].first;
    for (int i : sup.top_y) target[i] = path[k].second;
    const SolveReport r = model.advance(state, current, target, program.reaction_floor_ratio * peak_reaction);
    run.relaxed_steps += r.relaxed;
    run.explicit_steps += r.explicit_steps;
    if (!r.converged) {
      run.diverged = true;
      break;
    }
    current = target;
    const Eigen::VectorXd reac = model.reactions(state);
    peak_reaction = std::max(peak_reaction, reac.norm());
    WallPoint pt;
    pt.time = static_cast<double>(k + 1) / static_cast<double>(path.size());
    pt.ux = path[k].first;
    pt.uy = path[k].second;
    for (int i : sup.top_x) pt.fx += reac[i];
    for (int i : sup.top_y) pt.fy -= reac[i];
    run.curve.push_back(pt);
    run.completed = pt.time;
    if (observer) observer(static_cast<int>(k + 1), model, state);
  }
  return run;
}

std::string damage_snapshot_csv(const FemModel& model, const FieldState& state) {
  const Mesh& mesh = model.mesh();
  std::ostringstream os;
  os.precision(10);
  os << "element,x,y,d_plus,d_minus,u_norm\n";
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    double dt = 0.0, dc = 0.0;
    for (int g = 0; g < kGaussPoints; ++g) {
      dt += state.gp_state[e * kGaussPoints + g].d_t;
      dc += state.gp_state[e * kGaussPoints + g].d_c;
    }
    Eigen::Vector2d u = Eigen::Vector2d::Zero();
    for (int n : mesh.elements[e]) u += Eigen::Vector2d(state.u[2 * n], state.u[2 * n + 1]);
    const Eigen::Vector2d c = mesh.centroid(e);
    os << e << ',' << c.x() << ',' << c.y() << ',' << dt / kGaussPoints << ',' << dc / kGaussPoints << ','
       << (0.25 * u).norm() << '\n';
  }
  return os.str();
}

std::string wall_curve_csv(const WallRun& run) {
  std::ostringstream os;
  os.precision(17);
  os << "time,ux,uy,fx,fy\n";
  for (const auto& p : run.curve) os << p.time << ',' << p.ux << ',' << p.uy << ',' << p.fx << ',' << p.fy << '\n';
  return os.str();
}

double initial_stiffness(const WallRun& run) {
  for (const auto& p : run.curve) {
    if (p.uy != 0.0) return p.fy / -p.uy;
  }
  return 0.0;
}

double peak_vertical_reaction(const WallRun& run) {
  double peak = 0.0;
  for (const auto& p : run.curve) peak = std::max(peak, p.fy);
  return peak;
}

}  // namespace homog
