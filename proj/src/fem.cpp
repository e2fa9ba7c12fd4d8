// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

#include "homog/fem.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "homog/error.hpp"
#include "homog/parallel.hpp"

namespace homog {

Mat3 DamagePointLaw::tangent(const StrainV& eps, const DamageState& state) const {
  if (state.d_t == 0.0 && state.d_c == 0.0) {
    const DamageState trial = model_.integrate(eps, state).state;
    if (trial.d_t == 0.0 && trial.d_c == 0.0) return model_.elasticity();
  }
  return model_.tangent(eps, state);
}

LawTable micro_laws(const Mesh& mesh, const MaterialParams& brick, const MaterialParams& mortar) {
  const CharacteristicLengths lengths = characteristic_lengths(mesh);
  LawTable laws(mesh.num_elements());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const MaterialParams& p = mesh.material[e] == kBrick ? brick : mortar;
    laws[e] = std::make_shared<DamagePointLaw>(p, lengths.per_element[e]);
  }
  return laws;
}

FemModel::FemModel(Mesh mesh, LawTable laws, std::vector<int> constrained_dofs, SolverOptions options)
    : mesh_(std::move(mesh)), laws_(std::move(laws)), constrained_(std::move(constrained_dofs)), options_(options) {
  mesh_.validate();
  if (laws_.size() != mesh_.num_elements()) fail(ErrorKind::InvalidArgument, "one constitutive law per element required");

  free_index_.assign(num_dofs(), 0);
  for (int d : constrained_) {
    if (d < 0 || static_cast<std::size_t>(d) >= num_dofs()) fail(ErrorKind::InvalidArgument, "constrained dof out of range");
    if (free_index_[d] < 0) fail(ErrorKind::InvalidArgument, "constrained dof listed twice");
    free_index_[d] = -1;
  }
  for (auto& f : free_index_) {
    if (f == 0) f = num_free_++;
    else f = -1;
  }

  const double g = 1.0 / std::sqrt(3.0);
  const double gauss[kGaussPoints][2] = {{-g, -g}, {g, -g}, {g, g}, {-g, g}};
  b_.resize(mesh_.num_elements());
  weight_.resize(mesh_.num_elements());
  area_.resize(mesh_.num_elements());
  for (std::size_t e = 0; e < mesh_.num_elements(); ++e) {
    Eigen::Matrix<double, 4, 2> xy;
    for (int a = 0; a < 4; ++a) xy.row(a) = mesh_.nodes[mesh_.elements[e][a]].transpose();
    area_[e] = mesh_.element_area(e);
    for (int q = 0; q < kGaussPoints; ++q) {
      const double xi = gauss[q][0];
      const double eta = gauss[q][1];
      Eigen::Matrix<double, 2, 4> dn;
      dn << -(1 - eta), (1 - eta), (1 + eta), -(1 + eta), -(1 - xi), -(1 + xi), (1 + xi), (1 - xi);
      dn *= 0.25;
      const Eigen::Matrix2d jac = dn * xy;
      const Eigen::Matrix<double, 2, 4> dx = jac.inverse() * dn;
      BMat b = BMat::Zero();
      for (int a = 0; a < 4; ++a) {
        b(0, 2 * a) = dx(0, a);
        b(1, 2 * a + 1) = dx(1, a);
        b(2, 2 * a) = dx(1, a);
        b(2, 2 * a + 1) = dx(0, a);
      }
      b_[e][q] = b;
      weight_[e][q] = jac.determinant() * mesh_.thickness;
    }
  }
}

std::array<int, 8> FemModel::element_dofs(std::size_t e) const {
  std::array<int, 8> d{};
  for (int a = 0; a < 4; ++a) {
    d[2 * a] = 2 * mesh_.elements[e][a];
    d[2 * a + 1] = 2 * mesh_.elements[e][a] + 1;
  }
  return d;
}

FieldState FemModel::initial_state() const {
  FieldState s;
  s.u = Eigen::VectorXd::Zero(num_dofs());
  s.f_int = Eigen::VectorXd::Zero(num_dofs());
  s.gp_state.resize(mesh_.num_elements() * kGaussPoints);
  s.gp_stress.assign(mesh_.num_elements() * kGaussPoints, StressV{});
  for (std::size_t e = 0; e < mesh_.num_elements(); ++e) {
    const DamageState v = laws_[e]->virgin();
    for (int q = 0; q < kGaussPoints; ++q) s.gp_state[e * kGaussPoints + q] = v;
  }
  return s;
}

StrainV FemModel::gauss_strain(std::size_t e, int gp, const Eigen::VectorXd& u) const {
  const auto dofs = element_dofs(e);
  Eigen::Matrix<double, 8, 1> ue;
  for (int i = 0; i < 8; ++i) ue[i] = u[dofs[i]];
  return StrainV::from(b_[e][gp] * ue);
}

void FemModel::evaluate(const FieldState& prev, const Eigen::VectorXd& u, bool want_matrix, Mode mode,
                        FieldState& out, std::vector<Eigen::Matrix<double, 8, 8>>* ke) const {
  const std::size_t ne = mesh_.num_elements();
  std::vector<Eigen::Matrix<double, 8, 1>> fe(ne);
  out.gp_state.resize(ne * kGaussPoints);
  out.gp_stress.resize(ne * kGaussPoints);
  parallel_for(ne, options_.threads, [&](std::size_t e) {
    const auto dofs = element_dofs(e);
    Eigen::Matrix<double, 8, 1> ue;
    for (int i = 0; i < 8; ++i) ue[i] = u[dofs[i]];
    Eigen::Matrix<double, 8, 1> f = Eigen::Matrix<double, 8, 1>::Zero();
    Eigen::Matrix<double, 8, 8> k = Eigen::Matrix<double, 8, 8>::Zero();
    const PointLaw& law = *laws_[e];
    for (int q = 0; q < kGaussPoints; ++q) {
      const std::size_t idx = e * kGaussPoints + q;
      const DamageState& old = prev.gp_state[idx];
      const StrainV eps = StrainV::from(b_[e][q] * ue);
      if (mode == Mode::Frozen) {
        out.gp_state[idx] = old;
        out.gp_stress[idx] = law.frozen_stress(eps, old);
      } else {
        const StressUpdate up = law.integrate(eps, old);
        out.gp_state[idx] = up.state;
        out.gp_stress[idx] = up.stress;
      }
      f += weight_[e][q] * b_[e][q].transpose() * out.gp_stress[idx].vec();
      if (want_matrix) {
        Mat3 d;
        switch (mode) {
          case Mode::Tangent: d = law.tangent(eps, old); break;
          case Mode::Secant: d = law.secant(eps, out.gp_state[idx]); break;
          case Mode::Frozen: d = law.secant(eps, old); break;
        }
        k += weight_[e][q] * b_[e][q].transpose() * d * b_[e][q];
      }
    }
    fe[e] = f;
    if (want_matrix) (*ke)[e] = k;
  });

  out.u = u;
  out.f_int = Eigen::VectorXd::Zero(num_dofs());
  for (std::size_t e = 0; e < ne; ++e) {
    const auto dofs = element_dofs(e);
    for (int i = 0; i < 8; ++i) out.f_int[dofs[i]] += fe[e][i];
  }
}

bool FemModel::factorize_free(const std::vector<Eigen::Matrix<double, 8, 8>>& ke) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh_.num_elements() * 64);
  for (std::size_t e = 0; e < mesh_.num_elements(); ++e) {
    const auto dofs = element_dofs(e);
    for (int i = 0; i < 8; ++i) {
      const int fi = free_index_[dofs[i]];
      if (fi < 0) continue;
      for (int j = 0; j < 8; ++j) {
        const int fj = free_index_[dofs[j]];
        if (fj >= 0) trip.emplace_back(fi, fj, ke[e](i, j));
      }
    }
  }
  Eigen::SparseMatrix<double> k(num_free_, num_free_);
  k.setFromTriplets(trip.begin(), trip.end());
  if (!pattern_ready_) {
    lu_.analyzePattern(k);
    pattern_ready_ = true;
  }
  lu_.factorize(k);
  return lu_.info() == Eigen::Success;
}

void FemModel::predict(const FieldState& prev, Eigen::VectorXd& u, std::vector<Eigen::Matrix<double, 8, 8>>& ke) {
  if (num_free_ == 0) return;
  const Eigen::VectorXd du_c = u - prev.u;
  if (du_c.isZero(0.0)) return;
  // Linearised at the last converged state: K_ff du_f = -(r_f + K_fc du_c).
  evaluate(prev, prev.u, true, Mode::Tangent, scratch_, &ke);
  Eigen::VectorXd rhs(num_free_);
  for (std::size_t d = 0; d < num_dofs(); ++d) {
    if (free_index_[d] >= 0) rhs[free_index_[d]] = -scratch_.f_int[d];
  }
  for (std::size_t e = 0; e < mesh_.num_elements(); ++e) {
    const auto dofs = element_dofs(e);
    for (int i = 0; i < 8; ++i) {
      const int fi = free_index_[dofs[i]];
      if (fi < 0) continue;
      for (int j = 0; j < 8; ++j) {
        if (free_index_[dofs[j]] < 0) rhs[fi] -= ke[e](i, j) * du_c[dofs[j]];
      }
    }
  }
  if (!factorize_free(ke)) return;
  const Eigen::VectorXd du = lu_.solve(rhs);
  if (lu_.info() != Eigen::Success || !du.allFinite()) return;
  for (std::size_t d = 0; d < num_dofs(); ++d) {
    if (free_index_[d] >= 0) u[d] += du[free_index_[d]];
  }
}

SolveReport FemModel::solve(const FieldState& prev, const Eigen::VectorXd& prescribed, FieldState& out,
                            double reaction_floor, bool frozen_damage) {
  if (prescribed.size() != static_cast<Eigen::Index>(constrained_.size())) {
    fail(ErrorKind::InvalidArgument, "prescribed values do not match the constrained dofs");
  }
  const SolveReport first = newton(prev, prescribed, out, reaction_floor, frozen_damage, options_.predictor);
  if (first.converged || !options_.predictor) return first;
  // The predicted start can sit in the wrong basin right after a crack
  // localizes; the plain start is tried before the caller bisects.
  FieldState plain;
  const SolveReport second = newton(prev, prescribed, plain, reaction_floor, frozen_damage, false);
  const auto ratio = [](const SolveReport& r) { return r.reference > 0.0 ? r.residual / r.reference : INFINITY; };
  if (!second.converged && !(ratio(second) < ratio(first))) return first;
  out = std::move(plain);
  SolveReport r = second;
  r.iterations += first.iterations;
  return r;
}

SolveReport FemModel::newton(const FieldState& prev, const Eigen::VectorXd& prescribed, FieldState& out,
                             double reaction_floor, bool frozen_damage, bool predictor) {
  Eigen::VectorXd u = prev.u;
  for (std::size_t i = 0; i < constrained_.size(); ++i) u[constrained_[i]] = prescribed[i];

  SolveReport report;
  std::vector<Eigen::Matrix<double, 8, 8>> ke(mesh_.num_elements());
  if (predictor) predict(prev, u, ke);

  const auto free_norm = [&](const Eigen::VectorXd& f) {
    double acc = 0.0;
    for (std::size_t d = 0; d < num_dofs(); ++d) {
      if (free_index_[d] >= 0) acc += f[d] * f[d];
    }
    return std::sqrt(acc);
  };

  Eigen::VectorXd rf(num_free_);
  Eigen::VectorXd reaction(constrained_.size());
  FieldState best;
  double best_ratio = std::numeric_limits<double>::infinity();
  bool use_secant = false;
  for (int it = 0; it <= options_.max_iterations; ++it) {
    const bool want_matrix = it < options_.max_iterations;
    const Mode mode = frozen_damage ? Mode::Frozen : use_secant ? Mode::Secant : Mode::Tangent;
    evaluate(prev, u, want_matrix, mode, out, &ke);

    for (std::size_t d = 0; d < num_dofs(); ++d) {
      if (free_index_[d] >= 0) rf[free_index_[d]] = out.f_int[d];
    }
    for (std::size_t i = 0; i < constrained_.size(); ++i) reaction[i] = out.f_int[constrained_[i]];
    const double ref = std::max(reaction.norm(), reaction_floor);
    const double res = rf.norm();
    report.iterations = it;
    if (!std::isfinite(res)) break;
    if (res <= options_.tolerance * ref) {
      report.converged = true;
      report.residual = res;
      report.reference = ref;
      if (frozen_damage) {
        evaluate(prev, u, false, Mode::Tangent, out, nullptr);
        report.residual = free_norm(out.f_int);
      }
      return report;
    }
    if (res / ref < best_ratio) {
      best_ratio = res / ref;
      best = out;
      report.residual = res;
      report.reference = ref;
    }
    if (!want_matrix) break;

    if (!factorize_free(ke)) break;
    const Eigen::VectorXd du = lu_.solve(-rf);
    if (lu_.info() != Eigen::Success || !du.allFinite()) break;

    // Backtracking on the free residual norm. Damage loading/unloading
    // switches make full steps oscillate once cracks localize.
    double step = 1.0;
    double best_step = 0.0;
    double best_res = res;
    for (int ls = 0; ls <= options_.line_search_steps; ++ls) {
      Eigen::VectorXd trial = u;
      for (std::size_t d = 0; d < num_dofs(); ++d) {
        if (free_index_[d] >= 0) trial[d] += step * du[free_index_[d]];
      }
      evaluate(prev, trial, false, frozen_damage ? Mode::Frozen : Mode::Tangent, scratch_, nullptr);
      const double r = free_norm(scratch_.f_int);
      if (r < best_res) {
        best_res = r;
        best_step = step;
      }
      if (r <= (1.0 - 1e-4 * step) * res) break;
      step *= 0.5;
    }
    const bool stalled = best_res > options_.stall_ratio * res;
    // Two stalled steps in a row, tangent then secant: give up early and let
    // the caller bisect.
    if (stalled && use_secant) break;
    for (std::size_t d = 0; d < num_dofs(); ++d) {
      if (free_index_[d] >= 0) u[d] += best_step * du[free_index_[d]];
    }
    // A stalled tangent step falls back once to the secant matrix, which is
    // positive definite.
    use_secant = stalled && !use_secant;
  }
  if (std::isfinite(best_ratio)) {
    out = std::move(best);
    if (frozen_damage) {
      const Eigen::VectorXd ub = out.u;
      evaluate(prev, ub, false, Mode::Tangent, out, nullptr);
    }
  }
  return report;
}

SolveReport FemModel::advance(FieldState& state, const Eigen::VectorXd& current, const Eigen::VectorXd& target,
                              double reaction_floor) {
  struct Segment {
    Eigen::VectorXd from, to;
    int depth;
  };
  std::vector<Segment> stack{{current, target, 0}};
  SolveReport total;
  FieldState trial;
  while (!stack.empty()) {
    Segment seg = std::move(stack.back());
    stack.pop_back();
    const SolveReport r = solve(state, seg.to, trial, reaction_floor);
    total.iterations += r.iterations;
    total.residual = r.residual;
    total.reference = r.reference;
    if (r.converged) {
      std::swap(state, trial);
      continue;
    }
    if (seg.depth >= options_.relax_depth && r.residual <= options_.relaxed_tolerance * r.reference) {
      ++total.relaxed;
      std::swap(state, trial);
      continue;
    }
    if (seg.depth >= options_.max_bisections) {
      const SolveReport fr = solve(state, seg.to, trial, reaction_floor, true);
      total.iterations += fr.iterations;
      total.residual = fr.residual;
      total.reference = fr.reference;
      if (!fr.converged && !(fr.residual <= options_.relaxed_tolerance * fr.reference)) {
        total.converged = false;
        return total;
      }
      ++total.explicit_steps;
      std::swap(state, trial);
      continue;
    }
    ++total.bisections;
    const Eigen::VectorXd mid = 0.5 * (seg.from + seg.to);
    stack.push_back({mid, seg.to, seg.depth + 1});
    stack.push_back({seg.from, mid, seg.depth + 1});
  }
  total.converged = true;
  return total;
}

StressV FemModel::upscale(const FieldState& s) const {
  Vec3 acc = Vec3::Zero();
  double area = 0.0;
  for (std::size_t e = 0; e < mesh_.num_elements(); ++e) {
    Vec3 sum = Vec3::Zero();
    for (int q = 0; q < kGaussPoints; ++q) sum += s.gp_stress[e * kGaussPoints + q].vec();
    acc += (area_[e] / kGaussPoints) * sum;
    area += area_[e];
  }
  return StressV::from(acc / area);
}

Eigen::VectorXd FemModel::reactions(const FieldState& s) const {
  Eigen::VectorXd r(constrained_.size());
  for (std::size_t i = 0; i < constrained_.size(); ++i) r[i] = s.f_int[constrained_[i]];
  return r;
}

std::vector<int> boundary_dofs(const Mesh& mesh) {
  const Eigen::Vector2d lo = mesh.min_corner();
  const Eigen::Vector2d hi = mesh.max_corner();
  const double tol = 1e-9 * (hi - lo).norm();
  std::vector<int> dofs;
  for (std::size_t n = 0; n < mesh.num_nodes(); ++n) {
    const Eigen::Vector2d& p = mesh.nodes[n];
    const bool on = std::abs(p.x() - lo.x()) < tol || std::abs(p.x() - hi.x()) < tol ||
                    std::abs(p.y() - lo.y()) < tol || std::abs(p.y() - hi.y()) < tol;
    if (on) {
      dofs.push_back(static_cast<int>(2 * n));
      dofs.push_back(static_cast<int>(2 * n + 1));
    }
  }
  return dofs;
}

Eigen::VectorXd affine_boundary_values(const Mesh& mesh, const std::vector<int>& dofs, const StrainV& eps, double t) {
  Eigen::VectorXd v(dofs.size());
  const double half_g = 0.5 * eps.gxy;
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    const Eigen::Vector2d& p = mesh.nodes[dofs[i] / 2];
    v[i] = dofs[i] % 2 == 0 ? (eps.exx * p.x() + half_g * p.y()) * t : (half_g * p.x() + eps.eyy * p.y()) * t;
  }
  return v;
}

}  // namespace homog
