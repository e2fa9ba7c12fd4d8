// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

/// Small-strain plane-stress solver on bilinear quadrilaterals with 2x2 Gauss
/// integration, Dirichlet-only boundaries and incremental Newton iterations.

#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "homog/damage.hpp"
#include "homog/mesh.hpp"

namespace homog {

/// Constitutive behaviour of one integration point.
class PointLaw {
 public:
  virtual ~PointLaw() = default;
  virtual DamageState virgin() const = 0;
  virtual StressUpdate integrate(const StrainV& eps, const DamageState& state) const = 0;
  virtual Mat3 tangent(const StrainV& eps, const DamageState& state) const = 0;
  virtual Mat3 secant(const StrainV& eps, const DamageState& updated) const = 0;
  /// Stress with the damage of `state` held fixed.
  virtual StressV frozen_stress(const StrainV& eps, const DamageState& state) const = 0;
};

class DamagePointLaw final : public PointLaw {
 public:
  DamagePointLaw(const MaterialParams& p, double l_dis) : model_(p, l_dis) {}
  DamageState virgin() const override { return DamageState::virgin(model_.params()); }
  StressUpdate integrate(const StrainV& eps, const DamageState& state) const override {
    return model_.integrate(eps, state);
  }
  /// Exact elastic matrix while the point stays undamaged, otherwise the
  /// finite-difference tangent.
  Mat3 tangent(const StrainV& eps, const DamageState& state) const override;
  Mat3 secant(const StrainV& eps, const DamageState& updated) const override { return model_.secant(eps, updated); }
  StressV frozen_stress(const StrainV& eps, const DamageState& state) const override {
    return model_.frozen_stress(eps, state);
  }
  const DamageModel& model() const { return model_; }

 private:
  DamageModel model_;
};

using LawTable = std::vector<std::shared_ptr<const PointLaw>>;

/// One damage law per element, regularised with that element's l = sqrt(area).
LawTable micro_laws(const Mesh& mesh, const MaterialParams& brick, const MaterialParams& mortar);

struct SolverOptions {
  double tolerance = 1e-6;
  int max_iterations = 40;
  /// Residual ratio above which a Newton step counts as stalled and the next
  /// step uses the secant matrix.
  double stall_ratio = 0.9;
  /// Halvings tried per Newton step before taking the best trial.
  int line_search_steps = 4;
  int max_bisections = 8;
  /// Once a load step has been bisected this often, a sub-step whose best
  /// iterate meets relaxed_tolerance is accepted. Softening with many
  /// points flipping between loading and unloading otherwise cycles forever.
  int relax_depth = 3;
  /// Linear predictor for the free dofs before the first Newton iterate.
  bool predictor = true;
  double relaxed_tolerance = 2e-2;
  int threads = 1;
};

inline constexpr int kGaussPoints = 4;

struct FieldState {
  Eigen::VectorXd u;
  Eigen::VectorXd f_int;
  std::vector<DamageState> gp_state;
  std::vector<StressV> gp_stress;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  int bisections = 0;
  double residual = 0.0;
  /// Reaction norm the residual was measured against.
  double reference = 0.0;
  /// Sub-steps accepted under the relaxed tolerance.
  int relaxed = 0;
  /// Sub-steps solved with damage frozen at the start of the sub-step.
  int explicit_steps = 0;
};

class FemModel {
 public:
  FemModel(Mesh mesh, LawTable laws, std::vector<int> constrained_dofs, SolverOptions options = {});

  const Mesh& mesh() const { return mesh_; }
  const std::vector<int>& constrained() const { return constrained_; }
  std::size_t num_dofs() const { return 2 * mesh_.num_nodes(); }

  FieldState initial_state() const;

  /// Equilibrium with constrained dofs set to `prescribed` (ordered like
  /// constrained()). On failure `out` holds the iterate with the smallest
  /// relative residual. With `frozen_damage` the equilibrium uses the damage
  /// of `prev`; the returned state is then updated once at the solution, so
  /// it is consistent in history but only approximately in equilibrium.
  SolveReport solve(const FieldState& prev, const Eigen::VectorXd& prescribed, FieldState& out,
                    double reaction_floor = 0.0, bool frozen_damage = false);

  /// solve() from `current` to `target`, bisecting the prescribed increment
  /// on failure. Sub-steps still failing at the deepest level fall back to a
  /// frozen-damage solve. On success `state` holds the field at `target`.
  SolveReport advance(FieldState& state, const Eigen::VectorXd& current, const Eigen::VectorXd& target,
                      double reaction_floor = 0.0);

  /// Area-weighted mean of the Gauss-point stresses.
  StressV upscale(const FieldState& s) const;

  /// Reactions at the constrained dofs, ordered like constrained().
  Eigen::VectorXd reactions(const FieldState& s) const;

  /// Strain at a Gauss point of element e from nodal displacements u.
  StrainV gauss_strain(std::size_t e, int gp, const Eigen::VectorXd& u) const;

 private:
  using BMat = Eigen::Matrix<double, 3, 8>;

  enum class Mode { Tangent, Secant, Frozen };
  void evaluate(const FieldState& prev, const Eigen::VectorXd& u, bool want_matrix, Mode mode, FieldState& out,
                std::vector<Eigen::Matrix<double, 8, 8>>* ke) const;
  std::array<int, 8> element_dofs(std::size_t e) const;
  bool factorize_free(const std::vector<Eigen::Matrix<double, 8, 8>>& ke);
  /// Spreads the prescribed increment over the free dofs with the tangent of
  /// the last converged state, so the first material evaluation does not see
  /// the whole increment concentrated in the boundary elements.
  void predict(const FieldState& prev, Eigen::VectorXd& u, std::vector<Eigen::Matrix<double, 8, 8>>& ke);
  SolveReport newton(const FieldState& prev, const Eigen::VectorXd& prescribed, FieldState& out, double reaction_floor,
                     bool frozen_damage, bool predictor);

  Mesh mesh_;
  LawTable laws_;
  std::vector<int> constrained_;
  std::vector<int> free_index_;
  int num_free_ = 0;
  SolverOptions options_;
  std::vector<std::array<BMat, kGaussPoints>> b_;
  std::vector<std::array<double, kGaussPoints>> weight_;
  std::vector<double> area_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  bool pattern_ready_ = false;
  FieldState scratch_;
};

/// Both dofs of every node on the bounding box of the mesh.
std::vector<int> boundary_dofs(const Mesh& mesh);

/// Affine displacement u = t * (eps_xx x + gxy/2 y, gxy/2 x + eps_yy y) at
/// each constrained dof.
Eigen::VectorXd affine_boundary_values(const Mesh& mesh, const std::vector<int>& dofs, const StrainV& eps, double t);

}  // namespace homog
