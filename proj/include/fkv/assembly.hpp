#pragma once

#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "fkv/elements.hpp"
#include "fkv/mesh.hpp"

namespace fkv {

/// Maps one field's local DOFs to the retained global numbering. Constrained
/// DOFs map to -1.
struct FieldLayout {
  FieldKind kind = FieldKind::WaveP1;
  int n_nodes = 0;
  std::vector<int> dof_to_global;
};

/// Essential boundary conditions per side: local DOF indices eliminated by
/// Dirichlet/clamp conditions. Natural conditions (stress, shear, moment
/// balances) need no entries; they are carried by the weak form and the
/// interface merge.
struct BoundaryConditions {
  std::vector<int> constrained_left;
  std::vector<int> constrained_right;
};

BoundaryConditions essential_conditions(const ModelSpec& spec,
                                        const FieldBlock& left,
                                        const FieldBlock& right);

/// The reduced coupled system on retained DOFs: global mass and stiffness,
/// the interface merge, and the damped-region quadrature (points, weights,
/// sqrt(d), and the derivative sampling matrix).
struct CoupledSystem {
  ModelSpec spec;
  SpatialMesh mesh;

  FieldLayout left;   // n_nodes == 0 for EBB
  FieldLayout right;
  int n_dof = 0;
  int interface_dof = -1;  // merged value DOF at x = 0; -1 for EBB

  Eigen::SparseMatrix<double> mass;       // SPD
  Eigen::SparseMatrix<double> stiffness;  // SPD on retained DOFs

  // Damped-region quadrature: one entry per quadrature point, ordered by
  // element. Wave damping uses one midpoint per element (u_x is constant
  // there); beam damping uses 2-point Gauss (y_xx is linear).
  std::vector<double> qp_x;
  std::vector<double> qp_weight;
  std::vector<double> qp_sqrt_d;
  Eigen::SparseMatrix<double> damped_derivative;  // n_q x n_dof

  int n_q() const { return static_cast<int>(qp_x.size()); }
};

/// Assembles blocks, applies essential conditions, merges the interface value
/// DOF (continuity u(0) = y(0)) and builds the damped-region quadrature.
/// d0_override >= 0 replaces spec.d0 (0 drops the damped region entirely,
/// the conservative limit used by tests).
CoupledSystem build_coupled_system(const ModelSpec& spec,
                                   const SpatialMesh& mesh,
                                   double d0_override = -1.0);

/// "row,col,value" lines for cross-checking matrices externally.
std::string coordinate_text(const Eigen::SparseMatrix<double>& m);

}  // namespace fkv
