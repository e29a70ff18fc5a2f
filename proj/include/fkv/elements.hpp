#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "fkv/mesh.hpp"

namespace fkv {

enum class FieldKind { WaveP1, BeamHermite };

/// Degrees of freedom per node: 1 for P1 (value), 2 for Hermite cubics
/// (value, slope).
inline int dofs_per_node(FieldKind kind) {
  return kind == FieldKind::WaveP1 ? 1 : 2;
}

/// Mass and stiffness of one field on one subdomain, before any boundary
/// condition is applied. The stiffness already carries the coefficient
/// (a or b); the mass is plain L2.
struct FieldBlock {
  FieldKind kind = FieldKind::WaveP1;
  int n_nodes = 0;
  Eigen::SparseMatrix<double> mass;
  Eigen::SparseMatrix<double> stiffness;

  int n_dofs() const { return n_nodes * dofs_per_node(kind); }
  /// Local DOF index of a node's value (component 0) or slope (component 1).
  int dof(int node, int component = 0) const {
    return node * dofs_per_node(kind) + component;
  }
};

/// P1 elements: mass = Int phi_i phi_j, stiffness = coefficient * Int
/// phi_i' phi_j'. Throws AssemblyError on degenerate elements.
FieldBlock assemble_wave_block(const std::vector<double>& nodes,
                               double coefficient);

/// Hermite cubics: mass = Int N_i N_j, stiffness = coefficient * Int
/// N_i'' N_j''. Two DOFs per node (value, slope).
FieldBlock assemble_beam_block(const std::vector<double>& nodes,
                               double coefficient);

/// Element-wise constant damping coefficient on the right subdomain: d0 on
/// elements inside (l0, l1), zero outside. Throws AssemblyError when the mesh
/// is not fitted to l0, l1.
std::vector<double> damping_indicator(const ModelSpec& spec,
                                      const SpatialMesh& mesh);

/// Hermite shape values/second derivatives on the reference element [0,1]
/// scaled to physical length h; used by assembly and by the damped-derivative
/// sampling. dof order: (value0, slope0, value1, slope1).
void hermite_values(double s, double h, double out[4]);
void hermite_second_derivatives(double s, double h, double out[4]);

}  // namespace fkv
