#include "fkv/assembly.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>

#include "fkv/errors.hpp"

namespace fkv {

namespace {

FieldKind left_kind(const ModelSpec& spec) {
  switch (spec.model) {
    case Model::EBBW:
    case Model::EBBEBB: return FieldKind::BeamHermite;
    default: return FieldKind::WaveP1;
  }
}

FieldKind right_kind(const ModelSpec& spec) {
  return spec.damped_is_beam() ? FieldKind::BeamHermite : FieldKind::WaveP1;
}

void add_reduced(std::vector<Eigen::Triplet<double>>& out,
                 const Eigen::SparseMatrix<double>& m,
                 const std::vector<int>& dof_to_global) {
  for (int col = 0; col < m.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, col); it; ++it) {
      const int gi = dof_to_global[it.row()];
      const int gj = dof_to_global[it.col()];
      if (gi >= 0 && gj >= 0) out.emplace_back(gi, gj, it.value());
    }
}

}  // namespace

BoundaryConditions essential_conditions(const ModelSpec& spec,
                                        const FieldBlock& left,
                                        const FieldBlock& right) {
  BoundaryConditions bc;
  const int last_right = right.n_nodes - 1;
  switch (spec.model) {
    case Model::EBBW:
      // Beam clamped at -L, wave pinned at L; interface conditions natural.
      bc.constrained_left = {left.dof(0, 0), left.dof(0, 1)};
      bc.constrained_right = {right.dof(last_right, 0)};
      break;
    case Model::WW:
      bc.constrained_left = {left.dof(0, 0)};
      bc.constrained_right = {right.dof(last_right, 0)};
      break;
    case Model::WEBB:
      // Wave pinned at -L, beam clamped at L.
      bc.constrained_left = {left.dof(0, 0)};
      bc.constrained_right = {right.dof(last_right, 0), right.dof(last_right, 1)};
      break;
    case Model::EBB:
      // Cantilever: clamped at 0, free at L (free end removes nothing).
      bc.constrained_right = {right.dof(0, 0), right.dof(0, 1)};
      break;
    case Model::EBBEBB:
      bc.constrained_left = {left.dof(0, 0), left.dof(0, 1)};
      bc.constrained_right = {right.dof(last_right, 0), right.dof(last_right, 1)};
      break;
  }
  return bc;
}

CoupledSystem build_coupled_system(const ModelSpec& spec,
                                   const SpatialMesh& mesh,
                                   double d0_override) {
  spec.validate();
  const double d0 = d0_override >= 0.0 ? d0_override : spec.d0;

  CoupledSystem sys;
  sys.spec = spec;
  sys.mesh = mesh;

  FieldBlock right_block =
      right_kind(spec) == FieldKind::BeamHermite
          ? assemble_beam_block(mesh.nodes_right, spec.damped_coefficient())
          : assemble_wave_block(mesh.nodes_right, spec.damped_coefficient());
  FieldBlock left_block;
  if (spec.has_left_field()) {
    left_block = left_kind(spec) == FieldKind::BeamHermite
                     ? assemble_beam_block(mesh.nodes_left, spec.left_coefficient())
                     : assemble_wave_block(mesh.nodes_left, spec.left_coefficient());
  }

  const BoundaryConditions bc = essential_conditions(spec, left_block, right_block);

  // Global numbering: left retained DOFs first, then right retained DOFs,
  // with the two x = 0 value DOFs merged into one unknown (continuity is
  // essential; the flux balance then holds weakly over the merged row).
  sys.left.kind = left_block.kind;
  sys.left.n_nodes = left_block.n_nodes;
  sys.left.dof_to_global.assign(left_block.n_dofs(), -2);
  sys.right.kind = right_block.kind;
  sys.right.n_nodes = right_block.n_nodes;
  sys.right.dof_to_global.assign(right_block.n_dofs(), -2);
  for (int dof : bc.constrained_left) sys.left.dof_to_global[dof] = -1;
  for (int dof : bc.constrained_right) sys.right.dof_to_global[dof] = -1;

  int next = 0;
  for (int i = 0; i < left_block.n_dofs(); ++i)
    if (sys.left.dof_to_global[i] == -2) sys.left.dof_to_global[i] = next++;
  if (spec.has_left_field()) {
    // couple_transmission: the value DOFs of both fields at x = 0 become one
    // unknown. Slope DOFs at the interface stay independent.
    const int left_iface = left_block.dof(left_block.n_nodes - 1, 0);
    const int right_iface = right_block.dof(0, 0);
    sys.interface_dof = sys.left.dof_to_global[left_iface];
    if (sys.interface_dof < 0)
      throw AssemblyError("interface value DOF is constrained; cannot merge");
    sys.right.dof_to_global[right_iface] = sys.interface_dof;
  } else {
    std::cerr << "note: model EBB has a single field; transmission coupling "
                 "is a no-op\n";
  }
  for (int i = 0; i < right_block.n_dofs(); ++i)
    if (sys.right.dof_to_global[i] == -2) sys.right.dof_to_global[i] = next++;
  sys.n_dof = next;

  std::vector<Eigen::Triplet<double>> mass_t, stiff_t;
  if (spec.has_left_field()) {
    add_reduced(mass_t, left_block.mass, sys.left.dof_to_global);
    add_reduced(stiff_t, left_block.stiffness, sys.left.dof_to_global);
  }
  add_reduced(mass_t, right_block.mass, sys.right.dof_to_global);
  add_reduced(stiff_t, right_block.stiffness, sys.right.dof_to_global);
  sys.mass.resize(sys.n_dof, sys.n_dof);
  sys.stiffness.resize(sys.n_dof, sys.n_dof);
  sys.mass.setFromTriplets(mass_t.begin(), mass_t.end());
  sys.stiffness.setFromTriplets(stiff_t.begin(), stiff_t.end());

  // Damped-region quadrature and the derivative sampling matrix D:
  // (D q)_j = u_x(x_j) for wave damping, y_xx(x_j) for beam damping.
  std::vector<double> d = damping_indicator(spec, mesh);
  if (d0_override >= 0.0)
    for (double& v : d) v = (v > 0.0 ? d0_override : 0.0);

  std::vector<Eigen::Triplet<double>> deriv_t;
  const bool beam_damping = spec.damped_is_beam();
  for (int e = 0; e < mesh.n_right(); ++e) {
    if (!(d[e] > 0.0)) continue;
    const double x0 = mesh.nodes_right[e];
    const double h = mesh.nodes_right[e + 1] - x0;
    if (beam_damping) {
      // 2-point Gauss: exact for products of the (linear) curvatures.
      const double gs[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
      for (double s : gs) {
        const int j = static_cast<int>(sys.qp_x.size());
        sys.qp_x.push_back(x0 + s * h);
        sys.qp_weight.push_back(0.5 * h);
        sys.qp_sqrt_d.push_back(std::sqrt(d[e]));
        double B[4];
        hermite_second_derivatives(s, h, B);
        for (int c = 0; c < 4; ++c) {
          const int g = sys.right.dof_to_global[2 * e + c];
          if (g >= 0) deriv_t.emplace_back(j, g, B[c]);
        }
      }
    } else {
      // u_x is constant on the element; the midpoint carries the full weight.
      const int j = static_cast<int>(sys.qp_x.size());
      sys.qp_x.push_back(x0 + 0.5 * h);
      sys.qp_weight.push_back(h);
      sys.qp_sqrt_d.push_back(std::sqrt(d[e]));
      const int g0 = sys.right.dof_to_global[e];
      const int g1 = sys.right.dof_to_global[e + 1];
      if (g0 >= 0) deriv_t.emplace_back(j, g0, -1.0 / h);
      if (g1 >= 0) deriv_t.emplace_back(j, g1, 1.0 / h);
    }
  }
  sys.damped_derivative.resize(sys.n_q(), sys.n_dof);
  sys.damped_derivative.setFromTriplets(deriv_t.begin(), deriv_t.end());

  return sys;
}

std::string coordinate_text(const Eigen::SparseMatrix<double>& m) {
  std::string out;
  char line[96];
  for (int col = 0; col < m.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, col); it; ++it) {
      std::snprintf(line, sizeof(line), "%ld,%ld,%.17g\n",
                    static_cast<long>(it.row()), static_cast<long>(it.col()),
                    it.value());
      out += line;
    }
  return out;
}

}  // namespace fkv
