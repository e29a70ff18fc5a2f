#include "fkv/elements.hpp"

#include <cmath>

#include "fkv/errors.hpp"

namespace fkv {

namespace {

// 4-point Gauss-Legendre on [0,1]; exact through degree 7, enough for
// products of cubic shape functions.
constexpr double kGauss4X[4] = {0.069431844202973713, 0.33000947820757187,
                                0.66999052179242813, 0.93056815579702623};
constexpr double kGauss4W[4] = {0.17392742256872692, 0.32607257743127305,
                                0.32607257743127305, 0.17392742256872692};

void check_elements(const std::vector<double>& nodes) {
  if (nodes.size() < 2)
    throw AssemblyError("field assembly needs at least 1 element");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i] > nodes[i - 1]))
      throw AssemblyError("degenerate element at index " + std::to_string(i - 1));
}

}  // namespace

void hermite_values(double s, double h, double out[4]) {
  const double s2 = s * s, s3 = s2 * s;
  out[0] = 1.0 - 3.0 * s2 + 2.0 * s3;
  out[1] = h * (s - 2.0 * s2 + s3);
  out[2] = 3.0 * s2 - 2.0 * s3;
  out[3] = h * (s3 - s2);
}

void hermite_second_derivatives(double s, double h, double out[4]) {
  out[0] = (12.0 * s - 6.0) / (h * h);
  out[1] = (6.0 * s - 4.0) / h;
  out[2] = (6.0 - 12.0 * s) / (h * h);
  out[3] = (6.0 * s - 2.0) / h;
}

FieldBlock assemble_wave_block(const std::vector<double>& nodes,
                               double coefficient) {
  check_elements(nodes);
  FieldBlock block;
  block.kind = FieldKind::WaveP1;
  block.n_nodes = static_cast<int>(nodes.size());

  std::vector<Eigen::Triplet<double>> mass_t, stiff_t;
  for (std::size_t e = 0; e + 1 < nodes.size(); ++e) {
    const double h = nodes[e + 1] - nodes[e];
    const int i = static_cast<int>(e);
    const double m[2][2] = {{h / 3.0, h / 6.0}, {h / 6.0, h / 3.0}};
    const double k = coefficient / h;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        mass_t.emplace_back(i + r, i + c, m[r][c]);
        stiff_t.emplace_back(i + r, i + c, (r == c ? k : -k));
      }
  }
  block.mass.resize(block.n_nodes, block.n_nodes);
  block.stiffness.resize(block.n_nodes, block.n_nodes);
  block.mass.setFromTriplets(mass_t.begin(), mass_t.end());
  block.stiffness.setFromTriplets(stiff_t.begin(), stiff_t.end());
  return block;
}

FieldBlock assemble_beam_block(const std::vector<double>& nodes,
                               double coefficient) {
  check_elements(nodes);
  FieldBlock block;
  block.kind = FieldKind::BeamHermite;
  block.n_nodes = static_cast<int>(nodes.size());
  const int n_dofs = 2 * block.n_nodes;

  std::vector<Eigen::Triplet<double>> mass_t, stiff_t;
  for (std::size_t e = 0; e + 1 < nodes.size(); ++e) {
    const double h = nodes[e + 1] - nodes[e];
    double m[4][4] = {}, k[4][4] = {};
    double N[4], B[4];
    for (int g = 0; g < 4; ++g) {
      const double s = kGauss4X[g];
      const double w = kGauss4W[g] * h;  // dx = h ds
      hermite_values(s, h, N);
      hermite_second_derivatives(s, h, B);
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
          m[r][c] += w * N[r] * N[c];
          k[r][c] += w * coefficient * B[r] * B[c];
        }
    }
    const int base = 2 * static_cast<int>(e);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        mass_t.emplace_back(base + r, base + c, m[r][c]);
        stiff_t.emplace_back(base + r, base + c, k[r][c]);
      }
  }
  block.mass.resize(n_dofs, n_dofs);
  block.stiffness.resize(n_dofs, n_dofs);
  block.mass.setFromTriplets(mass_t.begin(), mass_t.end());
  block.stiffness.setFromTriplets(stiff_t.begin(), stiff_t.end());
  return block;
}

std::vector<double> damping_indicator(const ModelSpec& spec,
                                      const SpatialMesh& mesh) {
  spec.validate();
  if (mesh.l0_index < 0 || mesh.l1_index <= mesh.l0_index ||
      mesh.l1_index >= static_cast<int>(mesh.nodes_right.size()))
    throw AssemblyError("damping_indicator: mesh is not fitted to (l0, l1)");
  const double tol = 1e-12 * spec.L;
  if (std::abs(mesh.nodes_right[mesh.l0_index] - spec.l0) > tol ||
      std::abs(mesh.nodes_right[mesh.l1_index] - spec.l1) > tol)
    throw AssemblyError("damping_indicator: l0/l1 do not coincide with mesh nodes");

  std::vector<double> d(mesh.n_right(), 0.0);
  for (int e = mesh.l0_index; e < mesh.l1_index; ++e) d[e] = spec.d0;
  return d;
}

}  // namespace fkv
