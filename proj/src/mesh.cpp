#include "fkv/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "fkv/errors.hpp"

namespace fkv {

Model model_from_string(const std::string& name) {
  if (name == "EBBW") return Model::EBBW;
  if (name == "WW") return Model::WW;
  if (name == "WEBB") return Model::WEBB;
  if (name == "EBB") return Model::EBB;
  if (name == "EBBEBB") return Model::EBBEBB;
  throw DomainError("unknown model '" + name +
                    "' (expected EBBW, WW, WEBB, EBB or EBBEBB)");
}

std::string to_string(Model m) {
  switch (m) {
    case Model::EBBW: return "EBBW";
    case Model::WW: return "WW";
    case Model::WEBB: return "WEBB";
    case Model::EBB: return "EBB";
    case Model::EBBEBB: return "EBBEBB";
  }
  return "?";
}

void ModelSpec::validate() const {
  if (!(a > 0.0)) throw DomainError("ModelSpec: a > 0 required");
  if (!(b > 0.0)) throw DomainError("ModelSpec: b > 0 required");
  if (!(L > 0.0)) throw DomainError("ModelSpec: L > 0 required");
  if (!(d0 > 0.0)) throw DomainError("ModelSpec: d0 > 0 required");
  if (!(0.0 < l0 && l0 < l1 && l1 < L))
    throw DomainError("ModelSpec: 0 < l0 < l1 < L required");
}

namespace {

void fill_uniform(std::vector<double>& nodes, double x0, double x1, int n) {
  for (int i = 1; i <= n; ++i)
    nodes.push_back(x0 + (x1 - x0) * static_cast<double>(i) / n);
}

}  // namespace

SpatialMesh make_mesh(const ModelSpec& spec, int n_left, int n_right) {
  spec.validate();
  if (n_right < 3)
    throw DomainError("make_mesh: n_right must be >= 3 to fit the damping interval");
  if (spec.has_left_field() && n_left < 2)
    throw DomainError("make_mesh: n_left must be >= 2");

  SpatialMesh mesh;
  if (spec.has_left_field()) {
    mesh.nodes_left.push_back(-spec.L);
    fill_uniform(mesh.nodes_left, -spec.L, 0.0, n_left);
    mesh.nodes_left.back() = 0.0;
  }

  // Distribute right-side elements over [0,l0], [l0,l1], [l1,L] in
  // proportion to length, at least one element per chunk.
  const double len0 = spec.l0, len1 = spec.l1 - spec.l0, len2 = spec.L - spec.l1;
  int n0 = std::max(1, static_cast<int>(std::lround(n_right * len0 / spec.L)));
  int n1 = std::max(1, static_cast<int>(std::lround(n_right * len1 / spec.L)));
  int n2 = n_right - n0 - n1;
  if (n2 < 1) {
    const int deficit = 1 - n2;
    if (n0 > n1 && n0 > deficit) n0 -= deficit;
    else if (n1 > deficit) n1 -= deficit;
    else throw DomainError("make_mesh: n_right too small for the damping interval");
    n2 = 1;
  }

  mesh.nodes_right.push_back(0.0);
  fill_uniform(mesh.nodes_right, 0.0, spec.l0, n0);
  mesh.l0_index = static_cast<int>(mesh.nodes_right.size()) - 1;
  mesh.nodes_right[mesh.l0_index] = spec.l0;
  fill_uniform(mesh.nodes_right, spec.l0, spec.l1, n1);
  mesh.l1_index = static_cast<int>(mesh.nodes_right.size()) - 1;
  mesh.nodes_right[mesh.l1_index] = spec.l1;
  fill_uniform(mesh.nodes_right, spec.l1, spec.L, n2);
  mesh.nodes_right.back() = spec.L;

  return mesh;
}

}  // namespace fkv
