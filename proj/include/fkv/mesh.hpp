#pragma once

#include <string>
#include <vector>

namespace fkv {

/// The five coupled systems. The damped field always occupies (0, L); the
/// undamped partner (absent for EBB) occupies (-L, 0).
enum class Model { EBBW, WW, WEBB, EBB, EBBEBB };

Model model_from_string(const std::string& name);
std::string to_string(Model m);

struct ModelSpec {
  Model model = Model::WW;
  double a = 1.0;   // stiffness of the paper's u-field
  double b = 1.0;   // stiffness of the paper's y-field
  double L = 1.0;   // half-length
  double l0 = 0.25; // damping interval (l0, l1) inside the damped subdomain
  double l1 = 0.5;
  double d0 = 1.0;  // damping strength

  void validate() const;  // throws DomainError on violated invariants

  /// True when the damped field is the beam (WEBB, EBB, EBBEBB); the damped
  /// wave models (EBBW, WW) damp through u_x, the beam models through y_xx.
  bool damped_is_beam() const {
    return model == Model::WEBB || model == Model::EBB || model == Model::EBBEBB;
  }
  bool has_left_field() const { return model != Model::EBB; }

  /// Stiffness coefficient of the damped (right) field: a for the damped
  /// wave models, b otherwise.
  double damped_coefficient() const { return damped_is_beam() ? b : a; }
  /// Stiffness coefficient of the undamped (left) field.
  double left_coefficient() const { return damped_is_beam() ? a : b; }
};

/// 1D mesh fitted to the damping interval: l0 and l1 coincide with nodes of
/// the right subdomain so d(x) is constant on every element.
struct SpatialMesh {
  std::vector<double> nodes_left;   // (-L, 0]; empty for EBB
  std::vector<double> nodes_right;  // [0, L]
  int l0_index = -1;                // nodes_right[l0_index] == l0
  int l1_index = -1;

  int n_left() const {
    return nodes_left.empty() ? 0 : static_cast<int>(nodes_left.size()) - 1;
  }
  int n_right() const { return static_cast<int>(nodes_right.size()) - 1; }
};

/// Builds the fitted mesh. n_left is ignored for EBB. Element counts in the
/// three right-side chunks [0,l0], [l0,l1], [l1,L] are proportional to chunk
/// length with at least one element each.
SpatialMesh make_mesh(const ModelSpec& spec, int n_left, int n_right);

}  // namespace fkv
