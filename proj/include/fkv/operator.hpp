#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>

#include "fkv/assembly.hpp"
#include "fkv/fractional.hpp"

namespace fkv {

/// Semi-discrete state (q, p, omega): displacement and velocity coefficients
/// on the retained DOFs, and the diffusive field sampled at the damped-region
/// quadrature points. omega is stored n_xi x n_q so each quadrature point's
/// xi-stack is one contiguous column.
struct StateVector {
  Eigen::VectorXd q;
  Eigen::VectorXd p;
  Eigen::MatrixXd omega;
};

/// The semi-discrete generator of the augmented system in the form
///   gram * xdot = generator * x,
/// where gram = blkdiag(K, M_q, C) is the Gram matrix of the energy inner
/// product (C diagonal with entries kappa * rho_j * W_k) and the coupling
/// blocks of `generator` are exact transposes of one another, which makes
/// Re<AX, X>_M = -dissipation(X) hold to round-off.
struct DiscreteOperator {
  ModelSpec spec;
  FractionalParams params;
  XiGrid grid;
  CoupledSystem sys;

  int n_dof = 0;
  int n_q = 0;
  int n_xi = 0;
  int dim = 0;  // 2 n_dof + n_q * n_xi

  // xi-axis coefficient vectors (length n_xi)
  Eigen::VectorXd mu_k;      // mu(xi_k)
  Eigen::VectorXd a_k;       // xi_k^2 + eta
  Eigen::VectorXd w_line;    // 2 w_k, the whole-line quadrature weights
  Eigen::VectorXd energy_w;  // kappa * w_line
  Eigen::VectorXd diss_w;    // kappa * w_line * a_k

  Eigen::SparseMatrix<double> gram;       // M, SPD block diagonal
  Eigen::SparseMatrix<double> generator;  // L with M xdot = L x

  // The two coupling factors: velocity load G (n_dof x n_q*n_xi) with
  // M_q pdot = -K q - G omega, and the omega forcing F (n_q*n_xi x n_dof)
  // with omegadot = -a_k omega + F p.
  Eigen::SparseMatrix<double> coupling;       // G
  Eigen::SparseMatrix<double> omega_forcing;  // F

  int omega_index(int j, int k) const { return 2 * n_dof + j * n_xi + k; }

  StateVector zero_state() const;
  Eigen::VectorXd pack(const StateVector& x) const;
  StateVector unpack(const Eigen::VectorXd& v) const;
};

/// Galerkin semi-discretization of the augmented system. Throws DomainError
/// for eta <= 0 (the decay theorems' hypothesis) and AssemblyError on
/// mesh/grid mismatches. d0_override >= 0 replaces the damping strength; the
/// value 0 yields the conservative (skew) limit with no omega block.
DiscreteOperator assemble_generator(const ModelSpec& spec,
                                    const SpatialMesh& mesh,
                                    const XiGrid& grid,
                                    const FractionalParams& params,
                                    double d0_override = -1.0);

/// E(X) = (1/2) ||X||_M^2: kinetic + elastic + diffusive energy.
double energy(const DiscreteOperator& op, const StateVector& x);

/// kappa * sum_jk rho_j W_k (xi_k^2 + eta) |omega_jk|^2 >= 0. The energy
/// satisfies dE/dt = -dissipation along trajectories.
double dissipation(const DiscreteOperator& op, const StateVector& x);

/// x^T L x = Re<AX, X>_M for real states.
double generator_form(const DiscreteOperator& op, const StateVector& x);

/// Dense M^{-1} L for spectrum checks and small oracles.
Eigen::MatrixXd dense_generator(const DiscreteOperator& op);

/// Labeled "field,index,value" snapshot of a state.
std::string state_csv(const DiscreteOperator& op, const StateVector& x);

}  // namespace fkv
