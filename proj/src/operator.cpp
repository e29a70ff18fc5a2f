#include "fkv/operator.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <cstdio>

#include "fkv/errors.hpp"
#include "fkv/xi_kernels.hpp"

namespace fkv {

StateVector DiscreteOperator::zero_state() const {
  StateVector x;
  x.q = Eigen::VectorXd::Zero(n_dof);
  x.p = Eigen::VectorXd::Zero(n_dof);
  x.omega = Eigen::MatrixXd::Zero(n_xi, n_q);
  return x;
}

Eigen::VectorXd DiscreteOperator::pack(const StateVector& x) const {
  Eigen::VectorXd v(dim);
  v.segment(0, n_dof) = x.q;
  v.segment(n_dof, n_dof) = x.p;
  if (n_q > 0)
    v.segment(2 * n_dof, n_q * n_xi) =
        Eigen::Map<const Eigen::VectorXd>(x.omega.data(), n_q * n_xi);
  return v;
}

StateVector DiscreteOperator::unpack(const Eigen::VectorXd& v) const {
  StateVector x = zero_state();
  x.q = v.segment(0, n_dof);
  x.p = v.segment(n_dof, n_dof);
  if (n_q > 0)
    x.omega = Eigen::Map<const Eigen::MatrixXd>(v.data() + 2 * n_dof, n_xi, n_q);
  return x;
}

DiscreteOperator assemble_generator(const ModelSpec& spec,
                                    const SpatialMesh& mesh,
                                    const XiGrid& grid,
                                    const FractionalParams& params,
                                    double d0_override) {
  if (!(params.eta > 0.0))
    throw DomainError("assemble_generator: the decay hypotheses require eta > 0");
  if (grid.count() < 2)
    throw AssemblyError("assemble_generator: xi grid has fewer than 2 nodes");

  DiscreteOperator op{spec, params, grid,
                      build_coupled_system(spec, mesh, d0_override)};
  op.n_dof = op.sys.n_dof;
  op.n_q = op.sys.n_q();
  op.n_xi = grid.count();
  op.dim = 2 * op.n_dof + op.n_q * op.n_xi;

  op.mu_k.resize(op.n_xi);
  op.a_k.resize(op.n_xi);
  op.w_line.resize(op.n_xi);
  for (int k = 0; k < op.n_xi; ++k) {
    op.mu_k[k] = mu(grid.nodes[k], params.alpha);
    op.a_k[k] = grid.nodes[k] * grid.nodes[k] + params.eta;
    op.w_line[k] = 2.0 * grid.weights[k];
  }
  op.energy_w = params.kappa * op.w_line;
  op.diss_w = op.energy_w.cwiseProduct(op.a_k);

  const int n = op.n_dof;
  const int m = op.n_q * op.n_xi;
  const auto& K = op.sys.stiffness;
  const auto& Mq = op.sys.mass;
  const auto& D = op.sys.damped_derivative;

  // Coupling factors. G maps omega to the velocity-equation load; F maps
  // velocity to the omega forcing. G = F^T scaled by the omega Gram weights,
  // which is what makes the discrete dissipation identity exact.
  std::vector<Eigen::Triplet<double>> g_t, f_t;
  for (int col = 0; col < D.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(D, col); it; ++it) {
      const int j = static_cast<int>(it.row());
      const int i = static_cast<int>(it.col());
      const double rho = op.sys.qp_weight[j];
      const double sqd = op.sys.qp_sqrt_d[j];
      for (int k = 0; k < op.n_xi; ++k) {
        const double g = params.kappa * it.value() * rho * sqd *
                         op.w_line[k] * op.mu_k[k];
        g_t.emplace_back(i, j * op.n_xi + k, g);
        f_t.emplace_back(j * op.n_xi + k, i, op.mu_k[k] * sqd * it.value());
      }
    }
  op.coupling.resize(n, m);
  op.omega_forcing.resize(m, n);
  op.coupling.setFromTriplets(g_t.begin(), g_t.end());
  op.omega_forcing.setFromTriplets(f_t.begin(), f_t.end());

  // Gram matrix blkdiag(K, Mq, C) and generator L.
  std::vector<Eigen::Triplet<double>> gram_t, l_t;
  for (int col = 0; col < K.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(K, col); it; ++it) {
      gram_t.emplace_back(it.row(), it.col(), it.value());
      l_t.emplace_back(it.row(), n + it.col(), it.value());       // qdot = p
      l_t.emplace_back(n + it.row(), it.col(), -it.value());      // -K q
    }
  for (int col = 0; col < Mq.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(Mq, col); it; ++it)
      gram_t.emplace_back(n + it.row(), n + it.col(), it.value());

  for (int j = 0; j < op.n_q; ++j)
    for (int k = 0; k < op.n_xi; ++k) {
      const int idx = 2 * n + j * op.n_xi + k;
      const double c = params.kappa * op.sys.qp_weight[j] * op.w_line[k];
      gram_t.emplace_back(idx, idx, c);
      l_t.emplace_back(idx, idx, -c * op.a_k[k]);
    }
  for (int col = 0; col < op.coupling.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(op.coupling, col); it; ++it)
      l_t.emplace_back(n + it.row(), 2 * n + it.col(), -it.value());
  for (int col = 0; col < op.omega_forcing.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(op.omega_forcing, col); it;
         ++it) {
      const int j = static_cast<int>(it.row()) / op.n_xi;
      const int k = static_cast<int>(it.row()) % op.n_xi;
      const double c = params.kappa * op.sys.qp_weight[j] * op.w_line[k];
      l_t.emplace_back(2 * n + it.row(), n + it.col(), c * it.value());
    }

  op.gram.resize(op.dim, op.dim);
  op.generator.resize(op.dim, op.dim);
  op.gram.setFromTriplets(gram_t.begin(), gram_t.end());
  op.generator.setFromTriplets(l_t.begin(), l_t.end());
  return op;
}

double energy(const DiscreteOperator& op, const StateVector& x) {
  if (x.q.size() != op.n_dof || x.p.size() != op.n_dof ||
      x.omega.rows() != op.n_xi || x.omega.cols() != op.n_q)
    throw DomainError("energy: state sized inconsistently with the operator");
  double e = 0.5 * x.q.dot(op.sys.stiffness * x.q) +
             0.5 * x.p.dot(op.sys.mass * x.p);
  for (int j = 0; j < op.n_q; ++j)
    e += 0.5 * op.sys.qp_weight[j] *
         kernels::weighted_sumsq(op.energy_w.data(), x.omega.col(j).data(),
                                 op.n_xi);
  return e;
}

double dissipation(const DiscreteOperator& op, const StateVector& x) {
  if (x.omega.rows() != op.n_xi || x.omega.cols() != op.n_q)
    throw DomainError("dissipation: state sized inconsistently with the operator");
  double d = 0.0;
  for (int j = 0; j < op.n_q; ++j)
    d += op.sys.qp_weight[j] *
         kernels::weighted_sumsq(op.diss_w.data(), x.omega.col(j).data(),
                                 op.n_xi);
  return d;
}

double generator_form(const DiscreteOperator& op, const StateVector& x) {
  const Eigen::VectorXd v = op.pack(x);
  return v.dot(op.generator * v);
}

Eigen::MatrixXd dense_generator(const DiscreteOperator& op) {
  const int n = op.n_dof;
  const int m = op.n_q * op.n_xi;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(op.dim, op.dim);

  // q rows: qdot = p.
  A.block(0, n, n, n).setIdentity();

  // p rows: pdot = Mq^{-1} (-K q - G omega).
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> mq(op.sys.mass);
  if (mq.info() != Eigen::Success)
    throw NumericalError("dense_generator: mass factorization failed");
  A.block(n, 0, n, n) = mq.solve(Eigen::MatrixXd(-op.sys.stiffness));
  if (m > 0) {
    A.block(n, 2 * n, n, m) = mq.solve(Eigen::MatrixXd(-op.coupling));
    // omega rows: omegadot = -a_k omega + F p.
    A.block(2 * n, n, m, n) = Eigen::MatrixXd(op.omega_forcing);
    for (int j = 0; j < op.n_q; ++j)
      for (int k = 0; k < op.n_xi; ++k) {
        const int idx = 2 * n + j * op.n_xi + k;
        A(idx, idx) = -op.a_k[k];
      }
  }
  return A;
}

std::string state_csv(const DiscreteOperator& op, const StateVector& x) {
  // Paper naming: the damped (right) field is u for the damped-wave models
  // and y for the beam-damped ones; its velocity is v resp. z.
  const bool wave_damped = !op.spec.damped_is_beam();
  const char* right_disp = wave_damped ? "u" : "y";
  const char* right_vel = wave_damped ? "v" : "z";
  const char* left_disp = wave_damped ? "y" : "u";
  const char* left_vel = wave_damped ? "z" : "v";

  std::string out = "field,index,value\n";
  char line[96];
  auto emit = [&](const char* field, int index, double value) {
    std::snprintf(line, sizeof(line), "%s,%d,%.17g\n", field, index, value);
    out += line;
  };
  for (int i = 0; i < static_cast<int>(op.sys.left.dof_to_global.size()); ++i) {
    const int g = op.sys.left.dof_to_global[i];
    if (g >= 0) {
      emit(left_disp, i, x.q[g]);
      emit(left_vel, i, x.p[g]);
    }
  }
  for (int i = 0; i < static_cast<int>(op.sys.right.dof_to_global.size()); ++i) {
    const int g = op.sys.right.dof_to_global[i];
    if (g >= 0) {
      emit(right_disp, i, x.q[g]);
      emit(right_vel, i, x.p[g]);
    }
  }
  for (int j = 0; j < op.n_q; ++j)
    for (int k = 0; k < op.n_xi; ++k)
      emit("omega", j * op.n_xi + k, x.omega(k, j));
  return out;
}

}  // namespace fkv
