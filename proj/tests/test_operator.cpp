#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "fkv/errors.hpp"
#include "fkv/operator.hpp"

using namespace fkv;

namespace {

const Model kAllModels[] = {Model::EBBW, Model::WW, Model::WEBB, Model::EBB,
                            Model::EBBEBB};

ModelSpec make_spec(Model m) {
  ModelSpec spec;
  spec.model = m;
  spec.a = 1.3;
  spec.b = 0.8;
  spec.L = 1.0;
  spec.l0 = 0.25;
  spec.l1 = 0.5;
  spec.d0 = 2.0;
  return spec;
}

DiscreteOperator make_operator(Model m, double alpha, double eta,
                               int n_left = 6, int n_right = 10, int n_xi = 12,
                               double d0_override = -1.0) {
  ModelSpec spec = make_spec(m);
  SpatialMesh mesh = make_mesh(spec, n_left, n_right);
  FractionalParams params(alpha, eta);
  XiGrid grid = build_xi_grid(params, n_xi, 50.0, 1.0);
  return assemble_generator(spec, mesh, grid, params, d0_override);
}

StateVector random_state(const DiscreteOperator& op, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  StateVector x = op.zero_state();
  for (int i = 0; i < op.n_dof; ++i) {
    x.q[i] = normal(rng);
    x.p[i] = normal(rng);
  }
  for (int j = 0; j < op.n_q; ++j)
    for (int k = 0; k < op.n_xi; ++k) x.omega(k, j) = normal(rng);
  return x;
}

}  // namespace

TEST_CASE("dissipation identity holds to round-off on random states") {
  for (Model m : kAllModels) {
    for (double alpha : {0.3, 0.5, 0.9}) {
      CAPTURE(to_string(m));
      CAPTURE(alpha);
      DiscreteOperator op = make_operator(m, alpha, 1.0);
      for (unsigned seed = 0; seed < 40; ++seed) {
        StateVector x = random_state(op, seed);
        const double form = generator_form(op, x);
        const double diss = dissipation(op, x);
        const double scale = 2.0 * energy(op, x);
        CHECK(form <= 1e-12 * scale);                            // dissipative
        CHECK(std::abs(form + diss) <= 1e-10 * (scale + diss));  // identity
      }
    }
  }
}

TEST_CASE("conservative limit is exactly skew in the energy inner product") {
  for (Model m : kAllModels) {
    CAPTURE(to_string(m));
    DiscreteOperator op = make_operator(m, 0.5, 1.0, 4, 6, 6, 0.0);
    CHECK(op.n_q == 0);
    for (unsigned seed = 0; seed < 20; ++seed) {
      StateVector x = random_state(op, 100 + seed);
      CHECK(std::abs(generator_form(op, x)) <= 1e-12 * 2.0 * energy(op, x));
    }

    // Dense check of ||A + A*||_M via the Cholesky-congruent matrix.
    Eigen::MatrixXd M(op.gram);
    Eigen::MatrixXd A = dense_generator(op);
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    Eigen::MatrixXd R = llt.matrixU();
    Eigen::MatrixXd C = R * A * R.inverse();
    CHECK((C + C.transpose()).norm() < 1e-10 * std::max(1.0, C.norm()));
  }
}

TEST_CASE("energy is the quadratic form of the Gram matrix") {
  DiscreteOperator op = make_operator(Model::WEBB, 0.5, 1.0);
  for (unsigned seed = 0; seed < 10; ++seed) {
    StateVector x = random_state(op, 200 + seed);
    const Eigen::VectorXd v = op.pack(x);
    CHECK(energy(op, x) ==
          doctest::Approx(0.5 * v.dot(op.gram * v)).epsilon(1e-12));
  }
}

TEST_CASE("energy special cases") {
  DiscreteOperator op = make_operator(Model::WW, 0.5, 1.0);
  CHECK(energy(op, op.zero_state()) == 0.0);

  StateVector x = op.zero_state();
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int i = 0; i < op.n_dof; ++i) x.p[i] = normal(rng);
  CHECK(energy(op, x) ==
        doctest::Approx(0.5 * x.p.dot(op.sys.mass * x.p)).epsilon(1e-13));
}

TEST_CASE("dissipation of a single omega entry") {
  DiscreteOperator op = make_operator(Model::EBB, 0.4, 0.7, 0, 9, 8);
  CHECK(dissipation(op, op.zero_state()) == 0.0);

  StateVector x = op.zero_state();
  const int j = 1, k = 3;
  x.omega(k, j) = 2.5;
  const double expected = op.params.kappa * op.w_line[k] *
                          op.sys.qp_weight[j] * op.a_k[k] * 2.5 * 2.5;
  CHECK(dissipation(op, x) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("omega stacks are mutually uncoupled in the generator") {
  DiscreteOperator op = make_operator(Model::WW, 0.5, 1.0, 4, 8, 6);
  const int base = 2 * op.n_dof;
  for (int col = 0; col < op.generator.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(op.generator, col); it;
         ++it) {
      if (it.row() >= base && it.col() >= base)
        CHECK(it.row() == it.col());  // xi-ODEs are diagonal
    }
}

TEST_CASE("energy of interpolated smooth fields converges at second order") {
  // u = sin(pi x / L) on the damped wave of WW, zero elsewhere: elastic
  // energy a/2 Int u_x^2 = a pi^2 / (4 L). Interpolation error ~ h^2.
  ModelSpec spec = make_spec(Model::WW);
  const double exact = 0.25 * spec.a * M_PI * M_PI / spec.L;

  auto discrete_energy = [&](int n) {
    SpatialMesh mesh = make_mesh(spec, n, n);
    FractionalParams params(0.5, 1.0);
    XiGrid grid = build_xi_grid(params, 8, 50.0, 1.0);
    DiscreteOperator op = assemble_generator(spec, mesh, grid, params);
    StateVector x = op.zero_state();
    for (int node = 0; node < op.sys.right.n_nodes; ++node) {
      const int g = op.sys.right.dof_to_global[node];
      if (g >= 0) x.q[g] = std::sin(M_PI * mesh.nodes_right[node] / spec.L);
    }
    return energy(op, x);
  };

  const double e1 = std::abs(discrete_energy(16) - exact);
  const double e2 = std::abs(discrete_energy(32) - exact);
  const double e3 = std::abs(discrete_energy(64) - exact);
  CHECK(std::log2(e1 / e2) > 1.7);
  CHECK(std::log2(e2 / e3) > 1.7);
}

TEST_CASE("assembly rejects bad hypotheses") {
  ModelSpec spec = make_spec(Model::WW);
  SpatialMesh mesh = make_mesh(spec, 4, 8);
  XiGrid grid = build_xi_grid(FractionalParams(0.5, 1.0), 8, 50.0, 1.0);
  CHECK_THROWS_AS(
      assemble_generator(spec, mesh, grid, FractionalParams(0.5, 0.0)),
      DomainError);
  XiGrid empty;
  CHECK_THROWS_AS(
      assemble_generator(spec, mesh, empty, FractionalParams(0.5, 1.0)),
      AssemblyError);
}

TEST_CASE("state snapshots export labeled fields") {
  DiscreteOperator op = make_operator(Model::EBBW, 0.5, 1.0, 3, 6, 4);
  StateVector x = random_state(op, 5);
  const std::string csv = state_csv(op, x);
  CHECK(csv.rfind("field,index,value\n", 0) == 0);
  CHECK(csv.find("\nu,") != std::string::npos);
  CHECK(csv.find("\ny,") != std::string::npos);
  CHECK(csv.find("\nomega,") != std::string::npos);
}
