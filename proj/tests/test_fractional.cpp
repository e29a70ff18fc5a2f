#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fkv/errors.hpp"
#include "fkv/fractional.hpp"
#include "oracles.hpp"

using namespace fkv;

namespace {
constexpr double pi = std::numbers::pi;

XiGrid verification_grid(double alpha, double eta, int n = 256,
                         double tol = 1e-7) {
  return build_xi_grid(FractionalParams(alpha, eta), n,
                       default_xi_bounds(alpha, eta, tol).second, tol);
}
}  // namespace

TEST_CASE("kappa values and symmetry") {
  CHECK(kappa(0.5) == doctest::Approx(1.0 / pi).epsilon(1e-14));
  CHECK(kappa(0.25) == doctest::Approx(0.22507907903927651).epsilon(1e-12));
  for (double a : {0.1, 0.25, 0.37, 0.49}) {
    CHECK(kappa(a) == doctest::Approx(kappa(1.0 - a)).epsilon(1e-15));
    CHECK(kappa(a) > 0.0);
  }
  CHECK_THROWS_AS(kappa(0.0), DomainError);
  CHECK_THROWS_AS(kappa(1.0), DomainError);
  CHECK_THROWS_AS(kappa(-0.3), DomainError);
}

TEST_CASE("mu kernel weight") {
  for (double a : {0.1, 0.5, 0.9}) CHECK(mu(1.0, a) == doctest::Approx(1.0));
  for (double xi : {0.01, 0.5, 3.0, 100.0})
    CHECK(mu(xi, 0.5) == doctest::Approx(1.0));
  CHECK(mu(4.0, 0.75) == doctest::Approx(std::pow(4.0, 0.25)).epsilon(1e-14));
  CHECK(mu(4.0, 0.75) == doctest::Approx(1.4142135623730951).epsilon(1e-12));
  CHECK(mu(-2.0, 0.3) == doctest::Approx(mu(2.0, 0.3)));  // even
  CHECK_THROWS_AS(mu(0.0, 0.3), DomainError);
}

TEST_CASE("closed form of I1 against the quadrature oracle") {
  CHECK(closed_i1(0.0, 0.3) == doctest::Approx(1.0));
  CHECK(closed_i1(0.0, 0.8) == doctest::Approx(1.0));

  // Oracle built from the defining integral before trusting the closed form.
  CHECK(oracles::i1(1.0, 0.5) ==
        doctest::Approx(0.70710678118654752).epsilon(1e-9));
  CHECK(closed_i1(1.0, 0.5) ==
        doctest::Approx(0.70710678118654752).epsilon(1e-14));
  CHECK(oracles::i1(3.0, 0.25) ==
        doctest::Approx(0.35355339059327384).epsilon(1e-9));
  CHECK(closed_i1(3.0, 0.25) ==
        doctest::Approx(0.35355339059327384).epsilon(1e-14));

  for (double a : {0.25, 0.5, 0.75})
    for (double eta : {0.1, 1.0, 10.0})
      CHECK(closed_i1(eta, a) ==
            doctest::Approx(oracles::i1(eta, a)).epsilon(1e-9));
}

TEST_CASE("closed_i1 normalization invariant") {
  for (double a : {0.05, 0.25, 0.5, 0.75, 0.95})
    for (double eta : {0.0, 0.1, 1.0, 10.0, 100.0})
      CHECK(closed_i1(eta, a) * std::pow(1.0 + eta, 1.0 - a) ==
            doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("c1 and the closed form of I12") {
  // alpha = 1/2 collapses c1 to Int_1^inf y^{-2} dy = 1.
  CHECK(c1_constant(0.5) == doctest::Approx(1.0).epsilon(1e-10));
  // Beta-function route as a second check: c1 = G(a/2+3/4) G(5/4-a/2).
  for (double a : {0.25, 0.5, 0.75}) {
    const double beta = std::exp(std::lgamma(0.5 * a + 0.75) +
                                 std::lgamma(1.25 - 0.5 * a));
    CHECK(c1_constant(a) == doctest::Approx(beta).epsilon(1e-9));
  }

  // Pure power law in (|lambda| + eta).
  const double r = closed_i12(10.0, 1.0, 0.3) / closed_i12(2.0, 0.5, 0.3);
  CHECK(r == doctest::Approx(std::pow(11.0 / 2.5, 0.15 - 1.25)).epsilon(1e-13));

  CHECK(closed_i12(0.0, 1.0, 0.5) ==
        doctest::Approx(c1_constant(0.5)).epsilon(1e-12));
  CHECK(closed_i12(10.0, 1.0, 0.75) ==
        doctest::Approx(oracles::i12_explicit(10.0, 1.0, 0.75)).epsilon(1e-8));
  CHECK(closed_i12(1.0, 0.25, 0.3) ==
        doctest::Approx(oracles::i12_explicit(1.0, 0.25, 0.3)).epsilon(1e-8));
  CHECK_THROWS_AS(closed_i12(1.0, 0.0, 0.5), DomainError);
}

TEST_CASE("closed forms of I13 and I14") {
  CHECK(closed_i13(0.5, 0.5) ==
        doctest::Approx(std::sqrt(pi / 2.0)).epsilon(1e-14));
  CHECK(closed_i13(0.5, 0.5) ==
        doctest::Approx(1.2533141373155003).epsilon(1e-12));
  CHECK(closed_i13(15.0, 1.0) ==
        doctest::Approx(std::sqrt(pi / 2.0) / 8.0).epsilon(1e-13));
  CHECK(closed_i13(5.0, 2.0) ==
        doctest::Approx(oracles::i13(5.0, 2.0)).epsilon(1e-9));

  CHECK(closed_i14(0.25, 0.75) ==
        doctest::Approx(0.25 * std::sqrt(pi)).epsilon(1e-14));
  CHECK(closed_i14(0.25, 0.75) ==
        doctest::Approx(0.44311346272637897).epsilon(1e-12));
  CHECK(closed_i14(15.0, 1.0) ==
        doctest::Approx(0.25 * std::sqrt(pi) / 32.0).epsilon(1e-13));
  CHECK(closed_i14(3.0, 0.5) ==
        doctest::Approx(oracles::i14(3.0, 0.5)).epsilon(1e-9));
  CHECK_THROWS_AS(closed_i13(1.0, -0.5), DomainError);
  CHECK_THROWS_AS(closed_i14(1.0, 0.0), DomainError);
}

TEST_CASE("grid construction and the accuracy contract") {
  FractionalParams params(0.5, 1.0);
  const double xi_max = default_xi_bounds(0.5, 1.0, 1e-6).second;

  XiGrid grid = build_xi_grid(params, 200, xi_max, 1e-6);
  CHECK(grid.probe_error <= 1e-6);
  CHECK(grid.count() == 200);
  for (int i = 0; i < grid.count(); ++i) {
    CHECK(grid.nodes[i] > 0.0);
    CHECK(grid.weights[i] > 0.0);
    if (i > 0) CHECK(grid.nodes[i] > grid.nodes[i - 1]);
    CHECK(grid.nodes[i] <= grid.xi_max);
  }

  // Refinement tightens the probe error (non-increasing on this kernel).
  const double e16 = build_xi_grid(params, 16, xi_max, 1.0).probe_error;
  const double e32 = build_xi_grid(params, 32, xi_max, 1.0).probe_error;
  const double e64 = build_xi_grid(params, 64, xi_max, 1.0).probe_error;
  CHECK(e32 <= e16);
  CHECK(e64 <= e32);

  CHECK_THROWS_AS(build_xi_grid(params, 2, xi_max, 1e-6), ResolutionError);
  CHECK_THROWS_AS(build_xi_grid(params, 1, xi_max, 1e-6), DomainError);
  CHECK_THROWS_AS(build_xi_grid(params, 64, 0.5, 1e-6), DomainError);

  // Serialization: two columns, one line per node plus header.
  const std::string csv = grid.to_csv();
  CHECK(csv.rfind("node,weight\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == grid.count() + 1);
}

TEST_CASE("quad_integral against closed forms and refinement") {
  XiGrid grid = verification_grid(0.5, 0.0);
  CHECK(quad_integral({IntegralTag::I1, 0.0, 0.0, 0.5}, grid) ==
        doctest::Approx(1.0).epsilon(1e-6));

  // I13 squared at |lambda| + eta = 1 integrates to pi/2.
  XiGrid grid2 = verification_grid(0.5, 0.5);
  CHECK(quad_integral({IntegralTag::I13Squared, 0.5, 0.5, 0.5}, grid2) ==
        doctest::Approx(pi / 2.0).epsilon(1e-6));

  // I15 has no closed form: refinement self-consistency.
  FractionalParams params(0.5, 1.0);
  const double xi_max = default_xi_bounds(0.5, 1.0, 1e-7).second;
  const double v1 = quad_integral({IntegralTag::I15, 0.0, 1.0, 0.5},
                                  build_xi_grid(params, 128, xi_max, 1e-4));
  const double v2 = quad_integral({IntegralTag::I15, 0.0, 1.0, 0.5},
                                  build_xi_grid(params, 256, xi_max, 1e-6));
  const double v3 = quad_integral({IntegralTag::I15, 0.0, 1.0, 0.5},
                                  build_xi_grid(params, 512, xi_max, 1e-6));
  CHECK(v1 > 0.0);
  CHECK(std::abs(v3 - v2) / v3 < 1e-6);
  CHECK(std::abs(v3 - v2) <= std::abs(v2 - v1) + 1e-12);
}

TEST_CASE("quad_integral is linear in the weights") {
  XiGrid grid = verification_grid(0.3, 1.0, 64, 1e-3);
  const IntegralId id{IntegralTag::I2, 0.0, 1.0, 0.3};
  const double base = quad_integral(id, grid);
  XiGrid scaled = grid;
  for (double& w : scaled.weights) w *= 3.0;
  CHECK(quad_integral(id, scaled) ==
        doctest::Approx(3.0 * base).epsilon(1e-15));
}

TEST_CASE("closed forms vs quadrature across the parameter grid") {
  for (double a : {0.25, 0.5, 0.75}) {
    for (double eta : {0.1, 1.0, 10.0}) {
      XiGrid grid = verification_grid(a, eta);
      CHECK(quad_integral({IntegralTag::I1, 0.0, eta, a}, grid) ==
            doctest::Approx(closed_i1(eta, a)).epsilon(1e-6));
      for (double lambda : {0.0, 1.0, 100.0}) {
        CHECK(quad_integral({IntegralTag::I12Explicit, lambda, eta, a}, grid) ==
              doctest::Approx(closed_i12(lambda, eta, a)).epsilon(1e-6));
        CHECK(quad_integral({IntegralTag::I13Squared, lambda, eta, a}, grid) ==
              doctest::Approx(closed_i13(lambda, eta) * closed_i13(lambda, eta))
                  .epsilon(1e-6));
        CHECK(quad_integral({IntegralTag::I14Squared, lambda, eta, a}, grid) ==
              doctest::Approx(closed_i14(lambda, eta) * closed_i14(lambda, eta))
                  .epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("integral values are positive on their validity regions") {
  XiGrid grid = verification_grid(0.6, 0.5, 128, 1e-4);
  for (IntegralTag tag :
       {IntegralTag::I1, IntegralTag::I2, IntegralTag::I3, IntegralTag::I7,
        IntegralTag::I8, IntegralTag::I11, IntegralTag::I12,
        IntegralTag::I12Explicit, IntegralTag::I13Squared,
        IntegralTag::I14Squared, IntegralTag::I15}) {
    IntegralId id{tag, 2.0, 0.5, 0.6};
    if (tag == IntegralTag::I1 || tag == IntegralTag::I2 ||
        tag == IntegralTag::I3 || tag == IntegralTag::I15)
      id.lambda = 0.0;
    CHECK(quad_integral(id, grid) > 0.0);
  }
}

TEST_CASE("validity regions reject bad parameters") {
  CHECK_THROWS_AS((IntegralId{IntegralTag::I1, 0.0, -1.0, 0.5}.validate()),
                  DomainError);
  CHECK_THROWS_AS((IntegralId{IntegralTag::I1, 2.0, 1.0, 0.5}.validate()),
                  DomainError);  // lambda is not a parameter of I1
  CHECK_THROWS_AS((IntegralId{IntegralTag::I15, 0.0, 0.0, 0.5}.validate()),
                  DomainError);
  CHECK_THROWS_AS((IntegralId{IntegralTag::I7, 0.0, 0.0, 0.5}.validate()),
                  DomainError);  // eta = 0 needs lambda != 0
  CHECK_NOTHROW((IntegralId{IntegralTag::I7, 3.0, 0.0, 0.5}.validate()));
  CHECK_THROWS_AS(
      (IntegralId{IntegralTag::I13Squared, 1.0, 0.0, 0.5}.validate()),
      DomainError);
  CHECK_THROWS_AS((IntegralId{IntegralTag::I12, 1.0, 1.0, 1.5}.validate()),
                  DomainError);
}

TEST_CASE("adaptive integrator sanity") {
  const double v =
      integrate_adaptive([](double x) { return std::sin(x); }, 0.0, pi, 1e-12);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(
      integrate_adaptive([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-12),
      NumericalError);
}
