#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

// Fractional-order constants, the diffusive kernel mu(xi), the xi-axis
// quadrature grid, and the family of kernel integrals that admit closed
// forms or serve as quadrature oracles.

namespace fkv {

/// kappa(alpha) = sin(alpha*pi)/pi. Throws DomainError outside (0,1).
double kappa(double alpha);

/// mu(xi) = |xi|^{(2 alpha - 1)/2}, the diffusive kernel weight. Even in xi.
/// xi == 0 with alpha < 1/2 is a caller error (the kernel blows up there);
/// quadrature grids never place a node at zero.
double mu(double xi, double alpha);

/// Fractional order, exponential shift, and the derived normalizer.
struct FractionalParams {
  double alpha;  // in (0,1)
  double eta;    // >= 0; evolution and resolvent experiments require > 0
  double kappa;  // sin(alpha*pi)/pi, always derived from alpha

  FractionalParams() : FractionalParams(0.5, 1.0) {}
  FractionalParams(double alpha_, double eta_);
};

/// Truncated quadrature of the xi-axis. Nodes live on (0, xi_max); any
/// integral of an even integrand over the whole line is evaluated as
/// 2 * sum_k w_k f(xi_k).
struct XiGrid {
  std::vector<double> nodes;    // strictly increasing, > 0
  std::vector<double> weights;  // > 0, same length
  double xi_max = 0.0;
  double probe_error = 0.0;  // achieved relative error on the I1 probe

  int count() const { return static_cast<int>(nodes.size()); }

  /// Two-column "node,weight" text block for debugging.
  std::string to_csv() const;
};

/// Geometrically graded grid with composite-midpoint weights in log(xi),
/// spanning (xi_min, xi_max) with xi_min chosen from the lower tail bound of
/// the I1 probe integrand. The grid must reproduce the closed form of I1 to
/// relative error <= quad_tol, otherwise a ResolutionError is thrown naming
/// the achieved error.
XiGrid build_xi_grid(const FractionalParams& params, int n_xi, double xi_max,
                     double quad_tol = 1e-6);

/// (xi_min, xi_max) such that both truncation tails of the I1 probe stay
/// below quad_tol/10, from the analytic tail bounds of the kernel.
std::pair<double, double> default_xi_bounds(double alpha, double eta,
                                            double quad_tol = 1e-6);

// ---------------------------------------------------------------------------
// Kernel integrals.
//
// Each tag selects an even integrand over the xi-axis, parametrized by
// (lambda, eta, alpha) as applicable. I13Squared / I14Squared are the
// defining integrals whose square roots carry the closed forms; I12Explicit
// is the closed-form variant of I12 (the plain I12 tag is the lambda^2 form
// that appears alongside I7/I8/I11).
// ---------------------------------------------------------------------------

enum class IntegralTag {
  I1,
  I2,
  I3,
  I7,
  I8,
  I11,
  I12,
  I12Explicit,
  I13Squared,
  I14Squared,
  I15,
};

std::string to_string(IntegralTag tag);

struct IntegralId {
  IntegralTag tag;
  double lambda = 0.0;
  double eta = 0.0;
  double alpha = 0.5;

  /// Throws DomainError when the parameters leave the tag's validity region.
  void validate() const;

  /// Integrand value at xi > 0 (the even half; validate() first).
  double integrand(double xi) const;
};

/// 2 * sum_k w_k f(xi_k) for the even integrand selected by the tag.
double quad_integral(const IntegralId& id, const XiGrid& grid);

// Closed forms.

/// I1(eta, alpha) = kappa(alpha) * Int_R |xi|^{2a-1} / (1 + xi^2 + eta) dxi
///                = (1 + eta)^{alpha - 1}.
double closed_i1(double eta, double alpha);

/// I12(lambda, eta, alpha) = Int_R |xi|^{a+1/2} / (|l| + xi^2 + eta)^2 dxi
///                         = c1(alpha) * (|lambda| + eta)^{alpha/2 - 5/4}.
double closed_i12(double lambda, double eta, double alpha);

/// I13(lambda, eta) = (Int_R (|l| + xi^2 + eta)^{-2} dxi)^{1/2}
///                  = sqrt(pi/2) * (|lambda| + eta)^{-3/4}.
double closed_i13(double lambda, double eta);

/// I14(lambda, eta) = (Int_R xi^2 (|l| + xi^2 + eta)^{-4} dxi)^{1/2}
///                  = (sqrt(pi)/4) * (|lambda| + eta)^{-5/4}.
double closed_i14(double lambda, double eta);

/// c1(alpha) = Int_1^inf (y-1)^{alpha/2 - 1/4} / y^2 dy, evaluated once by
/// adaptive quadrature to 1e-10 and cached per alpha. Thread-safe.
double c1_constant(double alpha);

/// Adaptive Gauss-Kronrod (G7/K15) integration on [a, b]. Throws
/// NumericalError if the tolerance cannot be met.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, double abs_tol = 0.0);

}  // namespace fkv
