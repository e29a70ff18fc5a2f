#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "fkv/evolution.hpp"
#include "fkv/operator.hpp"

namespace fkv {

/// lambda-series of resolvent-norm estimates along the imaginary axis.
struct ResolventSweep {
  std::vector<double> lambdas;  // positive, increasing
  std::vector<double> norms;    // ||(i lambda I - A)^{-1}|| in the M-norm
  std::map<std::string, std::string> meta;
};

/// A fitted power-law exponent with its diagnostics.
struct DecayFit {
  double exponent = 0.0;
  double stderr_ = 0.0;
  double r_squared = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  int n_points = 0;

  /// The fit is quotable as a rate only when the regression is tight.
  bool resolved() const { return r_squared >= 0.98; }
};

/// Maximum real part of the spectrum of M^{-1} L (dense eigensolve).
/// Refuses state dimensions above 2000; shrink the mesh instead.
double spectrum_check(const DiscreteOperator& op);

/// Full dense spectrum, for small operators.
Eigen::VectorXcd dense_spectrum(const DiscreteOperator& op);

/// Smallest undamped eigenfrequency sqrt(min eig(K, Mq)), by inverse power
/// iteration on the mechanical pencil.
double fundamental_frequency(const CoupledSystem& sys);
double fundamental_frequency(const DiscreteOperator& op);

/// The lambda-band in which the discretization represents the continuous
/// resolvent: [10 x fundamental, min over fields of the mesh band limit]
/// (wave: 0.1 pi sqrt(c)/h, beam: 0.1 sqrt(c) (pi/h)^2).
struct ValidityWindow {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};
ValidityWindow validity_window(const CoupledSystem& sys);
ValidityWindow validity_window(const DiscreteOperator& op);

/// ||(i lambda I - A)^{-1}||_M = 1/sigma_min of the M-weighted pencil,
/// computed by shift-inverted power iteration on the normal equations, with
/// a dense complex SVD below dimension 600.
double resolvent_norm(const DiscreteOperator& op, double lambda);

namespace detail {
double resolvent_norm_dense(const DiscreteOperator& op, double lambda);
double resolvent_norm_iterative(const DiscreteOperator& op, double lambda,
                                double tol = 1e-8, int max_iter = 400);
/// Same norm on an explicit (gram, generator) pair; used by basis-invariance
/// tests.
double resolvent_norm_dense_pair(const Eigen::MatrixXd& gram,
                                 const Eigen::MatrixXd& generator,
                                 double lambda);
}  // namespace detail

struct SweepOptions {
  int n_points = 14;
  bool refine_peaks = true;  // climb to the local maximum near each sample
  int threads = 0;           // 0: FKV_NUM_THREADS or hardware default
};

/// Log-spaced sweep of resolvent norms over [lambda_lo, lambda_hi] and the
/// least-squares slope of log||R|| against log(lambda). Requires at least 8
/// points.
std::pair<ResolventSweep, DecayFit> sweep_and_fit(const DiscreteOperator& op,
                                                  double lambda_lo,
                                                  double lambda_hi,
                                                  const SweepOptions& options);

/// Least-squares slope of log E against log t over the final `tail_fraction`
/// of the trace samples; returns the decay exponent (-slope). Refuses empty,
/// short or non-positive tails.
DecayFit decay_fit(const EnergyTrace& trace, double tail_fraction);

/// Straight-line fit helper on (log x, log y); exposed for tests.
DecayFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fkv
