#pragma once

#include <Eigen/SparseCholesky>
#include <map>
#include <string>
#include <vector>

#include "fkv/operator.hpp"

namespace fkv {

enum class InitialProfile { SmoothBump, LowMode, RandomSmooth };

InitialProfile profile_from_string(const std::string& name);
std::string to_string(InitialProfile p);

/// Sampled energy history of one simulation. `dissipated` is the running
/// trapezoidal integral of the dissipation rate, accumulated every step, so
/// the balance E(0) - E(t) ~ dissipated(t) can be checked at any sample.
struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> energies;
  std::vector<double> dissipations;  // instantaneous rate
  std::vector<double> dissipated;    // cumulative integral
  std::map<std::string, std::string> meta;

  std::size_t size() const { return times.size(); }

  /// Subsample to at most `per_decade` samples per decade of t on
  /// [t_min, end]; used before tail fitting on long horizons.
  EnergyTrace log_thinned(int per_decade, double t_min) const;
};

/// One implicit-midpoint step: (M - dt/2 L) x+ = (M + dt/2 L) x.
/// The omega block is diagonal in xi, so it is eliminated exactly and only a
/// mechanical system of size n_dof is factorized (once per dt). Energy never
/// increases: E(x+) - E(x) = -dt * dissipation((x + x+)/2) exactly.
class MidpointStepper {
 public:
  MidpointStepper(const DiscreteOperator& op, double dt);

  void step(StateVector& x) const;
  double dt() const { return dt_; }

 private:
  const DiscreteOperator* op_;
  double dt_, tau_;
  Eigen::VectorXd decay_, gain_, out_w_, mid_w_;  // xi-axis coefficients
  Eigen::SparseMatrix<double> reduced_;           // H = Mq + tau^2 K + coupling
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> reduced_llt_;
  Eigen::VectorXd rho_sqrt_d_, rho_d_s1_;
};

/// Convenience wrapper around a single step.
StateVector step_midpoint(const DiscreteOperator& op, const StateVector& x,
                          double dt);

/// Integrates from x0 (whose omega must vanish, matching the zero initial
/// condition of the diffusive field) to time T, recording every
/// `sample_every` steps.
EnergyTrace simulate(const DiscreteOperator& op, const StateVector& x0,
                     double T, double dt, int sample_every);

/// Compatible initial data with omega = 0 and unit energy. SmoothBump is a
/// compactly supported C-infinity profile vanishing near the constrained
/// ends; LowMode is the fundamental undamped mode; RandomSmooth is a seeded
/// random modal combination whose energy spectrum follows the borderline
/// smoothness profile lambda_n^{-2} n^{-1}.
StateVector make_initial_data(const DiscreteOperator& op, InitialProfile profile,
                              unsigned seed = 1234);

}  // namespace fkv
