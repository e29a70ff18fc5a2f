#include "fkv/evolution.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>

#include "fkv/errors.hpp"
#include "fkv/xi_kernels.hpp"

namespace fkv {

InitialProfile profile_from_string(const std::string& name) {
  if (name == "smooth-bump") return InitialProfile::SmoothBump;
  if (name == "low-mode") return InitialProfile::LowMode;
  if (name == "random-smooth") return InitialProfile::RandomSmooth;
  throw DomainError("unknown initial profile '" + name +
                    "' (expected smooth-bump, low-mode or random-smooth)");
}

std::string to_string(InitialProfile p) {
  switch (p) {
    case InitialProfile::SmoothBump: return "smooth-bump";
    case InitialProfile::LowMode: return "low-mode";
    case InitialProfile::RandomSmooth: return "random-smooth";
  }
  return "?";
}

EnergyTrace EnergyTrace::log_thinned(int per_decade, double t_min) const {
  EnergyTrace out;
  out.meta = meta;
  double next_log = std::log10(std::max(t_min, 1e-300));
  const double step = 1.0 / per_decade;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_min) continue;
    if (std::log10(times[i]) + 1e-12 < next_log) continue;
    out.times.push_back(times[i]);
    out.energies.push_back(energies[i]);
    out.dissipations.push_back(dissipations[i]);
    out.dissipated.push_back(dissipated[i]);
    next_log = std::log10(times[i]) + step;
  }
  return out;
}

MidpointStepper::MidpointStepper(const DiscreteOperator& op, double dt)
    : op_(&op), dt_(dt), tau_(0.5 * dt) {
  if (!(dt > 0.0)) throw DomainError("MidpointStepper: dt must be > 0");

  const int n_xi = op.n_xi;
  decay_.resize(n_xi);
  gain_.resize(n_xi);
  out_w_.resize(n_xi);
  mid_w_.resize(n_xi);
  double s1 = 0.0;
  for (int k = 0; k < n_xi; ++k) {
    const double denom = 1.0 + tau_ * op.a_k[k];
    decay_[k] = (1.0 - tau_ * op.a_k[k]) / denom;
    gain_[k] = tau_ * op.mu_k[k] / denom;
    out_w_[k] = op.w_line[k] * op.mu_k[k];
    mid_w_[k] = out_w_[k] * decay_[k];
    s1 += op.w_line[k] * op.mu_k[k] * op.mu_k[k] / denom;
  }

  const int n_q = op.n_q;
  rho_sqrt_d_.resize(n_q);
  rho_d_s1_.resize(n_q);
  for (int j = 0; j < n_q; ++j) {
    rho_sqrt_d_[j] = op.sys.qp_weight[j] * op.sys.qp_sqrt_d[j];
    rho_d_s1_[j] = op.sys.qp_weight[j] * op.sys.qp_sqrt_d[j] *
                   op.sys.qp_sqrt_d[j] * s1;
  }

  // H = Mq + tau^2 (K + kappa D^T diag(rho d s1) D); SPD for any dt.
  Eigen::SparseMatrix<double> H =
      op.sys.mass + tau_ * tau_ * op.sys.stiffness;
  if (n_q > 0) {
    Eigen::SparseMatrix<double> scaled = op.sys.damped_derivative;
    for (int col = 0; col < scaled.outerSize(); ++col)
      for (Eigen::SparseMatrix<double>::InnerIterator it(scaled, col); it; ++it)
        it.valueRef() *= rho_d_s1_[it.row()];
    H += tau_ * tau_ * op.params.kappa *
         Eigen::SparseMatrix<double>(op.sys.damped_derivative.transpose() *
                                     scaled);
  }
  reduced_ = H;
  reduced_llt_.compute(reduced_);
  if (reduced_llt_.info() != Eigen::Success)
    throw NumericalError("MidpointStepper: reduced system is not SPD");
}

void MidpointStepper::step(StateVector& x) const {
  const DiscreteOperator& op = *op_;
  const int n_q = op.n_q;

  Eigen::VectorXd rhs = op.sys.mass * x.p;
  rhs.noalias() -= 2.0 * tau_ * (op.sys.stiffness * x.q);
  rhs.noalias() -= tau_ * tau_ * (op.sys.stiffness * x.p);

  Eigen::VectorXd dp;
  if (n_q > 0) {
    dp = op.sys.damped_derivative * x.p;
    Eigen::VectorXd load(n_q);
    for (int j = 0; j < n_q; ++j) {
      const double out = kernels::weighted_sum(out_w_.data(),
                                               x.omega.col(j).data(), op.n_xi);
      const double mid = kernels::weighted_sum(mid_w_.data(),
                                               x.omega.col(j).data(), op.n_xi);
      load[j] = rho_sqrt_d_[j] * (out + mid) + tau_ * rho_d_s1_[j] * dp[j];
    }
    rhs.noalias() -=
        tau_ * op.params.kappa * (op.sys.damped_derivative.transpose() * load);
  }

  Eigen::VectorXd p_new = reduced_llt_.solve(rhs);
  Eigen::VectorXd p_sum = x.p + p_new;
  x.q.noalias() += tau_ * p_sum;
  if (n_q > 0) {
    Eigen::VectorXd dsum = op.sys.damped_derivative * p_sum;
    for (int j = 0; j < n_q; ++j)
      kernels::diag_axpby(x.omega.col(j).data(), decay_.data(), gain_.data(),
                          op.sys.qp_sqrt_d[j] * dsum[j], op.n_xi);
  }
  x.p = std::move(p_new);
}

StateVector step_midpoint(const DiscreteOperator& op, const StateVector& x,
                          double dt) {
  MidpointStepper stepper(op, dt);
  StateVector out = x;
  stepper.step(out);
  return out;
}

EnergyTrace simulate(const DiscreteOperator& op, const StateVector& x0,
                     double T, double dt, int sample_every) {
  if (!(T > 0.0)) throw DomainError("simulate: T must be > 0");
  if (sample_every < 1) throw DomainError("simulate: sample_every must be >= 1");
  if (x0.omega.size() > 0 && x0.omega.cwiseAbs().maxCoeff() != 0.0)
    throw DomainError("simulate: initial omega must vanish");

  MidpointStepper stepper(op, dt);
  StateVector x = x0;
  const long n_steps = std::lround(T / dt);

  EnergyTrace trace;
  trace.meta["dt"] = std::to_string(dt);
  trace.meta["T"] = std::to_string(T);
  double cumulative = 0.0;
  double diss_prev = dissipation(op, x);
  trace.times.push_back(0.0);
  trace.energies.push_back(energy(op, x));
  trace.dissipations.push_back(diss_prev);
  trace.dissipated.push_back(0.0);

  for (long s = 1; s <= n_steps; ++s) {
    stepper.step(x);
    const double diss = dissipation(op, x);
    cumulative += dt * 0.5 * (diss_prev + diss);
    diss_prev = diss;
    if (s % sample_every == 0 || s == n_steps) {
      trace.times.push_back(s * dt);
      trace.energies.push_back(energy(op, x));
      trace.dissipations.push_back(diss);
      trace.dissipated.push_back(cumulative);
    }
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Initial data.
// ---------------------------------------------------------------------------

namespace {

double bump(double r) {
  if (std::abs(r) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r * r));
}

double bump_prime(double r) {
  if (std::abs(r) >= 1.0) return 0.0;
  const double d = 1.0 - r * r;
  return bump(r) * (-2.0 * r / (d * d));
}

// Interpolate a smooth profile into one field (values and, for Hermite,
// slopes at the nodes).
void interpolate_field(const FieldLayout& layout,
                       const std::vector<double>& nodes,
                       const std::function<double(double)>& f,
                       const std::function<double(double)>& fprime,
                       Eigen::VectorXd& target) {
  const int per = dofs_per_node(layout.kind);
  for (int node = 0; node < layout.n_nodes; ++node) {
    const int g0 = layout.dof_to_global[node * per];
    if (g0 >= 0) target[g0] = f(nodes[node]);
    if (per == 2) {
      const int g1 = layout.dof_to_global[node * per + 1];
      if (g1 >= 0) target[g1] = fprime(nodes[node]);
    }
  }
}

struct ModalBasis {
  Eigen::VectorXd frequencies;  // lambda_n = sqrt(mu_n)
  Eigen::MatrixXd modes;        // M-orthonormal columns
};

ModalBasis modal_basis(const DiscreteOperator& op) {
  Eigen::MatrixXd K(op.sys.stiffness);
  Eigen::MatrixXd M(op.sys.mass);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(K, M);
  if (solver.info() != Eigen::Success)
    throw NumericalError("modal_basis: generalized eigensolve failed");
  ModalBasis basis;
  basis.frequencies = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  basis.modes = solver.eigenvectors();
  return basis;
}

void normalize_energy(const DiscreteOperator& op, StateVector& x) {
  const double e = energy(op, x);
  if (e > 0.0) {
    const double s = 1.0 / std::sqrt(e);
    x.q *= s;
    x.p *= s;
  }
}

}  // namespace

StateVector make_initial_data(const DiscreteOperator& op, InitialProfile profile,
                              unsigned seed) {
  StateVector x = op.zero_state();
  const ModelSpec& spec = op.spec;

  switch (profile) {
    case InitialProfile::SmoothBump: {
      // Support clear of every constrained end; for the coupled models the
      // bump straddles the interface so both fields carry energy.
      const double center = spec.has_left_field() ? 0.0 : 0.5 * spec.L;
      const double width = spec.has_left_field() ? 0.55 * spec.L : 0.32 * spec.L;
      auto f = [&](double xx) { return bump((xx - center) / width); };
      auto fp = [&](double xx) { return bump_prime((xx - center) / width) / width; };
      if (spec.has_left_field())
        interpolate_field(op.sys.left, op.sys.mesh.nodes_left, f, fp, x.q);
      interpolate_field(op.sys.right, op.sys.mesh.nodes_right, f, fp, x.q);
      if (spec.has_left_field())
        interpolate_field(op.sys.left, op.sys.mesh.nodes_left, f, fp, x.p);
      interpolate_field(op.sys.right, op.sys.mesh.nodes_right, f, fp, x.p);
      break;
    }
    case InitialProfile::LowMode: {
      const ModalBasis basis = modal_basis(op);
      x.q = basis.modes.col(0);
      x.p.setZero();
      break;
    }
    case InitialProfile::RandomSmooth: {
      const ModalBasis basis = modal_basis(op);
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<int> sign(0, 1);
      const int n_modes = static_cast<int>(basis.frequencies.size());
      x.q.setZero();
      x.p.setZero();
      for (int mode = 0; mode < n_modes; ++mode) {
        const double lam = std::max(basis.frequencies[mode], 1e-12);
        // Modal energy ~ lambda^{-2} / (n+1): the borderline profile for the
        // polynomial decay rates.
        const double amp = 1.0 / (lam * lam * (mode + 1.0));
        const double disp = std::sqrt(amp) / lam * (sign(rng) ? 1.0 : -1.0);
        const double vel = std::sqrt(amp) * (sign(rng) ? 1.0 : -1.0);
        x.q += disp * basis.modes.col(mode);
        x.p += vel * basis.modes.col(mode);
      }
      break;
    }
  }
  normalize_energy(op, x);
  return x;
}

}  // namespace fkv
