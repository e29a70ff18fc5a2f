#include "fkv/frequency.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <future>
#include <limits>
#include <random>
#include <thread>

#include "fkv/errors.hpp"

namespace fkv {

using Complex = std::complex<double>;
using SparseC = Eigen::SparseMatrix<Complex>;

namespace {

// Spectrum of M^{-1} L via the similar matrix C = R^{-T} L R^{-1} with
// M = R^T R. C is normal in the conservative limit (exactly skew), which
// keeps the computed real parts at round-off instead of amplifying them
// through a non-normal balance.
Eigen::VectorXcd spectrum_m_orthonormal(const DiscreteOperator& op) {
  Eigen::MatrixXd M(op.gram);
  Eigen::MatrixXd L(op.generator);
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success)
    throw NumericalError("dense_spectrum: Gram factorization failed");
  const Eigen::MatrixXd R = llt.matrixU();
  Eigen::MatrixXd C = R.transpose()
                          .triangularView<Eigen::Lower>()
                          .solve(L)
                          .transpose();
  C = R.transpose().triangularView<Eigen::Lower>().solve(C).transpose();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(C, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw NumericalError("dense_spectrum: eigensolve failed");
  return solver.eigenvalues();
}

}  // namespace

double spectrum_check(const DiscreteOperator& op) {
  if (op.dim > 2000)
    throw DomainError(
        "spectrum_check: state dimension " + std::to_string(op.dim) +
        " exceeds 2000; shrink the mesh or xi grid for dense eigensolves");
  return spectrum_m_orthonormal(op).real().maxCoeff();
}

Eigen::VectorXcd dense_spectrum(const DiscreteOperator& op) {
  if (op.dim > 2000)
    throw DomainError("dense_spectrum: state dimension exceeds 2000");
  return spectrum_m_orthonormal(op);
}

double fundamental_frequency(const CoupledSystem& sys) {
  // Inverse power iteration on K phi = mu Mq phi.
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> kllt(sys.stiffness);
  if (kllt.info() != Eigen::Success)
    throw NumericalError("fundamental_frequency: stiffness not SPD");
  Eigen::VectorXd v = Eigen::VectorXd::Ones(sys.n_dof);
  v.normalize();
  double mu_prev = 0.0;
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd w = kllt.solve(sys.mass * v);
    const double norm = w.norm();
    if (!(norm > 0.0))
      throw NumericalError("fundamental_frequency: iteration collapsed");
    v = w / norm;
    const double mu = v.dot(sys.stiffness * v) / v.dot(sys.mass * v);
    if (it > 3 && std::abs(mu - mu_prev) <= 1e-10 * mu) return std::sqrt(mu);
    mu_prev = mu;
  }
  return std::sqrt(mu_prev);
}

double fundamental_frequency(const DiscreteOperator& op) {
  return fundamental_frequency(op.sys);
}

ValidityWindow validity_window(const CoupledSystem& sys) {
  auto band_limit = [](FieldKind kind, const std::vector<double>& nodes,
                       double coef) {
    double h_max = 0.0;
    for (std::size_t i = 1; i < nodes.size(); ++i)
      h_max = std::max(h_max, nodes[i] - nodes[i - 1]);
    const double k_pi_h = M_PI / h_max;
    if (kind == FieldKind::WaveP1) return 0.1 * std::sqrt(coef) * k_pi_h;
    return 0.1 * std::sqrt(coef) * k_pi_h * k_pi_h;
  };

  ValidityWindow win;
  win.lambda_max = band_limit(sys.right.kind, sys.mesh.nodes_right,
                              sys.spec.damped_coefficient());
  if (sys.spec.has_left_field())
    win.lambda_max =
        std::min(win.lambda_max, band_limit(sys.left.kind, sys.mesh.nodes_left,
                                            sys.spec.left_coefficient()));
  win.lambda_min = 10.0 * fundamental_frequency(sys);
  return win;
}

ValidityWindow validity_window(const DiscreteOperator& op) {
  return validity_window(op.sys);
}

// ---------------------------------------------------------------------------
// Resolvent norms.
//
// With M = R^T R, ||(i l I - A)^{-1}||_M = ||R (i l M - L)^{-1} R^T||_2.
// ---------------------------------------------------------------------------

namespace {

// Cholesky-style application of the Gram factor R per state block.
struct GramFactor {
  const DiscreteOperator* op;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> k_llt;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> m_llt;
  Eigen::VectorXd sqrt_c;

  explicit GramFactor(const DiscreteOperator& o) : op(&o) {
    k_llt.compute(o.sys.stiffness);
    m_llt.compute(o.sys.mass);
    if (k_llt.info() != Eigen::Success || m_llt.info() != Eigen::Success)
      throw NumericalError("resolvent_norm: Gram factorization failed");
    sqrt_c.resize(o.n_q * o.n_xi);
    for (int j = 0; j < o.n_q; ++j)
      for (int k = 0; k < o.n_xi; ++k)
        sqrt_c[j * o.n_xi + k] = std::sqrt(o.params.kappa *
                                           o.sys.qp_weight[j] * o.w_line[k]);
  }

  // R v = blk(Lk^T Pk, Lm^T Pm, sqrt(c)) v with P the LLT permutations.
  Eigen::VectorXd apply_R_real(const Eigen::VectorXd& v) const {
    const int n = op->n_dof;
    Eigen::VectorXd out(v.size());
    out.segment(0, n) =
        k_llt.matrixU() * (k_llt.permutationP() * v.segment(0, n).eval());
    out.segment(n, n) =
        m_llt.matrixU() * (m_llt.permutationP() * v.segment(n, n).eval());
    const int m = static_cast<int>(sqrt_c.size());
    if (m > 0)
      out.segment(2 * n, m) = sqrt_c.cwiseProduct(v.segment(2 * n, m));
    return out;
  }

  // R^T v = blk(Pk^T Lk, Pm^T Lm, sqrt(c)) v.
  Eigen::VectorXd apply_Rt_real(const Eigen::VectorXd& v) const {
    const int n = op->n_dof;
    Eigen::VectorXd out(v.size());
    out.segment(0, n) =
        k_llt.permutationPinv() * (k_llt.matrixL() * v.segment(0, n)).eval();
    out.segment(n, n) =
        m_llt.permutationPinv() * (m_llt.matrixL() * v.segment(n, n)).eval();
    const int m = static_cast<int>(sqrt_c.size());
    if (m > 0)
      out.segment(2 * n, m) = sqrt_c.cwiseProduct(v.segment(2 * n, m));
    return out;
  }

  Eigen::VectorXcd apply_R(const Eigen::VectorXcd& v) const {
    return apply_R_real(v.real()) +
           Complex(0, 1) * apply_R_real(v.imag()).eval();
  }

  Eigen::VectorXcd apply_Rt(const Eigen::VectorXcd& v) const {
    return apply_Rt_real(v.real()) +
           Complex(0, 1) * apply_Rt_real(v.imag()).eval();
  }
};

SparseC shifted_pencil(const DiscreteOperator& op, double lambda) {
  SparseC S = (Complex(0.0, lambda) * op.gram.cast<Complex>() -
               op.generator.cast<Complex>())
                  .pruned();
  S.makeCompressed();
  return S;
}

Eigen::MatrixXd dense_gram_factor(const Eigen::MatrixXd& gram) {
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw NumericalError("resolvent_norm: dense Gram factorization failed");
  return llt.matrixU();  // gram = R^T R with R upper triangular
}

}  // namespace

namespace detail {

double resolvent_norm_dense_pair(const Eigen::MatrixXd& gram,
                                 const Eigen::MatrixXd& generator,
                                 double lambda) {
  const int dim = static_cast<int>(gram.rows());
  const Eigen::MatrixXd R = dense_gram_factor(gram);
  Eigen::MatrixXcd S = Complex(0.0, lambda) * gram.cast<Complex>() -
                       generator.cast<Complex>();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(S);
  Eigen::MatrixXcd Z =
      R.cast<Complex>() * lu.solve(R.transpose().cast<Complex>());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Z);
  (void)dim;
  return svd.singularValues()(0);
}

double resolvent_norm_dense(const DiscreteOperator& op, double lambda) {
  return resolvent_norm_dense_pair(Eigen::MatrixXd(op.gram),
                                   Eigen::MatrixXd(op.generator), lambda);
}

double resolvent_norm_iterative(const DiscreteOperator& op, double lambda,
                                double tol, int max_iter) {
  const GramFactor gram(op);
  const SparseC S = shifted_pencil(op, lambda);
  Eigen::SparseLU<SparseC> lu;
  lu.compute(S);
  if (lu.info() != Eigen::Success) return std::numeric_limits<double>::infinity();

  // Power iteration on Z^* Z with Z = R S^{-1} R^T; deterministic start.
  std::mt19937_64 rng(20240517u ^ static_cast<unsigned long long>(
                                      std::llround(lambda * 1e6)));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXcd x(op.dim);
  for (int i = 0; i < op.dim; ++i) x[i] = Complex(unit(rng), unit(rng));
  x.normalize();

  double sigma = 0.0, sigma_prev = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXcd zx = gram.apply_R(lu.solve(gram.apply_Rt(x)));
    sigma = zx.norm();
    if (!std::isfinite(sigma)) return std::numeric_limits<double>::infinity();
    // Z^* y = R S^{-*} R^T y via the adjoint factorization.
    Eigen::VectorXcd y = gram.apply_R(lu.adjoint().solve(gram.apply_Rt(zx)));
    const double ynorm = y.norm();
    if (!(ynorm > 0.0)) break;
    x = y / ynorm;
    if (it >= 2 && std::abs(sigma - sigma_prev) <= tol * sigma) return sigma;
    sigma_prev = sigma;
  }
  // Slow convergence: the estimate is a lower bound on the norm; report it
  // if it at least stabilized loosely, otherwise complain.
  if (sigma_prev > 0.0 && std::abs(sigma - sigma_prev) <= 1e-3 * sigma)
    return sigma;
  throw NumericalError(
      "resolvent_norm: power iteration did not converge at lambda = " +
      std::to_string(lambda) + " (last relative change " +
      std::to_string(std::abs(sigma - sigma_prev) / std::max(sigma, 1e-300)) +
      ")");
}

}  // namespace detail

double resolvent_norm(const DiscreteOperator& op, double lambda) {
  if (!(op.params.eta > 0.0))
    throw DomainError("resolvent_norm: eta > 0 required");
  if (op.dim <= 600) return detail::resolvent_norm_dense(op, lambda);
  return detail::resolvent_norm_iterative(op, lambda);
}

// ---------------------------------------------------------------------------
// Sweeps and fits.
// ---------------------------------------------------------------------------

DecayFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  if (n < 2 || y.size() != x.size())
    throw DomainError("fit_loglog: need at least two samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw DomainError("fit_loglog: samples must be strictly positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly; syy += ly * ly;
  }
  const double det = n * sxx - sx * sx;
  if (!(std::abs(det) > 0.0)) throw DomainError("fit_loglog: degenerate abscissae");
  const double slope = (n * sxy - sx * sy) / det;
  const double intercept = (sy - slope * sx) / n;

  double ss_res = 0.0, ss_tot = 0.0;
  const double ymean = sy / n;
  for (int i = 0; i < n; ++i) {
    const double ly = std::log(y[i]);
    const double fit = intercept + slope * std::log(x[i]);
    ss_res += (ly - fit) * (ly - fit);
    ss_tot += (ly - ymean) * (ly - ymean);
  }
  DecayFit out;
  out.exponent = slope;
  out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  out.n_points = n;
  out.window_lo = x.front();
  out.window_hi = x.back();
  if (n > 2 && det > 0.0)
    out.stderr_ = std::sqrt(std::max(ss_res, 0.0) / (n - 2) * n / det);
  return out;
}

namespace {

int sweep_thread_count(const SweepOptions& options) {
  if (options.threads > 0) return options.threads;
  if (const char* env = std::getenv("FKV_NUM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

// Golden-section climb to the local maximum of log||R|| around seed.
std::pair<double, double> refine_peak(const DiscreteOperator& op, double seed,
                                      double log_half_gap) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = std::log(seed) - log_half_gap;
  double hi = std::log(seed) + log_half_gap;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = resolvent_norm(op, std::exp(x1));
  double f2 = resolvent_norm(op, std::exp(x2));
  for (int it = 0; it < 8; ++it) {
    if (f1 < f2) {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = resolvent_norm(op, std::exp(x2));
    } else {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = resolvent_norm(op, std::exp(x1));
    }
  }
  return f1 > f2 ? std::make_pair(std::exp(x1), f1)
                 : std::make_pair(std::exp(x2), f2);
}

}  // namespace

std::pair<ResolventSweep, DecayFit> sweep_and_fit(const DiscreteOperator& op,
                                                  double lambda_lo,
                                                  double lambda_hi,
                                                  const SweepOptions& options) {
  if (options.n_points < 8)
    throw DomainError("sweep_and_fit: need at least 8 points for a usable fit");
  if (!(0.0 < lambda_lo && lambda_lo < lambda_hi))
    throw DomainError("sweep_and_fit: require 0 < lambda_lo < lambda_hi");

  const int n = options.n_points;
  std::vector<double> seeds(n);
  const double step = std::log(lambda_hi / lambda_lo) / (n - 1);
  for (int i = 0; i < n; ++i) seeds[i] = lambda_lo * std::exp(i * step);

  std::vector<double> lambdas(n), norms(n);
  const int n_threads = std::min(sweep_thread_count(options), n);
  std::vector<std::future<void>> futures;
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      if (options.refine_peaks) {
        auto [lam, nrm] = refine_peak(op, seeds[i], 0.5 * step);
        lambdas[i] = lam;
        norms[i] = nrm;
      } else {
        lambdas[i] = seeds[i];
        norms[i] = resolvent_norm(op, seeds[i]);
      }
    }
  };
  futures.reserve(n_threads - 1);
  for (int t = 1; t < n_threads; ++t)
    futures.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : futures) f.get();

  ResolventSweep sweep;
  sweep.lambdas = lambdas;
  sweep.norms = norms;
  DecayFit fit = fit_loglog(lambdas, norms);
  return {sweep, fit};
}

DecayFit decay_fit(const EnergyTrace& trace, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw DomainError("decay_fit: tail_fraction must lie in (0, 1]");
  const std::size_t total = trace.size();
  std::size_t start = total - static_cast<std::size_t>(tail_fraction * total);
  std::vector<double> t, e;
  for (std::size_t i = start; i < total; ++i) {
    if (trace.times[i] <= 0.0) continue;
    if (!(trace.energies[i] > 0.0))
      throw NumericalError("decay_fit: non-positive energy in the tail window");
    t.push_back(trace.times[i]);
    e.push_back(trace.energies[i]);
  }
  if (t.size() < 8)
    throw DomainError("decay_fit: fewer than 8 usable samples in the tail");
  DecayFit fit = fit_loglog(t, e);
  fit.exponent = -fit.exponent;
  return fit;
}

}  // namespace fkv
