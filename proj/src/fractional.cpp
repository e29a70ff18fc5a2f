#include "fkv/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "fkv/errors.hpp"
#include "fkv/xi_kernels.hpp"

namespace fkv {

namespace {
constexpr double pi = std::numbers::pi;
}

double kappa(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("kappa: alpha must lie in (0,1), got " + std::to_string(alpha));
  return std::sin(alpha * pi) / pi;
}

double mu(double xi, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("mu: alpha must lie in (0,1), got " + std::to_string(alpha));
  if (xi == 0.0 && alpha < 0.5)
    throw DomainError("mu: xi = 0 is singular for alpha < 1/2");
  return std::pow(std::abs(xi), (2.0 * alpha - 1.0) / 2.0);
}

FractionalParams::FractionalParams(double alpha_, double eta_)
    : alpha(alpha_), eta(eta_), kappa(fkv::kappa(alpha_)) {
  if (!(eta >= 0.0))
    throw DomainError("FractionalParams: eta must be >= 0, got " + std::to_string(eta));
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod (G7/K15).
// ---------------------------------------------------------------------------

namespace {

// QUADPACK qk15 abscissae and weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkResult {
  double value;
  double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double gauss = fc * kWg[3];
  double kron = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double fs = f(c - x) + f(c + x);
    kron += kWgk[j] * fs;
    if (j % 2 == 1) gauss += kWg[j / 2] * fs;
  }
  kron *= h;
  gauss *= h;
  return {kron, std::abs(kron - gauss)};
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, double abs_tol) {
  struct Interval {
    double a, b, value, error;
  };
  GkResult whole = gk15(f, a, b);
  std::vector<Interval> heap{{a, b, whole.value, whole.error}};
  double total = whole.value;
  double total_err = whole.error;
  const int max_intervals = 4000;

  auto tolerance = [&](double v) {
    return std::max(abs_tol, rel_tol * std::abs(v));
  };

  while (total_err > tolerance(total)) {
    if (static_cast<int>(heap.size()) >= max_intervals)
      throw NumericalError("integrate_adaptive: tolerance not met after " +
                           std::to_string(max_intervals) + " subdivisions");
    // Split the interval with the largest error estimate.
    auto worst = std::max_element(
        heap.begin(), heap.end(),
        [](const Interval& p, const Interval& q) { return p.error < q.error; });
    Interval iv = *worst;
    heap.erase(worst);
    const double m = 0.5 * (iv.a + iv.b);
    GkResult left = gk15(f, iv.a, m);
    GkResult right = gk15(f, m, iv.b);
    total += left.value + right.value - iv.value;
    total_err += left.error + right.error - iv.error;
    heap.push_back({iv.a, m, left.value, left.error});
    heap.push_back({m, iv.b, right.value, right.error});
    if (!std::isfinite(total))
      throw NumericalError("integrate_adaptive: non-finite integrand");
  }
  return total;
}

// ---------------------------------------------------------------------------
// Closed forms and the c1 cache.
// ---------------------------------------------------------------------------

double closed_i1(double eta, double alpha) {
  if (!(eta >= 0.0)) throw DomainError("closed_i1: eta must be >= 0");
  (void)kappa(alpha);  // range check on alpha
  return std::pow(1.0 + eta, alpha - 1.0);
}

double c1_constant(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("c1_constant: alpha must lie in (0,1)");

  static std::mutex mutex;
  static std::map<double, double> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(alpha);
    if (it != cache.end()) return it->second;
  }

  // c1 = Int_1^inf (y-1)^{p-1} y^{-2} dy with p = alpha/2 + 3/4.
  // Both pieces are regularized by power substitutions before quadrature:
  //   [1,2]:    u = (y-1)^p      -> (1/p) Int_0^1 (1 + u^{1/p})^{-2} du
  //   [2,inf):  y = 1/v, v = r^q -> q Int_0^{(1/2)^{1/q}} (1 - r^q)^{p-1} dr
  // with q = 1/(2-p).
  const double p = 0.5 * alpha + 0.75;
  const double q = 1.0 / (2.0 - p);
  const double head = integrate_adaptive(
      [p](double u) {
        const double y = 1.0 + std::pow(u, 1.0 / p);
        return 1.0 / (p * y * y);
      },
      0.0, 1.0, 1e-12, 1e-14);
  const double tail = integrate_adaptive(
      [p, q](double r) {
        return q * std::pow(1.0 - std::pow(r, q), p - 1.0);
      },
      0.0, std::pow(0.5, 2.0 - p), 1e-12, 1e-14);
  const double value = head + tail;

  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(alpha, value);
  return value;
}

double closed_i12(double lambda, double eta, double alpha) {
  if (!(eta > 0.0)) throw DomainError("closed_i12: eta must be > 0");
  return c1_constant(alpha) *
         std::pow(std::abs(lambda) + eta, 0.5 * alpha - 1.25);
}

double closed_i13(double lambda, double eta) {
  if (!(eta > 0.0)) throw DomainError("closed_i13: eta must be > 0");
  return std::sqrt(0.5 * pi) * std::pow(std::abs(lambda) + eta, -0.75);
}

double closed_i14(double lambda, double eta) {
  if (!(eta > 0.0)) throw DomainError("closed_i14: eta must be > 0");
  return 0.25 * std::sqrt(pi) * std::pow(std::abs(lambda) + eta, -1.25);
}

// ---------------------------------------------------------------------------
// Integral tags.
// ---------------------------------------------------------------------------

std::string to_string(IntegralTag tag) {
  switch (tag) {
    case IntegralTag::I1: return "I1";
    case IntegralTag::I2: return "I2";
    case IntegralTag::I3: return "I3";
    case IntegralTag::I7: return "I7";
    case IntegralTag::I8: return "I8";
    case IntegralTag::I11: return "I11";
    case IntegralTag::I12: return "I12";
    case IntegralTag::I12Explicit: return "I12Explicit";
    case IntegralTag::I13Squared: return "I13Squared";
    case IntegralTag::I14Squared: return "I14Squared";
    case IntegralTag::I15: return "I15";
  }
  return "?";
}

void IntegralId::validate() const {
  auto fail = [this](const std::string& why) {
    throw DomainError("integral " + to_string(tag) + ": " + why);
  };
  switch (tag) {
    case IntegralTag::I1:
    case IntegralTag::I2:
    case IntegralTag::I3:
      (void)kappa(alpha);
      if (!(eta >= 0.0)) fail("eta must be >= 0");
      if (lambda != 0.0) fail("lambda is not a parameter of this tag");
      break;
    case IntegralTag::I15:
      (void)kappa(alpha);
      if (!(eta > 0.0)) fail("eta must be > 0");
      if (lambda != 0.0) fail("lambda is not a parameter of this tag");
      break;
    case IntegralTag::I7:
    case IntegralTag::I8:
    case IntegralTag::I11:
    case IntegralTag::I12:
      (void)kappa(alpha);
      if (!(eta > 0.0 || (eta == 0.0 && lambda != 0.0)))
        fail("requires eta > 0, or eta = 0 with lambda != 0");
      break;
    case IntegralTag::I12Explicit:
      (void)kappa(alpha);
      if (!(eta > 0.0)) fail("eta must be > 0");
      break;
    case IntegralTag::I13Squared:
    case IntegralTag::I14Squared:
      if (!(eta > 0.0)) fail("eta must be > 0");
      break;
  }
}

double IntegralId::integrand(double xi) const {
  const double x2 = xi * xi;
  switch (tag) {
    case IntegralTag::I1:
      return fkv::kappa(alpha) * std::pow(xi, 2.0 * alpha - 1.0) /
             (1.0 + x2 + eta);
    case IntegralTag::I2:
      return std::pow(xi, 2.0 * alpha - 1.0) /
             ((1.0 + x2 + eta) * (1.0 + x2 + eta));
    case IntegralTag::I3:
      return std::pow(xi, 2.0 * alpha + 1.0) /
             ((1.0 + x2 + eta) * (1.0 + x2 + eta));
    case IntegralTag::I7:
      return fkv::kappa(alpha) * std::pow(xi, 2.0 * alpha - 1.0) /
             (lambda * lambda + (x2 + eta) * (x2 + eta));
    case IntegralTag::I8:
      return fkv::kappa(alpha) * std::pow(xi, 2.0 * alpha - 1.0) * (x2 + eta) /
             (lambda * lambda + (x2 + eta) * (x2 + eta));
    case IntegralTag::I11:
      return std::pow(xi, 2.0 * alpha - 1.0) /
             std::sqrt(lambda * lambda + (x2 + eta) * (x2 + eta));
    case IntegralTag::I12:
      return std::pow(xi, 2.0 * alpha + 1.0) /
             (lambda * lambda + (x2 + eta) * (x2 + eta));
    case IntegralTag::I12Explicit: {
      const double den = std::abs(lambda) + x2 + eta;
      return std::pow(xi, alpha + 0.5) / (den * den);
    }
    case IntegralTag::I13Squared: {
      const double den = std::abs(lambda) + x2 + eta;
      return 1.0 / (den * den);
    }
    case IntegralTag::I14Squared: {
      const double den = std::abs(lambda) + x2 + eta;
      return x2 / (den * den * den * den);
    }
    case IntegralTag::I15:
      return std::pow(xi, 2.0 * alpha - 1.0) / (x2 + eta);
  }
  return 0.0;
}

double quad_integral(const IntegralId& id, const XiGrid& grid) {
  id.validate();
  std::vector<double> values(grid.nodes.size());
  for (std::size_t k = 0; k < grid.nodes.size(); ++k)
    values[k] = id.integrand(grid.nodes[k]);
  return 2.0 * kernels::weighted_sum(grid.weights.data(), values.data(),
                                     values.size());
}

// ---------------------------------------------------------------------------
// Grid construction.
// ---------------------------------------------------------------------------

std::pair<double, double> default_xi_bounds(double alpha, double eta,
                                            double quad_tol) {
  const double k = kappa(alpha);
  const double target = 0.1 * quad_tol * std::pow(1.0 + eta, alpha - 1.0);
  // Lower tail of the I1 probe: kappa * xi^{2a} / (2a (1+eta)) below xi_min.
  const double xi_min = std::pow(target * 2.0 * alpha * (1.0 + eta) / k,
                                 1.0 / (2.0 * alpha));
  // Upper tail bound: kappa * Int_X^inf xi^{2a-3} dxi = kappa X^{2a-2}/(2-2a).
  double xi_max =
      std::pow(k / ((2.0 - 2.0 * alpha) * target), 1.0 / (2.0 - 2.0 * alpha));
  xi_max = std::max(xi_max, 10.0 * std::sqrt(1.0 + eta));
  return {xi_min, xi_max};
}

XiGrid build_xi_grid(const FractionalParams& params, int n_xi, double xi_max,
                     double quad_tol) {
  if (n_xi < 2) throw DomainError("build_xi_grid: n_xi must be >= 2");
  if (!(xi_max > 1.0)) throw DomainError("build_xi_grid: xi_max must be > 1");
  if (!(quad_tol > 0.0)) throw DomainError("build_xi_grid: quad_tol must be > 0");

  // Lower cutoff: the I1 probe bound, additionally capped so flat-at-zero
  // integrands (the I13/I14 family) lose less than quad_tol below xi_min.
  const double xi_min = std::min(
      {1e-6 * (1.0 + params.eta),
       default_xi_bounds(params.alpha, params.eta, quad_tol).first,
       0.01 * quad_tol});

  XiGrid grid;
  grid.xi_max = xi_max;
  grid.nodes.resize(n_xi);
  grid.weights.resize(n_xi);
  const double h = std::log(xi_max / xi_min) / n_xi;
  for (int i = 0; i < n_xi; ++i) {
    const double t = std::log(xi_min) + (i + 0.5) * h;
    grid.nodes[i] = std::exp(t);
    grid.weights[i] = h * grid.nodes[i];
  }

  const IntegralId probe{IntegralTag::I1, 0.0, params.eta, params.alpha};
  const double exact = closed_i1(params.eta, params.alpha);
  grid.probe_error = std::abs(quad_integral(probe, grid) - exact) / exact;
  if (grid.probe_error > quad_tol) {
    std::ostringstream os;
    os << "build_xi_grid: accuracy contract not met with n_xi = " << n_xi
       << ": I1 probe relative error " << grid.probe_error << " > " << quad_tol;
    throw ResolutionError(os.str(), grid.probe_error);
  }
  return grid;
}

std::string XiGrid::to_csv() const {
  std::string out = "node,weight\n";
  char line[80];
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g\n", nodes[i], weights[i]);
    out += line;
  }
  return out;
}

}  // namespace fkv
