#pragma once

// Independent test oracles. Everything here evaluates the defining integrals
// and reference solutions directly, without touching the closed forms or the
// solver paths under test.

#include <cmath>
#include <functional>
#include <vector>

#include "fkv/fractional.hpp"

namespace oracles {

// I1(eta, alpha) = kappa Int_R |xi|^{2a-1}/(1+xi^2+eta) dxi, by adaptive
// quadrature after power substitutions that remove the endpoint singularity
// and compactify the tail.
inline double i1(double eta, double alpha, double tol = 1e-11) {
  const double k = fkv::kappa(alpha);
  // (0,1): s = xi^{2a} makes xi^{2a-1} dxi = ds/(2a).
  const double head = fkv::integrate_adaptive(
      [=](double s) {
        const double xi = std::pow(s, 1.0 / (2.0 * alpha));
        return 1.0 / (2.0 * alpha) / (1.0 + xi * xi + eta);
      },
      0.0, 1.0, tol, 1e-14);
  // (1,inf): xi = 1/v then s = v^{2-2a}.
  const double tail = fkv::integrate_adaptive(
      [=](double s) {
        const double v = std::pow(s, 1.0 / (2.0 - 2.0 * alpha));
        return 1.0 / (2.0 - 2.0 * alpha) / (v * v * (1.0 + eta) + 1.0);
      },
      0.0, 1.0, tol, 1e-14);
  return 2.0 * k * (head + tail);
}

// Int_R |xi|^{a+1/2}/(|l|+xi^2+eta)^2 dxi (the defining integral behind the
// closed form of I12).
inline double i12_explicit(double lambda, double eta, double alpha,
                           double tol = 1e-11) {
  const double c = std::abs(lambda) + eta;
  const double split = std::sqrt(1.0 + c);
  const double head = fkv::integrate_adaptive(
      [=](double xi) {
        const double den = c + xi * xi;
        return std::pow(xi, alpha + 0.5) / (den * den);
      },
      0.0, split, tol, 1e-16);
  // xi = 1/v then s = v^{5/2-a} regularizes the transformed endpoint.
  const double p = 2.5 - alpha;
  const double tail = fkv::integrate_adaptive(
      [=](double s) {
        const double v = std::pow(s, 1.0 / p);
        const double den = c * v * v + 1.0;
        return (1.0 / p) / (den * den);
      },
      0.0, std::pow(1.0 / split, p), tol, 1e-16);
  return 2.0 * (head + tail);
}

// (Int_R (|l|+xi^2+eta)^{-2} dxi)^{1/2}.
inline double i13(double lambda, double eta, double tol = 1e-11) {
  const double c = std::abs(lambda) + eta;
  const double split = std::sqrt(1.0 + c);
  const double head = fkv::integrate_adaptive(
      [=](double xi) {
        const double den = c + xi * xi;
        return 1.0 / (den * den);
      },
      0.0, split, tol, 1e-16);
  const double tail = fkv::integrate_adaptive(
      [=](double v) {
        const double den = c * v * v + 1.0;
        return v * v / (den * den);
      },
      0.0, 1.0 / split, tol, 1e-16);
  return std::sqrt(2.0 * (head + tail));
}

// (Int_R xi^2 (|l|+xi^2+eta)^{-4} dxi)^{1/2}.
inline double i14(double lambda, double eta, double tol = 1e-11) {
  const double c = std::abs(lambda) + eta;
  const double split = std::sqrt(1.0 + c);
  const double head = fkv::integrate_adaptive(
      [=](double xi) {
        const double den = c + xi * xi;
        return xi * xi / (den * den * den * den);
      },
      0.0, split, tol, 1e-18);
  const double tail = fkv::integrate_adaptive(
      [=](double v) {
        const double den = c * v * v + 1.0;
        return v * v * v * v / (den * den * den * den);
      },
      0.0, 1.0 / split, tol, 1e-18);
  return std::sqrt(2.0 * (head + tail));
}

// Direct evaluation of the weighted fractional integral
//   O(t) = 1/Gamma(1-a) Int_0^t (t-s)^{-a} e^{-eta (t-s)} V(s) ds
// for a signal sampled on a uniform grid (piecewise-linear V). The last
// segment's weak singularity is removed by tau = r^{1/(1-a)}.
inline std::vector<double> fractional_integral_convolution(
    const std::vector<double>& v, double dt, double alpha, double eta) {
  const double gamma = std::tgamma(1.0 - alpha);
  const int n = static_cast<int>(v.size());
  auto value_at = [&](double t) {
    const double u = t / dt;
    const int i = std::min(n - 2, std::max(0, static_cast<int>(u)));
    const double frac = u - i;
    return v[i] * (1.0 - frac) + v[i + 1] * frac;
  };

  // 4-point Gauss-Legendre on [0,1].
  static const double gx[4] = {0.069431844202973713, 0.33000947820757187,
                               0.66999052179242813, 0.93056815579702623};
  static const double gw[4] = {0.17392742256872692, 0.32607257743127305,
                               0.32607257743127305, 0.17392742256872692};

  std::vector<double> out(n, 0.0);
  for (int i = 1; i < n; ++i) {
    const double t = i * dt;
    double total = 0.0;
    // regular segments: tau in [(i-j-1) dt, (i-j) dt], j < i-1
    for (int j = 0; j + 1 < i; ++j) {
      const double tau0 = (i - j - 1) * dt;
      for (int g = 0; g < 4; ++g) {
        const double tau = tau0 + gx[g] * dt;
        total += gw[g] * dt * std::pow(tau, -alpha) * std::exp(-eta * tau) *
                 value_at(t - tau);
      }
    }
    // singular segment tau in (0, dt): tau = r^{1/(1-a)}
    const double rmax = std::pow(dt, 1.0 - alpha);
    for (int g = 0; g < 4; ++g) {
      const double r = gx[g] * rmax;
      const double tau = std::pow(r, 1.0 / (1.0 - alpha));
      total += gw[g] * rmax / (1.0 - alpha) * std::exp(-eta * tau) *
               value_at(t - tau);
    }
    out[i] = total / gamma;
  }
  return out;
}

}  // namespace oracles
