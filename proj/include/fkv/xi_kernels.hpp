#pragma once

#include <cstddef>
#include <string>

// Inner loops over the xi-axis of the diffusive field: weighted reductions
// and diagonal recurrence updates. These run once per quadrature point per
// time step and dominate the arithmetic of long evolutions, so they exist
// in a scalar reference version and an AVX2/FMA version selected at runtime.

namespace fkv::kernels {

/// sum_k w[k] * x[k]
double weighted_sum(const double* w, const double* x, std::size_t n);

/// sum_k w[k] * a[k] * b[k]
double weighted_dot(const double* w, const double* a, const double* b, std::size_t n);

/// sum_k w[k] * x[k]^2
double weighted_sumsq(const double* w, const double* x, std::size_t n);

/// x[k] <- decay[k] * x[k] + s * gain[k]
void diag_axpby(double* x, const double* decay, const double* gain, double s,
                std::size_t n);

/// Name of the backend currently in use: "scalar" or "avx2".
std::string active_backend();

/// Force a backend by name. Returns false (and leaves the selection
/// unchanged) if the backend is not available on this machine.
bool select_backend(const std::string& name);

namespace detail {

double weighted_sum_scalar(const double* w, const double* x, std::size_t n);
double weighted_dot_scalar(const double* w, const double* a, const double* b,
                           std::size_t n);
double weighted_sumsq_scalar(const double* w, const double* x, std::size_t n);
void diag_axpby_scalar(double* x, const double* decay, const double* gain,
                       double s, std::size_t n);

#if defined(FKV_ENABLE_AVX2)
double weighted_sum_avx2(const double* w, const double* x, std::size_t n);
double weighted_dot_avx2(const double* w, const double* a, const double* b,
                         std::size_t n);
double weighted_sumsq_avx2(const double* w, const double* x, std::size_t n);
void diag_axpby_avx2(double* x, const double* decay, const double* gain,
                     double s, std::size_t n);
#endif

}  // namespace detail

}  // namespace fkv::kernels
