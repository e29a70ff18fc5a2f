#include "fkv/xi_kernels.hpp"

#include <atomic>

namespace fkv::kernels {

namespace detail {

double weighted_sum_scalar(const double* w, const double* x, std::size_t n) {
  double s0 = 0.0, s1 = 0.0;
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    s0 += w[k] * x[k];
    s1 += w[k + 1] * x[k + 1];
  }
  if (k < n) s0 += w[k] * x[k];
  return s0 + s1;
}

double weighted_dot_scalar(const double* w, const double* a, const double* b,
                           std::size_t n) {
  double s0 = 0.0, s1 = 0.0;
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    s0 += w[k] * a[k] * b[k];
    s1 += w[k + 1] * a[k + 1] * b[k + 1];
  }
  if (k < n) s0 += w[k] * a[k] * b[k];
  return s0 + s1;
}

double weighted_sumsq_scalar(const double* w, const double* x, std::size_t n) {
  double s0 = 0.0, s1 = 0.0;
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    s0 += w[k] * x[k] * x[k];
    s1 += w[k + 1] * x[k + 1] * x[k + 1];
  }
  if (k < n) s0 += w[k] * x[k] * x[k];
  return s0 + s1;
}

void diag_axpby_scalar(double* x, const double* decay, const double* gain,
                       double s, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) x[k] = decay[k] * x[k] + s * gain[k];
}

}  // namespace detail

namespace {

struct Backend {
  const char* name;
  double (*wsum)(const double*, const double*, std::size_t);
  double (*wdot)(const double*, const double*, const double*, std::size_t);
  double (*wsumsq)(const double*, const double*, std::size_t);
  void (*axpby)(double*, const double*, const double*, double, std::size_t);
};

constexpr Backend scalar_backend{
    "scalar", detail::weighted_sum_scalar, detail::weighted_dot_scalar,
    detail::weighted_sumsq_scalar, detail::diag_axpby_scalar};

#if defined(FKV_ENABLE_AVX2)
constexpr Backend avx2_backend{
    "avx2", detail::weighted_sum_avx2, detail::weighted_dot_avx2,
    detail::weighted_sumsq_avx2, detail::diag_axpby_avx2};

bool avx2_supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const Backend* detect_backend() {
#if defined(FKV_ENABLE_AVX2)
  if (avx2_supported()) return &avx2_backend;
#endif
  return &scalar_backend;
}

std::atomic<const Backend*> g_backend{nullptr};

const Backend& backend() {
  const Backend* b = g_backend.load(std::memory_order_acquire);
  if (!b) {
    b = detect_backend();
    g_backend.store(b, std::memory_order_release);
  }
  return *b;
}

}  // namespace

double weighted_sum(const double* w, const double* x, std::size_t n) {
  return backend().wsum(w, x, n);
}

double weighted_dot(const double* w, const double* a, const double* b,
                    std::size_t n) {
  return backend().wdot(w, a, b, n);
}

double weighted_sumsq(const double* w, const double* x, std::size_t n) {
  return backend().wsumsq(w, x, n);
}

void diag_axpby(double* x, const double* decay, const double* gain, double s,
                std::size_t n) {
  backend().axpby(x, decay, gain, s, n);
}

std::string active_backend() { return backend().name; }

bool select_backend(const std::string& name) {
  if (name == "scalar") {
    g_backend.store(&scalar_backend, std::memory_order_release);
    return true;
  }
#if defined(FKV_ENABLE_AVX2)
  if (name == "avx2" && avx2_supported()) {
    g_backend.store(&avx2_backend, std::memory_order_release);
    return true;
  }
#endif
  return false;
}

}  // namespace fkv::kernels
