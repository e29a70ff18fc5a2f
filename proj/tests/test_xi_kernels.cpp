#include <doctest.h>

#include <random>
#include <vector>

#include "fkv/xi_kernels.hpp"

using namespace fkv;

namespace {

struct Arrays {
  std::vector<double> w, a, b;
};

Arrays random_arrays(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  Arrays arr;
  arr.w.resize(n);
  arr.a.resize(n);
  arr.b.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    arr.w[i] = uni(rng);
    arr.a[i] = uni(rng);
    arr.b[i] = uni(rng);
  }
  return arr;
}

}  // namespace

TEST_CASE("scalar reference kernels match straightforward loops") {
  const Arrays arr = random_arrays(37, 1);
  double sum = 0, dot = 0, sumsq = 0;
  for (std::size_t i = 0; i < arr.w.size(); ++i) {
    sum += arr.w[i] * arr.a[i];
    dot += arr.w[i] * arr.a[i] * arr.b[i];
    sumsq += arr.w[i] * arr.a[i] * arr.a[i];
  }
  CHECK(kernels::detail::weighted_sum_scalar(arr.w.data(), arr.a.data(), 37) ==
        doctest::Approx(sum).epsilon(1e-14));
  CHECK(kernels::detail::weighted_dot_scalar(arr.w.data(), arr.a.data(),
                                             arr.b.data(), 37) ==
        doctest::Approx(dot).epsilon(1e-14));
  CHECK(kernels::detail::weighted_sumsq_scalar(arr.w.data(), arr.a.data(), 37) ==
        doctest::Approx(sumsq).epsilon(1e-14));
}

TEST_CASE("active backend agrees with the scalar reference") {
  // Equivalence across backends on many sizes, including ragged tails.
  for (std::size_t n : {1u, 2u, 3u, 4u, 7u, 8u, 15u, 16u, 33u, 64u, 257u}) {
    const Arrays arr = random_arrays(n, 42 + static_cast<unsigned>(n));
    const double sum_ref =
        kernels::detail::weighted_sum_scalar(arr.w.data(), arr.a.data(), n);
    const double dot_ref = kernels::detail::weighted_dot_scalar(
        arr.w.data(), arr.a.data(), arr.b.data(), n);
    const double sq_ref =
        kernels::detail::weighted_sumsq_scalar(arr.w.data(), arr.a.data(), n);
    CHECK(kernels::weighted_sum(arr.w.data(), arr.a.data(), n) ==
          doctest::Approx(sum_ref).epsilon(1e-13));
    CHECK(kernels::weighted_dot(arr.w.data(), arr.a.data(), arr.b.data(), n) ==
          doctest::Approx(dot_ref).epsilon(1e-13));
    CHECK(kernels::weighted_sumsq(arr.w.data(), arr.a.data(), n) ==
          doctest::Approx(sq_ref).epsilon(1e-13));

    std::vector<double> x_ref = arr.b, x_active = arr.b;
    kernels::detail::diag_axpby_scalar(x_ref.data(), arr.w.data(), arr.a.data(),
                                       0.7, n);
    kernels::diag_axpby(x_active.data(), arr.w.data(), arr.a.data(), 0.7, n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(x_active[i] == doctest::Approx(x_ref[i]).epsilon(1e-13));
  }
}

TEST_CASE("backend selection is sticky and reversible") {
  const std::string original = kernels::active_backend();
  REQUIRE(kernels::select_backend("scalar"));
  CHECK(kernels::active_backend() == "scalar");
  CHECK_FALSE(kernels::select_backend("no-such-backend"));
  CHECK(kernels::active_backend() == "scalar");
  // Restore whatever the machine supports.
  if (!kernels::select_backend(original)) kernels::select_backend("scalar");
  CHECK(kernels::active_backend() == original);
}

TEST_CASE("same input gives identical output on repeat calls") {
  const Arrays arr = random_arrays(129, 7);
  const double first =
      kernels::weighted_sum(arr.w.data(), arr.a.data(), arr.w.size());
  for (int rep = 0; rep < 5; ++rep)
    CHECK(kernels::weighted_sum(arr.w.data(), arr.a.data(), arr.w.size()) ==
          first);
}
