#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <spolight/specfun.hpp>

using namespace spolight::specfun;

namespace {

// Independent I1 oracle: fixed 60-term series evaluated through lgamma in
// log space, no term recurrence shared with the implementation.
long double i1_oracle(long double z) {
  if (z == 0.0L) return 0.0L;
  long double sum = 0.0L;
  for (int k = 0; k < 60; ++k) {
    const long double lt = (2 * k + 1) * std::log(z / 2.0L)
                           - std::lgamma(static_cast<long double>(k) + 1.0L)
                           - std::lgamma(static_cast<long double>(k) + 2.0L);
    sum += std::exp(lt);
  }
  return sum;
}

}  // namespace

TEST_CASE("regularized lower gamma: pinned values") {
  CHECK(regularized_lower_gamma(1, 5.0)
        == doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-13));
  CHECK(regularized_lower_gamma(3, 0.0) == 0.0);
  CHECK(regularized_lower_gamma(3, 5.0) == doctest::Approx(0.87534798051691886).epsilon(1e-12));
  // deep left tail keeps relative accuracy through the direct tail sum
  CHECK(regularized_lower_gamma(50, 0.1)
        == doctest::Approx(2.9809043504737565e-115).epsilon(1e-10));
  CHECK(regularized_lower_gamma(500, 200.0)
        == doctest::Approx(6.1742614345288565e-71).epsilon(1e-9));
}

TEST_CASE("regularized lower gamma: sum rule") {
  for (double x : {0.1, 1.0, 5.0, 20.0, 50.0}) {
    const int n_top = static_cast<int>(std::ceil(x + 10.0 * std::sqrt(x) + 30.0));
    double sum = 0.0;
    for (int n = 1; n <= n_top; ++n) sum += regularized_lower_gamma(n, x);
    CHECK(std::fabs(sum - x) < 1e-9);
  }
}

TEST_CASE("regularized lower gamma: bounds and monotonicity") {
  const int ns[] = {1, 2, 3, 5, 10, 20, 35, 50};
  const double xs[] = {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 35.0, 50.0};
  for (int n : ns) {
    double prev = 0.0;
    for (double x : xs) {
      const double p = regularized_lower_gamma(n, x);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      CHECK(p > prev);  // strictly increasing in x
      prev = p;
    }
  }
  for (double x : xs) {
    double prev = 2.0;
    for (int n : ns) {
      const double p = regularized_lower_gamma(n, x);
      // strictly decreasing in n wherever the gap is representable in a
      // double (at x >> n both values round to exactly 1)
      if (prev < 1.0 - 1e-13)
        CHECK(p < prev);
      else
        CHECK(p <= prev);
      prev = p;
    }
  }
  // approaches 1 for x >> n
  CHECK(regularized_lower_gamma(1, 200.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("regularized lower gamma: no overflow across the contract box") {
  for (int n : {1, 50, 200, 500})
    for (double x : {0.0, 1.0, 50.0, 200.0}) {
      const double p = regularized_lower_gamma(n, x);
      CHECK(std::isfinite(p));
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
}

TEST_CASE("regularized lower gamma: domain errors") {
  CHECK_THROWS_AS(regularized_lower_gamma(0, 1.0), std::domain_error);
  CHECK_THROWS_AS(regularized_lower_gamma(-3, 1.0), std::domain_error);
  CHECK_THROWS_AS(regularized_lower_gamma(2, -0.5), std::domain_error);
}

TEST_CASE("bessel I1: pinned values") {
  CHECK(bessel_i1(0.0) == 0.0);
  CHECK(std::fabs(bessel_i1(1e-8) - 5e-9) < 1e-20);
  CHECK(bessel_i1(2.0) == doctest::Approx(1.5906368546373291).epsilon(1e-12));
  CHECK(bessel_i1(0.5) == doctest::Approx(0.25789430539089632).epsilon(1e-12));
  CHECK(bessel_i1(10.0) == doctest::Approx(2670.9883037012547).epsilon(1e-12));
  // asymptotic branch
  CHECK(bessel_i1(30.5) == doctest::Approx(1256932623308.4715).epsilon(1e-12));
  CHECK(bessel_i1(50.0) == doctest::Approx(2.9030785901035568e20).epsilon(1e-12));
  CHECK(bessel_i1(63.3) == doctest::Approx(1.543318177215916e26).epsilon(1e-12));
}

TEST_CASE("bessel I1: relative accuracy against the 60-term oracle") {
  for (double z = 0.25; z <= 30.0; z += 0.25) {
    const long double ref = i1_oracle(z);
    CHECK(std::fabs(bessel_i1(z) - static_cast<double>(ref))
          <= 1e-10 * static_cast<double>(ref));
  }
  // branch seam continuity
  CHECK(bessel_i1(29.999) == doctest::Approx(static_cast<double>(i1_oracle(29.999L))).epsilon(1e-12));
  CHECK(bessel_i1(30.001) == doctest::Approx(static_cast<double>(i1_oracle(30.001L))).epsilon(1e-12));
}

TEST_CASE("bessel I1: positivity and errors") {
  for (double z : {0.01, 0.1, 1.0, 5.0, 29.0, 31.0, 60.0}) CHECK(bessel_i1(z) > 0.0);
  CHECK_THROWS_AS(bessel_i1(-1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_i1(20.0, SeriesTolerance{1e-12, 5}), std::runtime_error);
  CHECK_THROWS_AS(bessel_i1(1.0, SeriesTolerance{0.0, 100}), std::domain_error);
  CHECK_THROWS_AS(bessel_i1(1.0, SeriesTolerance{1e-12, 0}), std::domain_error);
}

TEST_CASE("poisson pmf") {
  for (double lam : {0.3, 2.0, 40.0})
    CHECK(poisson_pmf(0, lam) == doctest::Approx(std::exp(-lam)).epsilon(1e-14));
  double norm = 0.0, mean = 0.0;
  for (int k = 0; k <= 60; ++k) {
    const double p = poisson_pmf(k, 2.0);
    norm += p;
    mean += k * p;
  }
  CHECK(std::fabs(norm - 1.0) < 1e-12);
  CHECK(std::fabs(mean - 2.0) < 1e-10);

  CHECK(poisson_pmf(0, 0.0) == 1.0);
  CHECK(poisson_pmf(3, 0.0) == 0.0);
  // stays finite deep into large-k territory
  const double big = poisson_pmf(1000000, 1e6);
  CHECK(std::isfinite(big));
  CHECK(big > 3.5e-4);
  CHECK(big < 4.5e-4);

  CHECK_THROWS_AS(poisson_pmf(-1, 2.0), std::domain_error);
  CHECK_THROWS_AS(poisson_pmf(2, -2.0), std::domain_error);
}
