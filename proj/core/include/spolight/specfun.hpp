#pragma once
#include <cstdint>

namespace spolight::specfun {

/// Termination policy for the power-series evaluations in this module.
/// A series sum stops once the current term is below abs_tol and the terms
/// are already decreasing; exceeding max_terms raises a truncation error.
struct SeriesTolerance {
  double abs_tol = 1e-12;
  int max_terms = 500;

  void validate() const;
};

/// Regularized lower incomplete gamma P(n,x) = gamma(n,x)/Gamma(n) for
/// integer order n >= 1.
///
/// Evaluated through the complementary Poisson sums, exact at integer n:
/// P(n,x) = 1 - sum_{k<n} pois(k;x) when x >= n, and the direct tail
/// sum_{k>=n} pois(k;x) when x < n (all-positive terms, so the deep left
/// tail keeps full relative accuracy). No overflow for n <= 500, x <= 200.
double regularized_lower_gamma(int n, double x);

/// Modified Bessel function I_1(z) for z >= 0.
///
/// Power series sum_k (z/2)^(2k+1) / (k!(k+1)!) for z <= 30; for z > 30 the
/// large-argument expansion e^z/sqrt(2 pi z) * sum_k (-1)^k a_k(1)/z^k is
/// used instead (truncated at the smallest term).
double bessel_i1(double z, const SeriesTolerance& tol = {});

/// Poisson probability mass lambda^k e^(-lambda)/k!, computed in log space
/// so that k up to ~1e6 stays finite.
double poisson_pmf(std::int64_t k, double mean);

namespace detail {
// Extended-precision cores shared with the counting module, which needs the
// extra mantissa bits for near-cancelling moment combinations.
long double regularized_lower_gamma_ld(long long n, long double x);
long double bessel_i1_ld(long double z, double abs_tol, int max_terms);
}  // namespace detail

}  // namespace spolight::specfun
