#include <spolight/specfun.hpp>

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace spolight::specfun {

void SeriesTolerance::validate() const {
  if (!(abs_tol > 0.0))
    throw std::domain_error("SeriesTolerance: abs_tol must be > 0");
  if (max_terms < 1)
    throw std::domain_error("SeriesTolerance: max_terms must be >= 1");
}

namespace detail {

long double regularized_lower_gamma_ld(long long n, long double x) {
  if (n < 1)
    throw std::domain_error(fmt::format("regularized_lower_gamma: n must be >= 1, got {}", n));
  if (!(x >= 0.0L))
    throw std::domain_error("regularized_lower_gamma: x must be >= 0");
  if (x == 0.0L) return 0.0L;

  if (x >= static_cast<long double>(n)) {
    // P(n,x) = 1 - sum_{k=0}^{n-1} pois(k;x); the head sum is < 1/2 here.
    long double term = std::exp(-x);  // pois(0;x)
    long double head = term;
    for (long long k = 1; k < n; ++k) {
      term *= x / static_cast<long double>(k);
      head += term;
    }
    long double p = 1.0L - head;
    return p < 0.0L ? 0.0L : p;
  }

  // x < n: direct Poisson tail sum_{k>=n} pois(k;x), all positive terms.
  // Start in log space so large n does not overflow the k=n term.
  long double term = std::exp(static_cast<long double>(n) * std::log(x) - x
                              - std::lgamma(static_cast<long double>(n) + 1.0L));
  long double sum = term;
  long long k = n;
  while (term > sum * 1e-21L && term > 1e-4900L) {
    ++k;
    term *= x / static_cast<long double>(k);
    sum += term;
    if (k > n + 2000000) break;  // unreachable for sane arguments
  }
  return sum > 1.0L ? 1.0L : sum;
}

long double bessel_i1_ld(long double z, double abs_tol, int max_terms) {
  if (!(z >= 0.0L))
    throw std::domain_error("bessel_i1: argument must be >= 0");
  if (z == 0.0L) return 0.0L;

  if (z <= 30.0L) {
    const long double h = z / 2.0L;
    long double term = h;  // k = 0 term
    long double sum = term;
    long double prev = term;
    for (int k = 0; k < max_terms; ++k) {
      term *= h * h / (static_cast<long double>(k + 1) * static_cast<long double>(k + 2));
      sum += term;
      if (term < static_cast<long double>(abs_tol) && term < prev) return sum;
      prev = term;
    }
    throw std::runtime_error(
        fmt::format("bessel_i1: series did not reach abs_tol={} within {} terms (z={})",
                    abs_tol, max_terms, static_cast<double>(z)));
  }

  // Large-argument expansion, truncated at the smallest term. For z > 30 the
  // optimal truncation error is far below 1e-15 relative.
  const long double mu = 4.0L;  // 4 nu^2 with nu = 1
  long double term = 1.0L;
  long double sum = term;
  for (int k = 1; k <= 40; ++k) {
    const long double odd = static_cast<long double>(2 * k - 1);
    const long double next = term * -(mu - odd * odd) / (8.0L * static_cast<long double>(k) * z);
    if (std::fabs(next) >= std::fabs(term)) break;  // past optimal truncation
    term = next;
    sum += term;
    if (std::fabs(term) < 1e-20L * std::fabs(sum)) break;
  }
  return std::exp(z) / std::sqrt(2.0L * static_cast<long double>(M_PI) * z) * sum;
}

}  // namespace detail

double regularized_lower_gamma(int n, double x) {
  return static_cast<double>(detail::regularized_lower_gamma_ld(n, x));
}

double bessel_i1(double z, const SeriesTolerance& tol) {
  tol.validate();
  return static_cast<double>(detail::bessel_i1_ld(z, tol.abs_tol, tol.max_terms));
}

double poisson_pmf(std::int64_t k, double mean) {
  if (k < 0)
    throw std::domain_error("poisson_pmf: k must be >= 0");
  if (!(mean >= 0.0))
    throw std::domain_error("poisson_pmf: mean must be >= 0");
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  if (k == 0) return std::exp(-mean);
  const long double lp = static_cast<long double>(k) * std::log(static_cast<long double>(mean))
                         - static_cast<long double>(mean)
                         - std::lgamma(static_cast<long double>(k) + 1.0L);
  return static_cast<double>(std::exp(lp));
}

}  // namespace spolight::specfun
