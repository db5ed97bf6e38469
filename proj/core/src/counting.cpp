#include <spolight/counting.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace spolight::counting {

namespace {

using std::fabs;

// Tolerances of the extended-precision internals. The public contracts are
// 1e-8 (series vs quadrature) and 1e-10 (G(1) = 1); these leave headroom.
constexpr double kBesselAbsTol = 1e-18;
constexpr int kBesselMaxTerms = 700;
constexpr long double kQuadRelTol = 1e-13L;

long double bessel(long double z) {
  return specfun::detail::bessel_i1_ld(z, kBesselAbsTol, kBesselMaxTerms);
}

template <class F>
long double simpson_rec(const F& f, long double a, long double b, long double fa, long double fm,
                        long double fb, long double whole, long double tol, int depth) {
  const long double m = 0.5L * (a + b);
  const long double flm = f(0.5L * (a + m));
  const long double frm = f(0.5L * (m + b));
  const long double left = (m - a) / 6.0L * (fa + 4.0L * flm + fm);
  const long double right = (b - m) / 6.0L * (fm + 4.0L * frm + fb);
  const long double delta = left + right - whole;
  if (fabs(delta) <= 15.0L * tol) return left + right + delta / 15.0L;
  if (depth <= 0)
    throw std::runtime_error("counting: adaptive quadrature did not converge");
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5L * tol, depth - 1)
       + simpson_rec(f, m, b, fm, frm, fb, right, 0.5L * tol, depth - 1);
}

template <class F>
long double adaptive_simpson(const F& f, long double a, long double b, long double abs_tol) {
  if (!(b > a)) return 0.0L;
  const long double fa = f(a);
  const long double fm = f(0.5L * (a + b));
  const long double fb = f(b);
  const long double whole = (b - a) / 6.0L * (fa + 4.0L * fm + fb);
  const long double tol = std::max(abs_tol, kQuadRelTol * fabs(whole));
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// S = sum_{n>=1} lambda^n/n! P(n,x) and the n- and n(n-1)-weighted variants,
// via the downward recurrence P(n+1,x) = P(n,x) - pois(n;x).
struct SeriesSums {
  long double S = 0.0L;
  long double A = 0.0L;  // sum n ...
  long double B = 0.0L;  // sum n(n-1) ...
};

SeriesSums counting_sums(long double lam, long double x, const SeriesTolerance& tol) {
  SeriesSums out;
  if (lam == 0.0L || x == 0.0L) return out;
  long double w = 1.0L;                 // lambda^n / n!
  long double p = -std::expm1(-x);      // P(1,x)
  long double pois = x * std::exp(-x);  // pois(1;x)
  for (int n = 1;; ++n) {
    w *= lam / n;
    const long double contrib = w * p;
    out.S += contrib;
    out.A += n * contrib;
    out.B += static_cast<long double>(n) * (n - 1) * contrib;
    p -= pois;
    if (p < 0.0L) p = 0.0L;
    pois *= x / (n + 1);
    if (n > lam && w * n * n < tol.abs_tol * 1e-3) break;
    if (n >= tol.max_terms)
      throw std::runtime_error(fmt::format(
          "counting: weight series not converged within max_terms={} (lambda={}, x={})",
          tol.max_terms, static_cast<double>(lam), static_cast<double>(x)));
  }
  return out;
}

// Deficit sums q,a,b = sum lambda^n/n! Q(n,x) * {1, n, n(n-1)} with
// Q(n,x) = 1 - P(n,x). Used where B(1+sS) - sA^2 cancels (the near-Poisson
// large-x regime); all-positive terms keep full relative accuracy.
struct DeficitSums {
  long double q = 0.0L;
  long double a = 0.0L;
  long double b = 0.0L;
};

DeficitSums deficit_sums(long double lam, long double x) {
  DeficitSums out;
  if (lam == 0.0L) return out;
  long double w = 1.0L;             // lambda^n / n!
  long double qn = std::exp(-x);    // Q(1,x) = pois(0;x)
  long double pois = qn * x;        // pois(1;x)
  const long double top = std::max(lam, x);
  const int nstop = static_cast<int>(top + 12.0L * std::sqrt(top) + 60.0L);
  for (int n = 1; n <= nstop; ++n) {
    w *= lam / n;
    const long double contrib = w * qn;
    out.q += contrib;
    out.a += n * contrib;
    out.b += static_cast<long double>(n) * (n - 1) * contrib;
    qn += pois;
    if (qn > 1.0L) qn = 1.0L;
    pois *= x / (n + 1);
  }
  return out;
}

long double quadrature_weight_sum(long double lam, long double x, long double abs_tol) {
  // sqrt(lam) * int_0^x du/sqrt(u) I1(2 sqrt(lam u)) e^(-u), with u = v^2 to
  // regularize the endpoint: 2 sqrt(lam) * int_0^sqrt(x) I1(2 sqrt(lam) v) e^(-v^2) dv.
  if (lam == 0.0L || x == 0.0L) return 0.0L;
  const long double rl = std::sqrt(lam);
  const auto f = [rl](long double v) { return bessel(2.0L * rl * v) * std::exp(-v * v); };
  return 2.0L * rl * adaptive_simpson(f, 0.0L, std::sqrt(x), abs_tol);
}

long double series_w0(const CountingParams& p) {
  const SeriesSums sums = counting_sums(p.effective_lambda(), p.x, p.tol);
  return 1.0L / (1.0L + static_cast<long double>(p.s) * sums.S);
}

}  // namespace

void CountingParams::validate() const {
  if (!(s > 0.0) || !std::isfinite(s))
    throw std::domain_error("CountingParams: s must be > 0");
  if (!(x >= 0.0) || !std::isfinite(x))
    throw std::domain_error("CountingParams: x must be >= 0");
  if (lambda.kind == LambdaMode::Kind::fixed) {
    if (!(lambda.value >= 0.0) || !std::isfinite(lambda.value))
      throw std::domain_error("CountingParams: fixed lambda must be >= 0");
  } else {
    if (!(lambda.value > 0.0) || !(lambda.value <= 1.0))
      throw std::domain_error("CountingParams: eta must lie in (0, 1]");
  }
  tol.validate();
}

DualValue weight_zero_forms(const CountingParams& p) {
  p.validate();
  const long double lam = p.effective_lambda();
  const long double s = p.s;
  const long double series = series_w0(p);
  const long double abs_tol = std::min(p.tol.abs_tol, 1e-10);
  const long double quad = 1.0L / (1.0L + s * quadrature_weight_sum(lam, p.x, abs_tol));
  DualValue out{static_cast<double>(series), static_cast<double>(quad)};
  if (fabs(out.series - out.quadrature) > 1e-8)
    throw std::runtime_error(fmt::format(
        "weight_zero: series ({:.12g}) and quadrature ({:.12g}) forms disagree beyond 1e-8",
        out.series, out.quadrature));
  return out;
}

double weight_zero(const CountingParams& p) { return weight_zero_forms(p).series; }

double weight(const CountingParams& p, int n) {
  p.validate();
  if (n < 0) throw std::domain_error("weight: n must be >= 0");
  const long double w0 = series_w0(p);
  if (n == 0) return static_cast<double>(w0);
  const long double lam = p.effective_lambda();
  const long double pn = specfun::detail::regularized_lower_gamma_ld(n, p.x);
  long double w = 1.0L;
  for (int k = 1; k <= n; ++k) w *= lam / k;
  return static_cast<double>(w0 * static_cast<long double>(p.s) * w * pn);
}

CountDistribution distribution(const CountingParams& p) {
  p.validate();
  const long double lam = p.effective_lambda();
  const long double x = p.x;
  const long double s = p.s;
  const long double w0 = series_w0(p);

  CountDistribution out;
  out.weights.push_back(static_cast<double>(w0));
  if (lam == 0.0L || x == 0.0L) return out;  // all mass at n = 0, bound exact

  long double w = 1.0L;
  long double pn = -std::expm1(-x);
  long double pois = x * std::exp(-x);
  for (int n = 1;; ++n) {
    w *= lam / n;
    out.weights.push_back(static_cast<double>(w0 * s * w * pn));
    pn -= pois;
    if (pn < 0.0L) pn = 0.0L;
    pois *= x / (n + 1);
    if (n >= lam) {
      // Poisson tail domination: sum_{m>n} lambda^m/m! <= w*lam/(n+1) / (1 - lam/(n+2)).
      const long double tb = w0 * s * (w * lam / (n + 1)) / (1.0L - lam / (n + 2));
      if (tb < p.tol.abs_tol) {
        out.tail_bound = static_cast<double>(tb);
        break;
      }
    }
    if (n >= p.tol.max_terms)
      throw std::runtime_error(fmt::format(
          "distribution: tail bound above abs_tol after max_terms={} weights", p.tol.max_terms));
  }
  return out;
}

DualValue generating_function_forms(const CountingParams& p, double z) {
  p.validate();
  if (!(z >= 0.0) || !std::isfinite(z))
    throw std::domain_error("generating_function: z must be >= 0 and finite");
  const long double lam = p.effective_lambda();
  const long double x = p.x;
  const long double s = p.s;
  const long double w0 = series_w0(p);

  const long double series = w0 * (1.0L + s * counting_sums(lam * z, x, p.tol).S);

  // Bessel-integral form: 1 + 2 s sqrt(lam z x) int_0^1 I1(2 sqrt(lam z x) u) e^(-x u^2) du.
  const long double arg = lam * static_cast<long double>(z) * x;
  long double quad = w0;
  if (arg > 0.0L) {
    const long double wb = 2.0L * std::sqrt(arg);
    const auto f = [wb, x](long double u) { return bessel(wb * u) * std::exp(-x * u * u); };
    const long double abs_tol = std::min(p.tol.abs_tol, 1e-10);
    quad = w0 * (1.0L + s * wb * adaptive_simpson(f, 0.0L, 1.0L, abs_tol));
  }

  DualValue out{static_cast<double>(series), static_cast<double>(quad)};
  if (fabs(out.series - out.quadrature) > 1e-8)
    throw std::runtime_error(fmt::format(
        "generating_function: series ({:.12g}) and quadrature ({:.12g}) disagree at z={}",
        out.series, out.quadrature, z));
  return out;
}

double generating_function(const CountingParams& p, double z) {
  return generating_function_forms(p, z).quadrature;
}

MomentSet moments(const CountingParams& p) {
  p.validate();
  const long double lam = p.effective_lambda();
  const long double s = p.s;
  const SeriesSums sums = counting_sums(lam, p.x, p.tol);
  const long double denom = 1.0L + s * sums.S;
  const long double mean = s * sums.A / denom;

  MomentSet out;
  out.mean = static_cast<double>(mean);
  if (mean < 1e-12L) {
    const long double second = s * (sums.B + sums.A) / denom;
    out.variance = std::max(0.0, static_cast<double>(second - mean * mean));
    return out;  // fano, mandel_q, reduced_covariance undefined
  }

  // F - 1 = N / (A (1+sS)) with N = B(1+sS) - sA^2. Where N cancels (the
  // near-Poisson large-x regime, s ~ 1) recompute it from the deficit sums
  // around the x -> infinity limit: exact algebra, no cancellation.
  long double n_val = sums.B * denom - s * sums.A * sums.A;
  const long double n_scale = sums.B * denom + s * sums.A * sums.A;
  if (lam > 0.0L && lam <= 1000.0L && fabs(n_val) < 1e-9L * n_scale) {
    const DeficitSums d = deficit_sums(lam, p.x);
    const long double elam = std::exp(lam);
    n_val = lam * lam * elam * (1.0L - s)
          - s * lam * lam * elam * d.q
          - d.b * (1.0L - s + s * elam)
          + s * d.b * d.q
          + 2.0L * s * lam * elam * d.a
          - s * d.a * d.a;
  }
  const long double mandel = n_val / (sums.A * denom);
  out.mandel_q = static_cast<double>(mandel);
  out.fano = static_cast<double>(1.0L + mandel);
  out.variance = std::max(0.0, static_cast<double>((1.0L + mandel) * mean));
  out.reduced_covariance = static_cast<double>(mandel / mean);

  // Consistency: <n> must match the central difference of G at z = 1.
  if (mean > 1e-8L) {
    const double h = 1e-5;
    const double gp = generating_function_forms(p, 1.0 + h).quadrature;
    const double gm = generating_function_forms(p, 1.0 - h).quadrature;
    const double fd = (gp - gm) / (2.0 * h);
    if (fabs(fd - out.mean) > 1e-5 * out.mean + 1e-10)
      throw std::runtime_error(fmt::format(
          "moments: series mean {:.12g} disagrees with dG/dz at 1 ({:.12g})", out.mean, fd));
  }
  return out;
}

double reduced_covariance(const CountingParams& p) {
  const MomentSet m = moments(p);
  if (!m.reduced_covariance)
    throw std::runtime_error("reduced_covariance: undefined, mean is below 1e-12");
  return *m.reduced_covariance;
}

std::vector<SweepRow> sweep(std::span<const CountingParams> grid, SweepQuantity quantity) {
  if (grid.empty()) throw std::domain_error("sweep: grid must be non-empty");
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (const CountingParams& p : grid) {
    SweepRow row;
    row.s = p.s;
    row.x = p.x;
    try {
      p.validate();
      row.lambda = p.effective_lambda();
      const MomentSet m = moments(p);
      switch (quantity) {
        case SweepQuantity::mean: row.value = m.mean; break;
        case SweepQuantity::fano: row.value = m.fano; break;
        case SweepQuantity::reduced_covariance: row.value = m.reduced_covariance; break;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace spolight::counting
