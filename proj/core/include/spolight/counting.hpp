#pragma once
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <spolight/specfun.hpp>

namespace spolight::counting {

using specfun::SeriesTolerance;

/// Coupling of the detector occupation to the interaction time: either a
/// fixed lambda or lambda = eta * x with eta acting as a quantum efficiency.
struct LambdaMode {
  enum class Kind { fixed, proportional };
  Kind kind = Kind::fixed;
  double value = 1.0;  // lambda for fixed, eta in (0,1] for proportional

  static LambdaMode fixed(double lambda) { return {Kind::fixed, lambda}; }
  static LambdaMode proportional(double eta) { return {Kind::proportional, eta}; }
};

/// Parameters of the counting-weight model: coupling s, occupation lambda
/// (or eta), and the dimensionless interaction time x = sigma*mu*tau.
struct CountingParams {
  double s = 1.0;
  LambdaMode lambda = LambdaMode::fixed(1.0);
  double x = 5.0;
  SeriesTolerance tol{};

  double effective_lambda() const {
    return lambda.kind == LambdaMode::Kind::fixed ? lambda.value : lambda.value * x;
  }
  void validate() const;
};

/// Weight distribution W_0..W_nmax with a proven bound on the truncated mass.
struct CountDistribution {
  std::vector<double> weights;
  double tail_bound = 0.0;
};

/// Moments of the weight distribution. fano, mandel_q and reduced_covariance
/// are absent when the mean is below 1e-12 (degenerate all-W0 distribution).
struct MomentSet {
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> fano;
  std::optional<double> mandel_q;            // F - 1
  std::optional<double> reduced_covariance;  // (F - 1)/mean
};

/// A quantity evaluated along both of the model's algebraic routes: the
/// truncated weight series and the Bessel-integral quadrature.
struct DualValue {
  double series = 0.0;
  double quadrature = 0.0;
};

/// W_0 by both routes. They must agree within 1e-8; disagreement throws.
DualValue weight_zero_forms(const CountingParams& p);

/// W_0 = [1 + s sum_n lambda^n/n! P(n,x)]^(-1); series value after the
/// internal series-vs-quadrature consistency check.
double weight_zero(const CountingParams& p);

/// Single weight W_n = W_0 s lambda^n/n! P(n,x) for n >= 1 (W_0 for n = 0).
double weight(const CountingParams& p, int n);

/// Weights through the index where the Poisson tail bound drops below
/// tol.abs_tol; sum(weights) + tail_bound stays within 1e-9 of 1.
CountDistribution distribution(const CountingParams& p);

/// Generating function G(z) = sum_n W_n z^n by both routes (quadrature per
/// the Bessel-integral form on [0,1], series as the direct weighted sum).
DualValue generating_function_forms(const CountingParams& p, double z);

/// G(z) via the quadrature route, checked against the series within 1e-8.
double generating_function(const CountingParams& p, double z);

/// Mean, variance, Fano factor F, Mandel Q = F-1 and reduced covariance
/// R = (F-1)/mean by direct series summation, cross-checked internally
/// against a central finite difference of G at z = 1 (step 1e-5).
MomentSet moments(const CountingParams& p);

/// R = (F - 1)/mean; throws when the mean is degenerate (< 1e-12).
double reduced_covariance(const CountingParams& p);

enum class SweepQuantity { mean, fano, reduced_covariance };

/// One evaluated grid point. value is absent if the quantity is undefined
/// there or evaluation failed; error carries the failure message.
struct SweepRow {
  double s = 0.0;
  double lambda = 0.0;
  double x = 0.0;
  std::optional<double> value;
  std::string error;
};

/// Evaluates the quantity at each grid point independently, in input order.
/// Per-row failures are recorded in the row, never aborting the sweep.
std::vector<SweepRow> sweep(std::span<const CountingParams> grid, SweepQuantity quantity);

}  // namespace spolight::counting
