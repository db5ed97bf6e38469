#include <spolight/plasmon.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace spolight::plasmon {

namespace {
constexpr double rad_to_deg = 180.0 / std::numbers::pi;
}

void OpticalConfig::validate() const {
  if (!(lambda0_nm > 0)) throw std::domain_error("OpticalConfig: lambda0_nm must be > 0");
  if (!(d_nm > 0)) throw std::domain_error("OpticalConfig: d_nm must be > 0");
  if (!(ly_nm > 0)) throw std::domain_error("OpticalConfig: ly_nm must be > 0");
  if (!(rel_linewidth >= 0)) throw std::domain_error("OpticalConfig: rel_linewidth must be >= 0");
  if (!(eps3 > 0) || !(eps1 > eps3))
    throw std::domain_error("OpticalConfig: total internal reflection needs eps1 > eps3 > 0");
  if (!(eps_r > 1))
    throw std::domain_error("OpticalConfig: eps_r must exceed 1 (sqrt(eps_r - 1) must be real)");
  if (!(eps_i > 0)) throw std::domain_error("OpticalConfig: eps_i must be > 0");
}

PlasmonDerived derive_plasmon_parameters(const OpticalConfig& cfg, double mu_over_omega0) {
  cfg.validate();
  if (!(mu_over_omega0 > 0))
    throw std::domain_error("derive_plasmon_parameters: mu_over_omega0 must be > 0");

  const double er1 = cfg.eps_r - 1.0;
  const double root_er1 = std::sqrt(er1);
  const double pi = std::numbers::pi;

  PlasmonDerived out;
  out.ksp_re = 1.0 + 1.0 / (2.0 * er1);
  out.ksp_im = cfg.eps_i / (2.0 * er1 * er1);
  out.k2z_re = root_er1;
  out.k2z_im = cfg.eps_i / (2.0 * root_er1);

  out.lsp_nm = er1 * er1 * cfg.lambda0_nm / (2.0 * pi * cfg.eps_i);
  out.delta2_nm = cfg.lambda0_nm / (4.0 * pi * root_er1);

  out.theta_t_deg = std::asin(std::sqrt(cfg.eps3 / cfg.eps1)) * rad_to_deg;
  const double sin_tc = out.ksp_re / std::sqrt(cfg.eps1);
  if (sin_tc > 1.0)
    throw std::domain_error(fmt::format(
        "derive_plasmon_parameters: no resonance angle, ksp_re/sqrt(eps1) = {} > 1", sin_tc));
  out.theta_c_deg = std::asin(sin_tc) * rad_to_deg;

  out.asp_nm2 = out.lsp_nm * cfg.ly_nm;
  out.mtr = transverse_mode_count(out.asp_nm2, out.delta2_nm, cfg.lambda0_nm);
  out.sigma = 1.0 / out.mtr;

  const double lambda0_m = cfg.lambda0_nm * 1e-9;
  out.delta_nu_hz = cfg.rel_linewidth * speed_of_light_m_per_s / lambda0_m;
  const double omega0 = 2.0 * pi * speed_of_light_m_per_s / lambda0_m;
  out.mu_hz = mu_over_omega0 * omega0;
  out.tau_s_s = 1.0 / out.mu_hz;
  out.tau_c_s = out.tau_s_s / 2.0;
  return out;
}

std::complex<double> exact_dispersion(std::complex<double> eps2, double eps3) {
  const std::complex<double> denom = eps2 + eps3;
  if (std::abs(denom) < 1e-12)
    throw std::domain_error("exact_dispersion: eps2 + eps3 is degenerate (|sum| < 1e-12)");
  return std::sqrt(eps2 * eps3 / denom);
}

double transverse_mode_count(double area_nm2, double z1_nm, double lambda0_nm) {
  if (!(area_nm2 > 0) || !(z1_nm > 0) || !(lambda0_nm > 0))
    throw std::domain_error("transverse_mode_count: all arguments must be > 0");
  return std::numbers::pi * area_nm2 / (z1_nm * lambda0_nm);
}

double scaled_interaction_time(double sigma, double mu_hz, double tau_s) {
  if (!(sigma >= 0) || !(mu_hz >= 0) || !(tau_s >= 0))
    throw std::domain_error("scaled_interaction_time: arguments must be >= 0");
  return sigma * mu_hz * tau_s;
}

}  // namespace spolight::plasmon
