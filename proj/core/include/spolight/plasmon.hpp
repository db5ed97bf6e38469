#pragma once
#include <complex>

namespace spolight::plasmon {

/// Speed of light, fixed for all derived quantities.
inline constexpr double speed_of_light_m_per_s = 2.99792458e8;

/// Quoted transverse mode count for the gold / He-Ne configuration. The
/// printed formula pi*A/(z1*lambda0) gives ~4.7e5 for the same geometry;
/// both are exposed and downstream calibration defaults use 1/152000.
inline constexpr double quoted_mtr_gold_hene = 152000.0;

/// Quoted lower bound on the plasmon area, in units of lambda0^2.
inline constexpr double quoted_asp_lambda0sq = 2400.0;

/// Material constants and beam parameters of the Kretschmann stack.
/// Defaults are the gold film / He-Ne laser values (Johnson-Christy
/// permittivity at 633 nm).
struct OpticalConfig {
  double lambda0_nm = 633.0;      ///< vacuum wavelength
  double eps1 = 2.25;             ///< substrate (prism side) permittivity
  double eps_r = 25.82;           ///< |Re eps2| of the metal, eps2 = -eps_r + i eps_i
  double eps_i = 1.63;            ///< Im eps2
  double eps3 = 1.0;              ///< exit medium permittivity
  double d_nm = 45.0;             ///< metal film thickness
  double ly_nm = 25000.0;         ///< transverse spot extent L_y
  double rel_linewidth = 0.018;   ///< Delta lambda / lambda0

  void validate() const;
};

/// Every derived surface-plasmon quantity. Wave numbers are in units of
/// omega0/c, lengths in nm, angles in degrees, rates in 1/s, times in s.
struct PlasmonDerived {
  double ksp_re = 0, ksp_im = 0;    ///< resonant in-plane wave number
  double k2z_re = 0, k2z_im = 0;    ///< perpendicular wave number in the metal
  double lsp_nm = 0;                ///< propagation length
  double delta2_nm = 0;             ///< field-energy decay scale in the metal
  double theta_t_deg = 0;           ///< total-reflection angle
  double theta_c_deg = 0;           ///< plasmon-resonance angle
  double asp_nm2 = 0;               ///< plasmon area L_sp * L_y
  double mtr = 0;                   ///< transverse mode count (printed formula)
  double sigma = 0;                 ///< transverse degeneracy 1/mtr
  double delta_nu_hz = 0;           ///< spectral width
  double mu_hz = 0;                 ///< relaxation rate
  double tau_s_s = 0;               ///< lifetime 1/mu
  double tau_c_s = 0;               ///< coherence time 1/(2 mu)
};

/// Derives all quantities from the stack constants.
/// mu_over_omega0 is imported, not computed; 0.032 is the gold value.
PlasmonDerived derive_plasmon_parameters(const OpticalConfig& cfg,
                                         double mu_over_omega0 = 0.032);

/// Exact (implicit-relation) dispersion: principal square root of
/// eps2*eps3/(eps2+eps3), in units of omega/c. Used as a cross-check of the
/// expanded ksp above.
std::complex<double> exact_dispersion(std::complex<double> eps2, double eps3);

/// Transverse mode count pi*A/(z1*lambda0) through an aperture of area A for
/// a radiation center at depth z1 (von Laue count when z1 = lambda0).
double transverse_mode_count(double area_nm2, double z1_nm, double lambda0_nm);

/// Dimensionless interaction time x = sigma * mu * tau.
double scaled_interaction_time(double sigma, double mu_hz, double tau_s);

}  // namespace spolight::plasmon
