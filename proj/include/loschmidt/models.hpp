#pragma once

// Model catalog with closed-form references: generic two-level systems, the
// planar two-band family (Creutz ladder), and the three-level extension.
// Units: hbar = k_B = 1, Creutz ladder energies in units of 2K = 1.

#include <functional>
#include <optional>
#include <utility>

#include "loschmidt/dynamics.hpp"
#include "loschmidt/uhlmann.hpp"

namespace loschmidt {

// ---------------------------------------------------------------- two-level

struct TwoLevelSpec {
  Vec3 r_vec{0.0, 0.0, 1.0};
  double beta = 0.0;

  void validate() const;
  double field_strength() const { return norm(r_vec); }
  double omega() const { return field_strength(); }
  ComplexMatrix hamiltonian() const { return bloch_operator(r_vec); }
  DensityMatrix thermal_state() const;
};

/// cos(wt) + i sin(wt) tanh(beta R).
Complex two_level_quasistatic_g(const TwoLevelSpec& spec, double t);

/// rho(0) = (1 + R0 . sigma) / 2 quenched to H_f = R_f . sigma.
Complex two_level_quench_g(const Vec3& r0, const Vec3& r_final, double t);

/// Thermal initial state of the Hamiltonian diag(E, -E) quenched to R_f . sigma.
Complex two_level_thermal_quench_g(double energy, double beta, const Vec3& r_final, double t);

DensityMatrix two_level_quench_initial_state(const Vec3& r0);
DensityMatrix two_level_thermal_initial_state(double energy, double beta);

// ------------------------------------------------------ planar two-band family

/// A loop k -> (n^i(k), n^j(k)) in a plane, with the gap Delta(k); the
/// Hamiltonian is (Delta_k / 2) n_k . sigma with n_k in the x-z plane.
struct PlanarTwoBand {
  std::function<std::pair<double, double>(double)> components;  // (n^i, n^j)
  std::function<std::pair<double, double>(double)> derivatives; // d/dk of the above
  std::function<double(double)> gap;
};

struct CreutzSpec {
  double m = 0.5;
  double theta_flux = 1.0471975511965976;
  int k_points = 1024;

  void validate() const;
  /// The planar map with n^i = sin(Theta) sin k (z component), n^j = m + cos k (x component).
  PlanarTwoBand planar() const;
  double gap(double k) const;
};

/// Winding of the planar map sampled on the uniform grid k in [-pi, pi).
/// Throws GaplessPath when the map comes within 1e-9 of the origin and
/// GridTooCoarse when one grid step turns the map by more than pi/2.
int winding_number(const std::function<std::pair<double, double>(double)>& map, int k_points);

/// (1/2) oint dtheta_k sech(Delta_k / 2T), trapezoidal on the uniform periodic grid.
double two_band_loop_integral(const PlanarTwoBand& model, int k_points, double temperature);

/// cos(pi w1) cos(loop integral).
double two_band_uhlmann_closed_form(const PlanarTwoBand& model, int k_points, double temperature);
double two_band_uhlmann_closed_form(const CreutzSpec& spec, double temperature);

int creutz_winding_number(const CreutzSpec& spec);

/// Temperature at which |loop integral| = pi/2, by bisection on [1e-3, 1e3]
/// (expanded x10 up to twice). Empty when no sign change exists.
std::optional<double> creutz_critical_temperature(const CreutzSpec& spec);

/// rho_k = (1 - tanh(Delta_k / 2T) n_k . sigma) / 2 for the phi_k = 0 plane.
ComplexMatrix two_band_density(const PlanarTwoBand& model, double k, double temperature);

/// Closed loop s in [0, 1] -> k = -pi + 2 pi s.
DensityPath two_band_path(const PlanarTwoBand& model, double temperature,
                          int n_steps = kDefaultUhlmannSteps);
DensityPath creutz_path(const CreutzSpec& spec, double temperature,
                        int n_steps = kDefaultUhlmannSteps);

// -------------------------------------------------------------- three-level

struct ThreeLevelSpec {
  double r = 1.0;
  double theta = 0.0;
  double phi = 0.0;
  double beta = 0.0;

  void validate() const;
  double omega() const { return r; }
};

/// R diag(1, -1, 1).
ComplexMatrix three_level_hamiltonian(double r);
/// R [[n . sigma, 0], [0, 1]] with n = (sin t cos p, sin t sin p, cos t).
ComplexMatrix three_level_quench_hamiltonian(double r, double theta, double phi);

Complex three_level_quasistatic_g(const ThreeLevelSpec& spec, double t);
Complex three_level_quench_g(const ThreeLevelSpec& spec, double t);

/// [-2 cosh(bR) cos(pi / cosh(bR)) + e^{-bR}] / (2 cosh(bR) + e^{-bR}).
double three_level_uhlmann_closed_form(double r, double beta);

/// The zero of the closed form, residual below 1e-10.
double three_level_uhlmann_tstar(double r);

/// Thermal states of the quench Hamiltonian around the latitude circle
/// theta = pi/2, phi = phi_of_s(s). The default schedule is phi = 2 pi s.
DensityPath three_level_circle_path(double r, double beta, int n_steps = kDefaultUhlmannSteps,
                                    std::function<double(double)> phi_of_s = {});

enum class CriticalKind { ThreeLevelQuasistatic, ThreeLevelQuench };

/// T_q = 2R / ln 2 and T_h = 2R / ln(1 + sec theta). Theta outside
/// [0, pi/2) raises DomainError for the quench.
double critical_temperature_analytic(CriticalKind kind, double r, double theta = 0.0);

}  // namespace loschmidt
