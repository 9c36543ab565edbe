#pragma once

// Quasistatic and quench evolution of amplitudes and the Loschmidt amplitude
// G(t) = <W(0)|W(t)> = Tr(rho(0) e^{-iHt}), with hbar = k_B = 1.

#include <functional>
#include <optional>
#include <vector>

#include "loschmidt/purification.hpp"

namespace loschmidt {

/// |G| at or below this value leaves the phase undefined.
inline constexpr double kPhaseZeroTol = 1e-10;
/// Free-energy densities are capped here and flagged divergent.
inline constexpr double kRateCap = 80.0;
/// Commutator bound for the quasistatic condition [rho, H] = 0.
inline constexpr double kCommutatorTol = 1e-10;

enum class ProcessKind { Quasistatic, Quench };

struct Process {
  ProcessKind kind;
  ComplexMatrix hamiltonian;

  /// Throws DomainError when a quasistatic process does not commute with rho0.
  void validate(const DensityMatrix& rho0) const;
};

struct LoschmidtSample {
  double t = 0.0;
  Complex g;
  double echo = 0.0;
  std::optional<double> theta_d;
  double f = 0.0;
  bool divergent = false;
};

struct FreeEnergy {
  double value = 0.0;
  bool divergent = false;
};

Amplitude evolve_amplitude(const Amplitude& w0, const ComplexMatrix& hamiltonian, double t);

Complex loschmidt_amplitude(const DensityMatrix& rho0, const ComplexMatrix& hamiltonian, double t);

/// arg(G) in (-pi, pi]; negative reals map to +pi. Empty when |G| <= zero_tol.
std::optional<double> dynamical_phase(Complex g, double zero_tol = kPhaseZeroTol);

/// Principal argument with the (-pi, pi] convention.
double principal_arg(Complex g);

/// -ln|G|^2 / L. A numerically vanishing amplitude (|G| <= kPhaseZeroTol) or a
/// value at or beyond the cap is reported as the cap with the divergent flag.
FreeEnergy free_energy_density(Complex g, int system_size = 1, double cap = kRateCap);

LoschmidtSample sample_loschmidt(Complex g, double t);

enum class PhaseMode { Principal, Continuous };

/// G, echo, phase and free energy on a time grid. Continuous mode accumulates
/// phase increments along the grid instead of reporting principal values.
std::vector<LoschmidtSample> loschmidt_series(const DensityMatrix& rho0,
                                              const ComplexMatrix& hamiltonian,
                                              const std::vector<double>& times,
                                              PhaseMode mode = PhaseMode::Principal);

/// Principal phases turned into a continuous track; undefined entries stay undefined.
std::vector<std::optional<double>> unwrap_phases(const std::vector<std::optional<double>>& phases);

struct TimeMinimum {
  double t = 0.0;
  double magnitude = 0.0;
};

struct ZeroSearch {
  std::vector<TimeMinimum> zeros;       // refined |G| below kZeroAcceptTol
  std::vector<TimeMinimum> near_misses; // refined minima in [kZeroAcceptTol, kZeroCandidateTol)
};

inline constexpr double kZeroCandidateTol = 1e-3;
inline constexpr double kZeroAcceptTol = 1e-8;

/// Grid scan of |G(t)| followed by golden-section refinement of every local
/// grid minimum.
ZeroSearch find_zero_times(const std::function<Complex(double)>& g, double t_min, double t_max,
                           int n_grid);

ZeroSearch find_zero_times(const DensityMatrix& rho0, const ComplexMatrix& hamiltonian,
                           double t_min, double t_max, int n_grid);

/// Golden-section minimization of f on [a, b].
double golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-13);

}  // namespace loschmidt
