#pragma once

// Spinor picture of two-level purification: spectral projectors, the
// four-component purified spinor and quasistatic evolution as a rotation
// generated by Gamma_i = sigma_i (x) 1.

#include <array>
#include <utility>

#include "loschmidt/dynamics.hpp"

namespace loschmidt {

struct BlochAngles {
  double theta = 0.0;
  double phi = 0.0;

  Vec3 unit_vector() const;
};

struct SpinorDecomposition {
  ComplexVector w_plus;
  ComplexVector w_minus;
  double coeff_plus = 0.0;
  double coeff_minus = 0.0;

  /// coeff_plus * w_plus + coeff_minus * w_minus.
  PurifiedState state() const;
};

/// The single place where the level splitting Delta = 2R is derived from |R|.
inline double gap_from_field_strength(double r) { return 2.0 * r; }

/// 1 / (e^{beta e} + 1), evaluated without overflow.
double fermi(double beta, double energy);

/// |+R> = (cos(theta/2), sin(theta/2) e^{i phi}), |-R> = (sin(theta/2), -cos(theta/2) e^{i phi}).
ComplexVector plus_state(const BlochAngles& angles);
ComplexVector minus_state(const BlochAngles& angles);

/// P+- = (1 +- n . sigma) / 2.
std::pair<ComplexMatrix, ComplexMatrix> projectors(const BlochAngles& angles);

SpinorDecomposition spinor_decomposition(const BlochAngles& angles, double beta, double delta);

/// Gamma_i = sigma_i (x) 1 for i = x, y, z.
std::array<ComplexMatrix, 3> gamma_matrices();

/// e^{-i R_i t Gamma_i} |psi>.
PurifiedState gamma_rotate(const PurifiedState& psi, const Vec3& r_vec, double t);

/// e^{-i omega t} / (e^{beta Delta} + 1) + e^{i omega t} / (e^{-beta Delta} + 1).
Complex quasistatic_overlap_closed_form(double beta, double delta, double omega, double t);

/// det rho of a 2x2 density matrix; for the thermal state this is sech^2(beta Delta / 2) / 4.
double minkowski_norm_check(const DensityMatrix& rho, double beta, double delta);

}  // namespace loschmidt
