#include "loschmidt/spinor.hpp"

#include <cmath>
#include <sstream>

namespace loschmidt {

Vec3 BlochAngles::unit_vector() const {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

PurifiedState SpinorDecomposition::state() const {
  return PurifiedState(coeff_plus * w_plus + coeff_minus * w_minus);
}

double fermi(double beta, double energy) {
  const double x = beta * energy;
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (std::exp(x) + 1.0);
}

ComplexVector plus_state(const BlochAngles& angles) {
  ComplexVector v(2);
  v << std::cos(angles.theta / 2), std::sin(angles.theta / 2) * std::exp(kI * angles.phi);
  return v;
}

ComplexVector minus_state(const BlochAngles& angles) {
  ComplexVector v(2);
  v << std::sin(angles.theta / 2), -std::cos(angles.theta / 2) * std::exp(kI * angles.phi);
  return v;
}

std::pair<ComplexMatrix, ComplexMatrix> projectors(const BlochAngles& angles) {
  const ComplexMatrix n = bloch_operator(angles.unit_vector());
  return {0.5 * (identity(2) + n), 0.5 * (identity(2) - n)};
}

SpinorDecomposition spinor_decomposition(const BlochAngles& angles, double beta, double delta) {
  if (!(beta >= 0.0)) {
    throw Error(ErrorKind::DomainError, "inverse temperature must be >= 0");
  }
  if (!(delta > 0.0) && beta != 0.0) {
    throw Error(ErrorKind::DomainError, "spinor decomposition needs Delta > 0 or beta = 0");
  }
  const ComplexVector p = plus_state(angles);
  const ComplexVector m = minus_state(angles);
  SpinorDecomposition out;
  out.w_plus = kron(p, p);
  out.w_minus = kron(m, m);
  out.coeff_plus = std::sqrt(fermi(beta, delta));
  out.coeff_minus = std::sqrt(fermi(beta, -delta));
  return out;
}

std::array<ComplexMatrix, 3> gamma_matrices() {
  const ComplexMatrix one = identity(2);
  return {kron(pauli_x(), one), kron(pauli_y(), one), kron(pauli_z(), one)};
}

PurifiedState gamma_rotate(const PurifiedState& psi, const Vec3& r_vec, double t) {
  if (psi.dim() != 2) {
    std::ostringstream msg;
    msg << "gamma rotation acts on four-component spinors, got dimension " << psi.vec().size();
    throw Error(ErrorKind::DimMismatch, msg.str());
  }
  const auto gamma = gamma_matrices();
  const ComplexMatrix generator = r_vec[0] * gamma[0] + r_vec[1] * gamma[1] + r_vec[2] * gamma[2];
  return PurifiedState(expm_i(generator, t, Sign::Negative) * psi.vec());
}

Complex quasistatic_overlap_closed_form(double beta, double delta, double omega, double t) {
  return std::exp(-kI * (omega * t)) * fermi(beta, delta) +
         std::exp(kI * (omega * t)) * fermi(beta, -delta);
}

double minkowski_norm_check(const DensityMatrix& rho, double beta, double delta) {
  if (rho.dim() != 2) {
    throw Error(ErrorKind::DimMismatch, "Minkowski norm check needs a 2x2 density matrix");
  }
  if (!(beta >= 0.0) || !(delta >= 0.0)) {
    throw Error(ErrorKind::DomainError, "beta and Delta must be non-negative");
  }
  const ComplexMatrix& m = rho.mat();
  return (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
}

}  // namespace loschmidt
