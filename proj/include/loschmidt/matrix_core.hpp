#pragma once

// Dense complex linear algebra for few-level systems (d <= 16).
// Exponentials and square roots go through the Hermitian eigendecomposition,
// so unitary results stay unitary to machine precision.

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "loschmidt/error.hpp"

namespace loschmidt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Vec3 = std::array<double, 3>;

inline constexpr Complex kI{0.0, 1.0};

/// Tolerance on max |A - A^dagger| accepted as Hermitian.
inline constexpr double kHermitianTol = 1e-10;
/// Eigenvalues above -kClampTol are treated as roundoff and clamped to zero.
inline constexpr double kClampTol = 1e-12;
/// Eigenvalues below -kNegativeTol make a matrix genuinely indefinite.
inline constexpr double kNegativeTol = 1e-9;

struct EigenSystem {
  RealVector values;     // ascending
  ComplexMatrix vectors; // orthonormal columns
};

enum class Sign : int { Negative = -1, Positive = 1 };

double hermiticity_defect(const ComplexMatrix& a);
double unitarity_defect(const ComplexMatrix& u);
double max_abs(const ComplexMatrix& a);
bool all_finite(const ComplexMatrix& a);

EigenSystem eig_hermitian(const ComplexMatrix& a);

/// e^{sign * i * H * t}; Sign::Negative gives the Schroedinger propagator.
ComplexMatrix expm_i(const ComplexMatrix& h, double t, Sign sign);

/// Principal square root of a positive-semidefinite matrix.
ComplexMatrix sqrtm_psd(const ComplexMatrix& rho);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tr_2 over the ancilla factor of a d^2 x d^2 operator, composite index a*d + c.
ComplexMatrix partial_trace_second(const ComplexMatrix& m, Eigen::Index d);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix identity(Eigen::Index d);

/// R . sigma for a real 3-vector R.
ComplexMatrix bloch_operator(const Vec3& r);

double norm(const Vec3& r);

}  // namespace loschmidt
