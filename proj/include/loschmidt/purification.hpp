#pragma once

// Amplitudes W with rho = W W^dagger, their purified vectors |W> in the
// doubled space system (x) ancilla, and the Uhlmann parallelity relation.

#include <optional>

#include "loschmidt/matrix_core.hpp"

namespace loschmidt {

/// Minimum eigenvalue for a density matrix to count as faithful (full rank).
inline constexpr double kFullRankTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positivity.
  explicit DensityMatrix(ComplexMatrix mat, std::optional<double> inverse_temperature = {});

  /// e^{-beta H} / Tr e^{-beta H}.
  static DensityMatrix thermal(const ComplexMatrix& hamiltonian, double beta);

  const ComplexMatrix& mat() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }
  std::optional<double> inverse_temperature() const { return inverse_temperature_; }

  const EigenSystem& spectrum() const { return spectrum_; }
  double min_eigenvalue() const { return spectrum_.values(0); }
  bool full_rank() const { return min_eigenvalue() > kFullRankTol; }

 private:
  ComplexMatrix mat_;
  std::optional<double> inverse_temperature_;
  EigenSystem spectrum_;
};

/// W = sqrt(rho) * gauge; the gauge is the unitary factor of the polar decomposition.
struct Amplitude {
  ComplexMatrix mat;
  ComplexMatrix gauge;

  /// Wraps an arbitrary square W, recovering its gauge from the polar decomposition.
  static Amplitude from_matrix(const ComplexMatrix& w);

  DensityMatrix density() const { return DensityMatrix(mat * mat.adjoint()); }
};

class PurifiedState {
 public:
  /// Requires vec.size() to be a perfect square.
  explicit PurifiedState(ComplexVector vec);

  const ComplexVector& vec() const { return vec_; }
  /// System dimension d (the vector has d^2 components).
  Eigen::Index dim() const { return d_; }

 private:
  ComplexVector vec_;
  Eigen::Index d_;
};

Amplitude amplitude_from_density(const DensityMatrix& rho,
                                 const std::optional<ComplexMatrix>& gauge = std::nullopt);

/// |W> = sum_i sqrt(lambda_i) |i> (x) U^T|i>, expressed back in the input basis.
PurifiedState purify(const Amplitude& w);

/// Inverse of purify up to gauge: the matrix whose row-major entries are the vector.
Amplitude amplitude_of(const PurifiedState& psi);

DensityMatrix reduce(const PurifiedState& psi);

Complex overlap(const PurifiedState& a, const PurifiedState& b);

/// Hilbert-Schmidt product Tr(W1^dagger W2).
Complex hilbert_schmidt(const ComplexMatrix& w1, const ComplexMatrix& w2);

/// <psi| O (x) 1 |psi>.
Complex expectation(const PurifiedState& psi, const ComplexMatrix& observable);

/// W1 || W2: W1^dagger W2 Hermitian to tol with all eigenvalues above tol.
bool is_parallel(const Amplitude& w1, const Amplitude& w2, double tol);

/// The amplitude of rho that is parallel to `reference` (finite Uhlmann transport).
Amplitude parallel_amplitude(const DensityMatrix& rho, const Amplitude& reference);

}  // namespace loschmidt
