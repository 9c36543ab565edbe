#pragma once

// Uhlmann parallel transport along a loop of full-rank density matrices.
//
// With W = sqrt(rho) U the parallel condition W^dagger dW = dW^dagger W is
// solved by dU = -A_U U, where in the eigenbasis of rho
//   (A_U)_ij = -<i|[d sqrt(rho), sqrt(rho)]|j> / (lambda_i + lambda_j).
// The loop is discretized with midpoint samples; each step exp(-A_U) is
// exactly unitary, and later steps multiply from the left.

#include <functional>
#include <optional>
#include <vector>

#include "loschmidt/purification.hpp"

namespace loschmidt {

inline constexpr int kDefaultUhlmannSteps = 1024;
inline constexpr int kMinUhlmannSteps = 64;
/// Uhlmann phases within this distance of 0 or pi are snapped onto them.
inline constexpr double kPhaseSnapTol = 1e-4;

class DensityPath {
 public:
  using Sampler = std::function<ComplexMatrix(double)>;

  /// `sampler` maps s in [0, 1] to a density matrix.
  DensityPath(Sampler sampler, bool closed, int n_steps = kDefaultUhlmannSteps);

  DensityMatrix at(double s) const;
  bool closed() const { return closed_; }
  int n_steps() const { return n_steps_; }

  DensityPath with_steps(int n_steps) const { return DensityPath(sampler_, closed_, n_steps); }

 private:
  Sampler sampler_;
  bool closed_;
  int n_steps_;
};

struct Holonomy {
  ComplexMatrix matrix;
  int n_steps = 0;
};

/// A_U evaluated on the displacement drho (the one-form already contracted
/// with ds). The result is anti-Hermitian.
ComplexMatrix uhlmann_connection_step(const DensityMatrix& rho, const ComplexMatrix& drho);

/// Derivative of sqrt(rho) along drho, from sqrt(rho) X + X sqrt(rho) = drho.
ComplexMatrix sqrt_derivative(const DensityMatrix& rho, const ComplexMatrix& drho);

/// Per-step connection samples A_U(s_{k+1/2}) * ds along the path.
std::vector<ComplexMatrix> connection_samples(const DensityPath& path);

Holonomy holonomy(const DensityPath& path);

/// Tr(rho(0) P exp(-oint A_U)).
Complex uhlmann_loschmidt(const DensityPath& path);

/// arg of the Uhlmann amplitude; empty when its magnitude is <= zero_tol.
/// Values within kPhaseSnapTol of 0 or pi are snapped onto them.
std::optional<double> uhlmann_phase(const DensityPath& path, double zero_tol = 1e-10);

std::optional<double> snap_phase(Complex g, double zero_tol = 1e-10);

/// Amplitudes W(s_k) at the grid nodes s_k = k / n_steps, starting from w0.
std::vector<Amplitude> transport_trajectory(const Amplitude& w0, const DensityPath& path);

/// Final transported amplitude W(1).
Amplitude transport_amplitude(const Amplitude& w0, const DensityPath& path);

}  // namespace loschmidt
