#include "loschmidt/purification.hpp"

#include <cmath>
#include <sstream>

namespace loschmidt {

namespace {

ComplexMatrix polar_unitary(const ComplexMatrix& w) {
  Eigen::JacobiSVD<ComplexMatrix> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimensions " << a << " and " << b << " differ";
    throw Error(ErrorKind::DimMismatch, msg.str());
  }
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix mat, std::optional<double> inverse_temperature)
    : mat_(std::move(mat)), inverse_temperature_(inverse_temperature) {
  if (mat_.rows() == 0 || mat_.rows() != mat_.cols()) {
    throw Error(ErrorKind::DimMismatch, "density matrix must be square and non-empty");
  }
  spectrum_ = eig_hermitian(mat_);
  const double trace_err = std::abs(mat_.trace() - Complex(1.0));
  if (trace_err > kTraceTol) {
    std::ostringstream msg;
    msg << "trace deviates from 1 by " << trace_err;
    throw Error(ErrorKind::DomainError, msg.str());
  }
  if (spectrum_.values(0) < -kClampTol) {
    std::ostringstream msg;
    msg << "density matrix has eigenvalue " << spectrum_.values(0);
    throw Error(ErrorKind::NotPositive, msg.str());
  }
}

DensityMatrix DensityMatrix::thermal(const ComplexMatrix& hamiltonian, double beta) {
  if (!(beta >= 0.0)) {
    throw Error(ErrorKind::DomainError, "inverse temperature must be >= 0");
  }
  const EigenSystem es = eig_hermitian(hamiltonian);
  const double e0 = es.values(0);
  RealVector weights(es.values.size());
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    weights(k) = std::exp(-beta * (es.values(k) - e0));
  }
  weights /= weights.sum();
  ComplexMatrix rho = es.vectors * weights.cast<Complex>().asDiagonal() * es.vectors.adjoint();
  return DensityMatrix(0.5 * (rho + rho.adjoint()), beta);
}

Amplitude Amplitude::from_matrix(const ComplexMatrix& w) {
  if (w.rows() != w.cols()) {
    throw Error(ErrorKind::DimMismatch, "amplitude must be square");
  }
  return {w, polar_unitary(w)};
}

PurifiedState::PurifiedState(ComplexVector vec) : vec_(std::move(vec)) {
  const auto n = vec_.size();
  d_ = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (n == 0 || d_ * d_ != n) {
    std::ostringstream msg;
    msg << "purified vector length " << n << " is not a perfect square";
    throw Error(ErrorKind::DimMismatch, msg.str());
  }
}

Amplitude amplitude_from_density(const DensityMatrix& rho,
                                 const std::optional<ComplexMatrix>& gauge) {
  const ComplexMatrix u = gauge.value_or(identity(rho.dim()));
  require_same_dim(u.rows(), rho.dim(), "gauge");
  if (u.rows() != u.cols() || unitarity_defect(u) > kHermitianTol) {
    throw Error(ErrorKind::NotUnitary, "gauge is not unitary");
  }
  return {sqrtm_psd(rho.mat()) * u, u};
}

// In the eigenbasis of rho the amplitude is diag(sqrt(lambda)) U and
// sum_i sqrt(lambda_i) e_i (x) U^T e_i is exactly its row-major stacking.
// Rotating system by S and ancilla by conj(S) maps that stacking onto the
// row-major stacking of S W S^dagger, so the vector is basis independent.
PurifiedState purify(const Amplitude& w) {
  const Eigen::Index d = w.mat.rows();
  ComplexVector vec(d * d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index c = 0; c < d; ++c) {
      vec(a * d + c) = w.mat(a, c);
    }
  }
  return PurifiedState(std::move(vec));
}

Amplitude amplitude_of(const PurifiedState& psi) {
  const Eigen::Index d = psi.dim();
  ComplexMatrix w(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index c = 0; c < d; ++c) {
      w(a, c) = psi.vec()(a * d + c);
    }
  }
  return Amplitude::from_matrix(w);
}

DensityMatrix reduce(const PurifiedState& psi) {
  const ComplexMatrix projector = psi.vec() * psi.vec().adjoint();
  ComplexMatrix rho = partial_trace_second(projector, psi.dim());
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

Complex overlap(const PurifiedState& a, const PurifiedState& b) {
  require_same_dim(a.dim(), b.dim(), "overlap");
  return a.vec().dot(b.vec());
}

Complex hilbert_schmidt(const ComplexMatrix& w1, const ComplexMatrix& w2) {
  require_same_dim(w1.rows(), w2.rows(), "Hilbert-Schmidt product");
  return (w1.adjoint() * w2).trace();
}

Complex expectation(const PurifiedState& psi, const ComplexMatrix& observable) {
  require_same_dim(observable.rows(), psi.dim(), "expectation");
  const ComplexMatrix lifted = kron(observable, identity(psi.dim()));
  return psi.vec().dot(lifted * psi.vec());
}

bool is_parallel(const Amplitude& w1, const Amplitude& w2, double tol) {
  require_same_dim(w1.mat.rows(), w2.mat.rows(), "parallelity");
  const ComplexMatrix x = w1.mat.adjoint() * w2.mat;
  if (max_abs(x - x.adjoint()) > tol) {
    return false;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (x + x.adjoint()),
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() > tol;
}

// W = sqrt(rho) V is parallel to R when R^dagger sqrt(rho) V > 0, i.e. V is the
// adjoint of the polar unitary of R^dagger sqrt(rho).
Amplitude parallel_amplitude(const DensityMatrix& rho, const Amplitude& reference) {
  require_same_dim(rho.dim(), reference.mat.rows(), "parallel amplitude");
  const ComplexMatrix root = sqrtm_psd(rho.mat());
  const ComplexMatrix v = polar_unitary(reference.mat.adjoint() * root).adjoint();
  return {root * v, v};
}

}  // namespace loschmidt
