#include "loschmidt/matrix_core.hpp"

#include <cmath>
#include <sstream>

namespace loschmidt {

double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::DimMismatch, "matrix is not square");
  }
  return max_abs(a - a.adjoint());
}

double unitarity_defect(const ComplexMatrix& u) {
  return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()));
}

bool all_finite(const ComplexMatrix& a) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a.data()[i].real()) || !std::isfinite(a.data()[i].imag())) {
      return false;
    }
  }
  return true;
}

EigenSystem eig_hermitian(const ComplexMatrix& a) {
  if (!all_finite(a)) {
    throw Error(ErrorKind::NotHermitian, "matrix has non-finite entries");
  }
  const double defect = hermiticity_defect(a);
  if (defect > kHermitianTol) {
    std::ostringstream msg;
    msg << "max |A - A^dagger| = " << defect;
    throw Error(ErrorKind::NotHermitian, msg.str());
  }
  // Symmetrize so the solver sees an exactly Hermitian input.
  const ComplexMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix expm_i(const ComplexMatrix& h, double t, Sign sign) {
  const EigenSystem es = eig_hermitian(h);
  const double s = static_cast<int>(sign);
  ComplexVector phases(es.values.size());
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    phases(k) = std::exp(kI * (s * es.values(k) * t));
  }
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

ComplexMatrix sqrtm_psd(const ComplexMatrix& rho) {
  const EigenSystem es = eig_hermitian(rho);
  RealVector roots(es.values.size());
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    const double lambda = es.values(k);
    if (lambda < -kNegativeTol) {
      std::ostringstream msg;
      msg << "eigenvalue " << lambda << " below " << -kNegativeTol;
      throw Error(ErrorKind::NotPositive, msg.str());
    }
    roots(k) = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
  }
  return es.vectors * roots.cast<Complex>().asDiagonal() * es.vectors.adjoint();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace_second(const ComplexMatrix& m, Eigen::Index d) {
  if (d <= 0 || m.rows() != d * d || m.cols() != d * d) {
    std::ostringstream msg;
    msg << "operator of size " << m.rows() << "x" << m.cols() << " is not " << d * d << "x"
        << d * d;
    throw Error(ErrorKind::DimMismatch, msg.str());
  }
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      Complex acc = 0.0;
      for (Eigen::Index c = 0; c < d; ++c) {
        acc += m(a * d + c, b * d + c);
      }
      out(a, b) = acc;
    }
  }
  return out;
}

ComplexMatrix pauli_x() {
  ComplexMatrix s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  return s;
}

ComplexMatrix pauli_y() {
  ComplexMatrix s(2, 2);
  s << 0.0, -kI, kI, 0.0;
  return s;
}

ComplexMatrix pauli_z() {
  ComplexMatrix s(2, 2);
  s << 1.0, 0.0, 0.0, -1.0;
  return s;
}

ComplexMatrix identity(Eigen::Index d) { return ComplexMatrix::Identity(d, d); }

ComplexMatrix bloch_operator(const Vec3& r) {
  return r[0] * pauli_x() + r[1] * pauli_y() + r[2] * pauli_z();
}

double norm(const Vec3& r) { return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]); }

}  // namespace loschmidt
