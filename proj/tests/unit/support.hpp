#pragma once

#include <random>

#include "loschmidt/matrix_core.hpp"
#include "loschmidt/purification.hpp"

namespace testing_support {

using namespace loschmidt;

inline ComplexMatrix random_matrix(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index d) {
  const ComplexMatrix m = random_matrix(rng, d);
  return 0.5 * (m + m.adjoint());
}

inline ComplexMatrix random_unitary(std::mt19937_64& rng, Eigen::Index d) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(rng, d));
  return qr.householderQ();
}

// Full rank with the smallest eigenvalue bounded away from zero.
inline DensityMatrix random_density(std::mt19937_64& rng, Eigen::Index d) {
  const ComplexMatrix m = random_matrix(rng, d);
  ComplexMatrix rho = m * m.adjoint() + 0.05 * identity(d);
  rho /= rho.trace().real();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

// Term-by-term power series of exp(z A).
inline ComplexMatrix taylor_exp(const ComplexMatrix& a, Complex z, int terms = 60) {
  ComplexMatrix term = identity(a.rows());
  ComplexMatrix sum = term;
  for (int k = 1; k < terms; ++k) {
    term = term * a * z / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

// Thermal two-level state built directly from the Bloch form.
inline ComplexMatrix thermal_bloch(const Vec3& r, double beta) {
  const double len = norm(r);
  const Vec3 n{r[0] / len, r[1] / len, r[2] / len};
  return 0.5 * (identity(2) - std::tanh(beta * len) * bloch_operator(n));
}

}  // namespace testing_support
