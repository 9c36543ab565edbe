#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "loschmidt/spinor.hpp"
#include "support.hpp"

using namespace loschmidt;
using namespace testing_support;

namespace {

constexpr double kPi = std::numbers::pi;

double determinant2(const ComplexMatrix& m) {
  return std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
}

Vec3 field_along(const BlochAngles& a, double r) {
  const Vec3 n = a.unit_vector();
  return {r * n[0], r * n[1], r * n[2]};
}

}  // namespace

TEST(Projectors, Examples) {
  const auto [pp, pm] = projectors({0.0, 0.0});
  EXPECT_LT(std::abs(pp(0, 0) - 1.0) + std::abs(pp(1, 1)) + std::abs(pp(0, 1)), 1e-15);
  EXPECT_LT(std::abs(pm(1, 1) - 1.0) + std::abs(pm(0, 0)) + std::abs(pm(1, 0)), 1e-15);
  const auto [xp, xm] = projectors({kPi / 2, 0.0});
  EXPECT_LT(max_abs(xp - 0.5 * (identity(2) + pauli_x())), 1e-15);
  EXPECT_LT(max_abs(xm - 0.5 * (identity(2) - pauli_x())), 1e-15);
}

TEST(Projectors, AlgebraicIdentities) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> th(0.0, kPi), ph(0.0, 2 * kPi);
  for (int trial = 0; trial < 50; ++trial) {
    const BlochAngles a{th(rng), ph(rng)};
    const auto [pp, pm] = projectors(a);
    EXPECT_LT(max_abs(pp * pp - pp), 1e-12);
    EXPECT_LT(max_abs(pm * pm - pm), 1e-12);
    EXPECT_LT(max_abs(pp * pm), 1e-12);
    EXPECT_LT(max_abs(pp + pm - identity(2)), 1e-12);
    EXPECT_LT(determinant2(pp), 1e-12);
    EXPECT_LT(determinant2(pm), 1e-12);
    const ComplexVector plus = plus_state(a);
    EXPECT_LT(max_abs(pp - plus * plus.adjoint()), 1e-12);
  }
}

TEST(SpinorDecomposition, Examples) {
  const SpinorDecomposition z = spinor_decomposition({0.0, 0.0}, 1.0, 2.0);
  ComplexVector e0 = ComplexVector::Zero(4), e3 = ComplexVector::Zero(4);
  e0(0) = 1.0;
  e3(3) = 1.0;
  EXPECT_LT((z.w_plus - e0).norm(), 1e-15);
  EXPECT_LT((z.w_minus - e3).norm(), 1e-15);
  const SpinorDecomposition hot = spinor_decomposition({1.0, 2.0}, 0.0, 2.0);
  EXPECT_NEAR(hot.coeff_plus, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(hot.coeff_minus, 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(SpinorDecomposition, ExplicitVectorsAndReduction) {
  const BlochAngles a{kPi / 3, kPi / 4};
  const double beta = 1.0, delta = 2.0;
  const SpinorDecomposition s = spinor_decomposition(a, beta, delta);
  const Complex e = std::exp(kI * a.phi);
  ComplexVector wp(4), wm(4);
  wp << 1 + std::cos(a.theta), std::sin(a.theta) * e, std::sin(a.theta) * e, (1 - std::cos(a.theta)) * e * e;
  wm << 1 - std::cos(a.theta), -std::sin(a.theta) * e, -std::sin(a.theta) * e, (1 + std::cos(a.theta)) * e * e;
  EXPECT_LT((s.w_plus - 0.5 * wp).norm(), 1e-15);
  EXPECT_LT((s.w_minus - 0.5 * wm).norm(), 1e-15);
  EXPECT_NEAR(s.coeff_plus * s.coeff_plus + s.coeff_minus * s.coeff_minus, 1.0, 1e-12);
  EXPECT_LT(std::abs(s.w_plus.dot(s.w_minus)), 1e-12);
  // Thermal state of R . sigma with Delta = 2R, built from the Bloch form.
  const ComplexMatrix rho = thermal_bloch(field_along(a, delta / 2), beta);
  EXPECT_LT(max_abs(reduce(s.state()).mat() - rho), 1e-12);
}

TEST(SpinorDecomposition, ComponentsAreProductsButSumIsEntangled) {
  const SpinorDecomposition s = spinor_decomposition({0.8, 2.1}, 0.7, 1.5);
  auto singular_values = [](const ComplexVector& v) {
    const ComplexMatrix m = Eigen::Map<const Eigen::Matrix<Complex, 2, 2, Eigen::RowMajor>>(v.data());
    return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
  };
  EXPECT_LT(singular_values(s.w_plus)(1), 1e-12);
  EXPECT_LT(singular_values(s.w_minus)(1), 1e-12);
  EXPECT_GT(singular_values(s.state().vec())(1), 1e-6);
}

TEST(SpinorDecomposition, RejectsNegativeTemperature) {
  EXPECT_THROW(spinor_decomposition({0.1, 0.2}, -1.0, 1.0), Error);
}

TEST(Fermi, Identities) {
  for (double beta : {0.0, 0.1, 1.0, 5.0, 40.0}) {
    for (double delta : {0.3, 1.0, 2.0}) {
      const double a = fermi(beta, delta), b = fermi(beta, -delta);
      EXPECT_NEAR(a + b, 1.0, 1e-14);
      EXPECT_NEAR(a - b, -std::tanh(beta * delta / 2), 1e-14);
    }
  }
  EXPECT_DOUBLE_EQ(gap_from_field_strength(0.75), 1.5);
}

TEST(GammaRotate, MatchesEvolveThenPurify) {
  const Vec3 r{0.3, -0.7, 0.4};
  const DensityMatrix rho(thermal_bloch(r, 0.9));
  const Amplitude w0 = amplitude_from_density(rho);
  const PurifiedState psi = purify(w0);
  EXPECT_LT((gamma_rotate(psi, r, 0.0).vec() - psi.vec()).norm(), 1e-15);
  for (double t : {0.4, 1.3, 3.0}) {
    const PurifiedState rotated = gamma_rotate(psi, r, t);
    EXPECT_LT((rotated.vec() - purify(evolve_amplitude(w0, bloch_operator(r), t)).vec()).norm(), 1e-12);
    EXPECT_LT(max_abs(reduce(rotated).mat() - rho.mat()), 1e-12);
  }
}

TEST(GammaRotate, InfiniteTemperatureQuarterTurnIsOrthogonal) {
  const Vec3 r{0.0, 0.6, 0.8};
  const PurifiedState psi = spinor_decomposition({0.5, 1.0}, 0.0, 2.0).state();
  EXPECT_LT(std::abs(overlap(psi, gamma_rotate(psi, r, kPi / 2))), 1e-10);
}

TEST(GammaRotate, RequiresFourComponents) {
  const PurifiedState psi = purify(amplitude_from_density(DensityMatrix(identity(3) / 3.0)));
  try {
    gamma_rotate(psi, {0, 0, 1}, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimMismatch);
  }
}

TEST(QuasistaticOverlap, ClosedFormExamples) {
  for (double t : {0.0, 0.7, 2.0}) {
    EXPECT_LT(std::abs(quasistatic_overlap_closed_form(0.0, 2.0, 1.0, t) - std::cos(t)), 1e-15);
  }
  EXPECT_LT(std::abs(quasistatic_overlap_closed_form(1.3, 2.0, 1.0, 0.0) - 1.0), 1e-15);
}

TEST(QuasistaticOverlap, MatchesSpinorPipeline) {
  const BlochAngles a{1.2, 0.4};
  const double r = 1.0, beta = 1.0;
  const double delta = gap_from_field_strength(r);
  const PurifiedState psi = spinor_decomposition(a, beta, delta).state();
  const Complex pipeline = overlap(psi, gamma_rotate(psi, field_along(a, r), 1.0));
  EXPECT_LT(std::abs(pipeline - quasistatic_overlap_closed_form(beta, delta, r, 1.0)), 1e-12);
}

TEST(MinkowskiNorm, DeterminantOfThermalState) {
  const Vec3 r{0.1, 0.2, 0.3};
  const double delta = gap_from_field_strength(norm(r));
  double previous = 1.0;
  for (double beta : {0.0, 1.0 / delta * 2.0, 5.0, 20.0, 60.0}) {
    const DensityMatrix rho(thermal_bloch(r, beta));
    const double det = minkowski_norm_check(rho, beta, delta);
    const double sech = 1.0 / std::cosh(beta * delta / 2);
    EXPECT_NEAR(det, 0.25 * sech * sech, 1e-12);
    EXPECT_GT(det, 0.0);
    EXPECT_LT(det, previous + 1e-15);
    previous = det;
  }
  EXPECT_NEAR(minkowski_norm_check(DensityMatrix(0.5 * identity(2)), 0.0, delta), 0.25, 1e-15);
}
