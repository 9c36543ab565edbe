#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "loschmidt/models.hpp"
#include "support.hpp"

using namespace loschmidt;
using namespace testing_support;

namespace {

constexpr double kPi = std::numbers::pi;

PlanarTwoBand unit_circle() {
  PlanarTwoBand m;
  m.components = [](double k) { return std::pair{std::sin(k), std::cos(k)}; };
  m.derivatives = [](double k) { return std::pair{std::cos(k), -std::sin(k)}; };
  m.gap = [](double) { return 1.0; };
  return m;
}

CreutzSpec creutz(double m, double theta = kPi / 3, int k_points = 1024) {
  return {m, theta, k_points};
}

}  // namespace

TEST(TwoLevelQuasistatic, Examples) {
  EXPECT_LT(std::abs(two_level_quasistatic_g({{0, 0, 1}, 0.0}, kPi / 2)), 1e-15);
  EXPECT_EQ(two_level_quasistatic_g({{0.3, 0.4, 0}, 2.0}, 0.0), Complex(1.0));
  const Complex g = two_level_quasistatic_g({{0, 0, 1}, 1.0}, kPi / 2);
  EXPECT_LT(std::abs(g - Complex(0.0, std::tanh(1.0))), 1e-15);
  const DensityMatrix rho(thermal_bloch({0, 0, 1}, 1.0));
  EXPECT_LT(std::abs(g - loschmidt_amplitude(rho, pauli_z(), kPi / 2)), 1e-12);
}

TEST(TwoLevelQuench, Examples) {
  EXPECT_LT(std::abs(two_level_quench_g({0.5, 0, 0}, {0, 0, 2.0}, kPi / 4)), 1e-15);
  for (double t : {0.2, 1.4}) {
    EXPECT_LT(std::abs(two_level_quench_g({0, 0, 0}, {0.6, 0, 0.8}, t) - std::cos(t)), 1e-15);
  }
  EXPECT_LT(std::abs(two_level_thermal_quench_g(1.0, 0.0, {0.2, 0.3, 0.5}, kPi / 2 / norm({0.2, 0.3, 0.5}))),
            1e-15);
  EXPECT_THROW(two_level_quench_g({0, 0, 0}, {0, 0, 0}, 1.0), Error);
}

TEST(TwoLevelQuench, ThermalHasNoZeroAtFiniteTemperature) {
  const Vec3 rf{0.3, -0.5, 0.7};
  for (double beta : {0.05, 0.4, 3.0}) {
    double smallest = 1.0;
    for (int i = 0; i <= 4000; ++i) {
      smallest = std::min(smallest, std::abs(two_level_thermal_quench_g(1.0, beta, rf, 0.005 * i)));
    }
    EXPECT_GT(smallest, 1e-3);
  }
}

TEST(ClosedForms, AgreeWithTracePipeline) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec3 r{u(rng), u(rng), u(rng)};
    const Vec3 r0{0.5 * u(rng), 0.5 * u(rng), 0.5 * u(rng)};
    const double beta = 2.0 * std::abs(u(rng));
    const double e = 0.1 + std::abs(u(rng));
    const double t = 10.0 * std::abs(u(rng));
    const TwoLevelSpec spec{r, beta};
    EXPECT_LT(std::abs(two_level_quasistatic_g(spec, t) -
                       loschmidt_amplitude(spec.thermal_state(), spec.hamiltonian(), t)),
              1e-8);
    EXPECT_LT(std::abs(two_level_quench_g(r0, r, t) -
                       loschmidt_amplitude(two_level_quench_initial_state(r0), bloch_operator(r), t)),
              1e-8);
    EXPECT_LT(std::abs(two_level_thermal_quench_g(e, beta, r, t) -
                       loschmidt_amplitude(two_level_thermal_initial_state(e, beta),
                                           bloch_operator(r), t)),
              1e-8);
    const ThreeLevelSpec s3{0.2 + std::abs(u(rng)), kPi * std::abs(u(rng)) * 0.999, kPi * u(rng), beta};
    const DensityMatrix rho3 = DensityMatrix::thermal(three_level_hamiltonian(s3.r), beta);
    EXPECT_LT(std::abs(three_level_quasistatic_g(s3, t) -
                       loschmidt_amplitude(rho3, three_level_hamiltonian(s3.r), t)),
              1e-8);
    EXPECT_LT(std::abs(three_level_quench_g(s3, t) -
                       loschmidt_amplitude(rho3, three_level_quench_hamiltonian(s3.r, s3.theta, s3.phi), t)),
              1e-8);
  }
}

TEST(WindingNumber, Examples) {
  EXPECT_EQ(creutz_winding_number(creutz(0.5)), 1);
  EXPECT_EQ(creutz_winding_number(creutz(1.5)), 0);
  EXPECT_EQ(winding_number(unit_circle().components, 64), 1);
}

TEST(WindingNumber, InvariantUnderRefinement) {
  for (double m : {0.2, 0.8, 1.2, 1.9}) {
    for (double theta : {kPi / 3, kPi / 8}) {
      const int coarse = creutz_winding_number(creutz(m, theta, 256));
      EXPECT_EQ(coarse, creutz_winding_number(creutz(m, theta, 4096)));
      EXPECT_EQ(coarse, m < 1.0 ? 1 : 0);
    }
  }
}

TEST(WindingNumber, GaplessAndCoarseGrids) {
  try {
    creutz_winding_number(creutz(1.0, kPi / 3, 1024));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GaplessPath);
  }
  PlanarTwoBand fast = unit_circle();
  fast.components = [](double k) { return std::pair{std::sin(7 * k), std::cos(7 * k)}; };
  try {
    winding_number(fast.components, 12);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GridTooCoarse);
  }
  EXPECT_EQ(winding_number(fast.components, 256), 7);
}

TEST(CreutzSpec, Validation) {
  EXPECT_THROW(creutz(0.5, 0.0).validate(), Error);
  EXPECT_THROW(creutz(0.5, 2.0).validate(), Error);
  EXPECT_THROW(creutz(-0.1).validate(), Error);
  EXPECT_NO_THROW(creutz(0.5, -kPi / 2).validate());
}

TEST(CreutzGap, ClosesOnlyAtUnitM) {
  for (double m : {0.9, 1.0, 1.1}) {
    const CreutzSpec spec = creutz(m);
    double smallest = 1e9;
    for (int j = 0; j < 100000; ++j) smallest = std::min(smallest, spec.gap(-kPi + 2 * kPi * j / 100000));
    if (m == 1.0) {
      EXPECT_LT(smallest, 1e-12);
    } else {
      EXPECT_GT(smallest, 0.05);
    }
  }
}

TEST(TwoBandClosedForm, LowTemperatureLimit) {
  EXPECT_NEAR(two_band_uhlmann_closed_form(creutz(0.5), 0.02), -1.0, 1e-6);
  EXPECT_NEAR(two_band_uhlmann_closed_form(creutz(1.5), 0.02), 1.0, 1e-6);
}

TEST(TwoBandClosedForm, MatchesHolonomy) {
  for (double t : {0.15, 0.3, 0.8, 2.0}) {
    const CreutzSpec spec = creutz(0.5);
    const Complex g = uhlmann_loschmidt(creutz_path(spec, t));
    EXPECT_LT(std::abs(g - two_band_uhlmann_closed_form(spec, t)), 1e-6);
    EXPECT_LT(std::abs(g.imag()), 1e-8);
  }
}

TEST(TwoBandClosedForm, NoSignChangeForTrivialPhase) {
  for (int i = 0; i <= 2000; ++i) {
    const double t = std::exp(std::log(0.01) + i * (std::log(100.0) - std::log(0.01)) / 2000);
    EXPECT_GT(two_band_uhlmann_closed_form(creutz(1.5), t), 0.0);
  }
}

TEST(TwoBandClosedForm, RejectsNonPositiveTemperature) {
  EXPECT_THROW(two_band_uhlmann_closed_form(creutz(0.5), 0.0), Error);
}

TEST(CreutzCriticalTemperature, Examples) {
  const auto t1 = creutz_critical_temperature(creutz(0.5));
  ASSERT_TRUE(t1.has_value());
  EXPECT_LT(std::abs(two_band_uhlmann_closed_form(creutz(0.5), *t1)), 1e-6);
  const PlanarTwoBand planar = creutz(0.5).planar();
  EXPECT_NEAR(std::abs(two_band_loop_integral(planar, 1024, *t1)), kPi / 2, 1e-8);
  EXPECT_FALSE(creutz_critical_temperature(creutz(1.5)).has_value());
  const auto t2 = creutz_critical_temperature(creutz(0.5, kPi / 8));
  ASSERT_TRUE(t2.has_value());
  EXPECT_GT(std::abs(*t1 - *t2), 0.05);
}

TEST(ThreeLevel, DynamicsExamples) {
  const double r = 1.4;
  const double t_star = kPi / 2 / r;
  EXPECT_LT(std::abs(three_level_quasistatic_g({r, 0, 0, std::log(2.0) / (2 * r)}, t_star)), 1e-15);
  for (double theta : {0.0, kPi / 5, 2 * kPi / 5}) {
    const double beta = std::log(1.0 + 1.0 / std::cos(theta)) / (2 * r);
    EXPECT_LT(std::abs(three_level_quench_g({r, theta, 0.3, beta}, t_star)), 1e-15);
    EXPECT_EQ(three_level_quench_g({r, theta, 0.3, beta}, 0.0), Complex(1.0));
  }
  EXPECT_EQ(three_level_quasistatic_g({r, 0, 0, 0.7}, 0.0), Complex(1.0));
  EXPECT_THROW(three_level_quench_g({r, 3.5, 0.0, 1.0}, 1.0), Error);
}

TEST(ThreeLevel, LargeBetaStaysFinite) {
  const Complex g = three_level_quench_g({1.0, 0.5, 0.0, 900.0}, 0.3);
  EXPECT_TRUE(std::isfinite(g.real()) && std::isfinite(g.imag()));
  // The excited levels carry no weight: G = cos(Rt) + i cos(theta) sin(Rt).
  EXPECT_LT(std::abs(g - Complex(std::cos(0.3), std::cos(0.5) * std::sin(0.3))), 1e-12);
}

TEST(ThreeLevelUhlmann, ClosedFormLimitsAndCriticalTemperature) {
  EXPECT_NEAR(three_level_uhlmann_closed_form(1.0, 1e-8), 1.0, 1e-10);
  EXPECT_NEAR(three_level_uhlmann_closed_form(1.0, 40.0), -1.0, 1e-10);
  EXPECT_NEAR(three_level_uhlmann_tstar(1.0), 0.7338, 5e-5);
  EXPECT_NEAR(three_level_uhlmann_tstar(2.5), 2.5 * 0.7338, 2.5 * 5e-5);
  EXPECT_LT(std::abs(three_level_uhlmann_closed_form(1.0, 1.0 / three_level_uhlmann_tstar(1.0))), 1e-10);
}

TEST(ThreeLevelUhlmann, LowTemperaturePhaseFromHolonomy) {
  const Complex g = uhlmann_loschmidt(three_level_circle_path(1.0, 5.0));
  EXPECT_LT(std::abs(g - three_level_uhlmann_closed_form(1.0, 5.0)), 1e-6);
  EXPECT_LT(g.real(), 0.0);
}

TEST(CriticalTemperatures, Examples) {
  EXPECT_NEAR(critical_temperature_analytic(CriticalKind::ThreeLevelQuasistatic, 1.0), 2.0 / std::log(2.0), 1e-15);
  EXPECT_NEAR(critical_temperature_analytic(CriticalKind::ThreeLevelQuasistatic, 1.0), 2.8854, 1e-4);
  EXPECT_NEAR(critical_temperature_analytic(CriticalKind::ThreeLevelQuench, 1.0, 0.0), 2.0 / std::log(2.0), 1e-15);
  EXPECT_NEAR(critical_temperature_analytic(CriticalKind::ThreeLevelQuench, 1.0, kPi / 5),
              2.0 / std::log(1.0 + 1.0 / std::cos(kPi / 5)), 1e-15);
  try {
    critical_temperature_analytic(CriticalKind::ThreeLevelQuench, 1.0, kPi / 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainError);
  }
}
