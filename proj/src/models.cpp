#include "loschmidt/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "loschmidt/roots.hpp"

namespace loschmidt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGaplessTol = 1e-9;

double sech(double x) { return 1.0 / std::cosh(x); }

double grid_k(int j, int k_points) { return -kPi + 2.0 * kPi * j / k_points; }

void require_positive_k_points(int k_points) {
  if (k_points < 4) {
    throw Error(ErrorKind::DomainError, "k grid needs at least 4 points");
  }
}

}  // namespace

// ---------------------------------------------------------------- two-level

void TwoLevelSpec::validate() const {
  if (!(field_strength() > 0.0)) {
    throw Error(ErrorKind::DomainError, "two-level field R must be non-zero");
  }
  if (!(beta >= 0.0)) {
    throw Error(ErrorKind::DomainError, "inverse temperature must be >= 0");
  }
}

DensityMatrix TwoLevelSpec::thermal_state() const {
  validate();
  return DensityMatrix::thermal(hamiltonian(), beta);
}

Complex two_level_quasistatic_g(const TwoLevelSpec& spec, double t) {
  spec.validate();
  const double wt = spec.omega() * t;
  return {std::cos(wt), std::sin(wt) * std::tanh(spec.beta * spec.field_strength())};
}

Complex two_level_quench_g(const Vec3& r0, const Vec3& r_final, double t) {
  const double r = norm(r_final);
  if (!(r > 0.0)) {
    throw Error(ErrorKind::DomainError, "quench field R_f must be non-zero");
  }
  const double projection = (r0[0] * r_final[0] + r0[1] * r_final[1] + r0[2] * r_final[2]) / r;
  return {std::cos(r * t), -std::sin(r * t) * projection};
}

Complex two_level_thermal_quench_g(double energy, double beta, const Vec3& r_final, double t) {
  const double r = norm(r_final);
  if (!(r > 0.0)) {
    throw Error(ErrorKind::DomainError, "quench field R_f must be non-zero");
  }
  // 2/Z [cosh(bE) cos(wt) + i (R_z/R) sinh(bE) sin(wt)] with Z = 2 cosh(bE).
  return {std::cos(r * t), (r_final[2] / r) * std::tanh(beta * energy) * std::sin(r * t)};
}

DensityMatrix two_level_quench_initial_state(const Vec3& r0) {
  if (norm(r0) > 1.0 + 1e-12) {
    throw Error(ErrorKind::DomainError, "|R0| must not exceed 1");
  }
  return DensityMatrix(0.5 * (identity(2) + bloch_operator(r0)));
}

DensityMatrix two_level_thermal_initial_state(double energy, double beta) {
  return DensityMatrix::thermal(energy * pauli_z(), beta);
}

// ------------------------------------------------------ planar two-band family

void CreutzSpec::validate() const {
  if (!(m >= 0.0)) {
    throw Error(ErrorKind::DomainError, "Creutz parameter m must be >= 0");
  }
  if (!(std::abs(theta_flux) <= kPi / 2) || theta_flux == 0.0) {
    throw Error(ErrorKind::DomainError, "Creutz flux Theta must lie in [-pi/2, pi/2] and be non-zero");
  }
  require_positive_k_points(k_points);
}

double CreutzSpec::gap(double k) const {
  const double x = m + std::cos(k);
  const double z = std::sin(theta_flux) * std::sin(k);
  return std::sqrt(x * x + z * z);
}

PlanarTwoBand CreutzSpec::planar() const {
  validate();
  const double m_ = m;
  const double s = std::sin(theta_flux);
  PlanarTwoBand out;
  out.components = [m_, s](double k) {
    return std::pair{s * std::sin(k), m_ + std::cos(k)};
  };
  out.derivatives = [s](double k) {
    return std::pair{s * std::cos(k), -std::sin(k)};
  };
  out.gap = [spec = *this](double k) { return spec.gap(k); };
  return out;
}

int winding_number(const std::function<std::pair<double, double>(double)>& map, int k_points) {
  require_positive_k_points(k_points);
  double total = 0.0;
  auto angle = [&](int j) {
    const auto [ni, nj] = map(grid_k(j, k_points));
    if (std::hypot(ni, nj) < kGaplessTol) {
      std::ostringstream msg;
      msg << "planar map vanishes near k = " << grid_k(j, k_points);
      throw Error(ErrorKind::GaplessPath, msg.str());
    }
    return std::atan2(ni, nj);
  };
  const double first = angle(0);
  double prev = first;
  for (int j = 1; j <= k_points; ++j) {
    const double cur = j == k_points ? first : angle(j);
    double step = std::remainder(cur - prev, 2.0 * kPi);
    if (std::abs(step) > kPi / 2) {
      std::ostringstream msg;
      msg << "map turns by " << step << " rad in one step near k = " << grid_k(j, k_points)
          << "; increase k_points";
      throw Error(ErrorKind::GridTooCoarse, msg.str());
    }
    total += step;
    prev = cur;
  }
  const double w = total / (2.0 * kPi);
  const double rounded = std::round(w);
  if (std::abs(w - rounded) > 1e-6) {
    std::ostringstream msg;
    msg << "winding sum " << w << " is not an integer";
    throw Error(ErrorKind::GridTooCoarse, msg.str());
  }
  return static_cast<int>(rounded);
}

double two_band_loop_integral(const PlanarTwoBand& model, int k_points, double temperature) {
  require_positive_k_points(k_points);
  if (!(temperature > 0.0)) {
    throw Error(ErrorKind::DomainError, "temperature must be positive");
  }
  const double dk = 2.0 * kPi / k_points;
  double sum = 0.0;
  for (int j = 0; j < k_points; ++j) {
    const double k = grid_k(j, k_points);
    const auto [ni, nj] = model.components(k);
    const auto [dni, dnj] = model.derivatives(k);
    const double r2 = ni * ni + nj * nj;
    const double gap = model.gap(k);
    if (r2 < kGaplessTol * kGaplessTol || gap < kGaplessTol) {
      std::ostringstream msg;
      msg << "gap closes near k = " << k;
      throw Error(ErrorKind::GaplessPath, msg.str());
    }
    const double dtheta = (nj * dni - ni * dnj) / r2;
    sum += dtheta * sech(gap / (2.0 * temperature));
  }
  return 0.5 * sum * dk;
}

double two_band_uhlmann_closed_form(const PlanarTwoBand& model, int k_points,
                                    double temperature) {
  const int w = winding_number(model.components, k_points);
  return std::cos(kPi * w) * std::cos(two_band_loop_integral(model, k_points, temperature));
}

double two_band_uhlmann_closed_form(const CreutzSpec& spec, double temperature) {
  return two_band_uhlmann_closed_form(spec.planar(), spec.k_points, temperature);
}

int creutz_winding_number(const CreutzSpec& spec) {
  return winding_number(spec.planar().components, spec.k_points);
}

std::optional<double> creutz_critical_temperature(const CreutzSpec& spec) {
  const PlanarTwoBand model = spec.planar();
  auto excess = [&](double log_t) {
    return std::abs(two_band_loop_integral(model, spec.k_points, std::exp(log_t))) - kPi / 2;
  };
  double lo = std::log(1e-3);
  double hi = std::log(1e3);
  for (int expansion = 0; expansion <= 2; ++expansion) {
    if ((excess(lo) < 0.0) != (excess(hi) < 0.0)) {
      return std::exp(bisect(excess, lo, hi, 1e-15));
    }
    lo -= std::log(10.0);
    hi += std::log(10.0);
  }
  return std::nullopt;
}

ComplexMatrix two_band_density(const PlanarTwoBand& model, double k, double temperature) {
  if (!(temperature > 0.0)) {
    throw Error(ErrorKind::DomainError, "temperature must be positive");
  }
  const auto [ni, nj] = model.components(k);
  const double len = std::hypot(ni, nj);
  if (len < kGaplessTol) {
    throw Error(ErrorKind::GaplessPath, "planar map vanishes on the path");
  }
  const double polarization = std::tanh(model.gap(k) / (2.0 * temperature));
  // n^j is the x component and n^i the z component of the unit vector.
  return 0.5 * (identity(2) - polarization * ((nj / len) * pauli_x() + (ni / len) * pauli_z()));
}

DensityPath two_band_path(const PlanarTwoBand& model, double temperature, int n_steps) {
  return DensityPath(
      [model, temperature](double s) {
        return two_band_density(model, -kPi + 2.0 * kPi * s, temperature);
      },
      true, n_steps);
}

DensityPath creutz_path(const CreutzSpec& spec, double temperature, int n_steps) {
  return two_band_path(spec.planar(), temperature, n_steps);
}

// -------------------------------------------------------------- three-level

void ThreeLevelSpec::validate() const {
  if (!(r > 0.0)) {
    throw Error(ErrorKind::DomainError, "three-level R must be positive");
  }
  if (!(theta >= 0.0 && theta < kPi)) {
    throw Error(ErrorKind::DomainError, "three-level theta must lie in [0, pi)");
  }
  if (!(beta >= 0.0)) {
    throw Error(ErrorKind::DomainError, "inverse temperature must be >= 0");
  }
}

ComplexMatrix three_level_hamiltonian(double r) {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 0) = r;
  h(1, 1) = -r;
  h(2, 2) = r;
  return h;
}

ComplexMatrix three_level_quench_hamiltonian(double r, double theta, double phi) {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 0) = r * std::cos(theta);
  h(0, 1) = r * std::sin(theta) * std::exp(-kI * phi);
  h(1, 0) = r * std::sin(theta) * std::exp(kI * phi);
  h(1, 1) = -r * std::cos(theta);
  h(2, 2) = r;
  return h;
}

// Both closed forms are divided through by e^{beta R} so large beta stays finite.
Complex three_level_quasistatic_g(const ThreeLevelSpec& spec, double t) {
  spec.validate();
  const double a = std::exp(-2.0 * spec.beta * spec.r);
  const double z = 2.0 * a + 1.0;
  const double wt = spec.omega() * t;
  return Complex((2.0 * a + 1.0) * std::cos(wt), -(2.0 * a - 1.0) * std::sin(wt)) / z;
}

Complex three_level_quench_g(const ThreeLevelSpec& spec, double t) {
  spec.validate();
  const double a = std::exp(-2.0 * spec.beta * spec.r);
  const double z = 2.0 * a + 1.0;
  const double wt = spec.omega() * t;
  const double c = std::cos(spec.theta);
  return Complex((2.0 * a + 1.0) * std::cos(wt), ((-1.0 - c) * a + c) * std::sin(wt)) / z;
}

double three_level_uhlmann_closed_form(double r, double beta) {
  if (!(r > 0.0) || !(beta > 0.0)) {
    throw Error(ErrorKind::DomainError, "three-level Uhlmann form needs R > 0 and beta > 0");
  }
  const double x = beta * r;
  const double ch = std::cosh(x);
  const double a = std::exp(-x);
  return (-2.0 * ch * std::cos(kPi / ch) + a) / (2.0 * ch + a);
}

double three_level_uhlmann_tstar(double r) {
  auto g = [r](double t) { return three_level_uhlmann_closed_form(r, 1.0 / t); };
  return bisect(g, 0.1 * r, 10.0 * r, 1e-15);
}

DensityPath three_level_circle_path(double r, double beta, int n_steps,
                                    std::function<double(double)> phi_of_s) {
  if (!phi_of_s) {
    phi_of_s = [](double s) { return 2.0 * kPi * s; };
  }
  return DensityPath(
      [r, beta, phi_of_s](double s) {
        return DensityMatrix::thermal(three_level_quench_hamiltonian(r, kPi / 2, phi_of_s(s)),
                                      beta)
            .mat();
      },
      true, n_steps);
}

double critical_temperature_analytic(CriticalKind kind, double r, double theta) {
  if (!(r > 0.0)) {
    throw Error(ErrorKind::DomainError, "R must be positive");
  }
  switch (kind) {
    case CriticalKind::ThreeLevelQuasistatic:
      return 2.0 * r / std::log(2.0);
    case CriticalKind::ThreeLevelQuench:
      if (!(theta >= 0.0 && theta < kPi / 2)) {
        std::ostringstream msg;
        msg << "quench critical temperature needs theta in [0, pi/2), got " << theta;
        throw Error(ErrorKind::DomainError, msg.str());
      }
      return 2.0 * r / std::log(1.0 + 1.0 / std::cos(theta));
  }
  throw Error(ErrorKind::DomainError, "unknown critical-temperature kind");
}

}  // namespace loschmidt
