#include "loschmidt/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace loschmidt {

void Process::validate(const DensityMatrix& rho0) const {
  if (hamiltonian.rows() != rho0.dim()) {
    throw Error(ErrorKind::DimMismatch, "Hamiltonian and density matrix dimensions differ");
  }
  if (kind == ProcessKind::Quasistatic) {
    const double comm = max_abs(rho0.mat() * hamiltonian - hamiltonian * rho0.mat());
    if (comm > kCommutatorTol) {
      std::ostringstream msg;
      msg << "quasistatic process needs [rho, H] = 0, got " << comm;
      throw Error(ErrorKind::DomainError, msg.str());
    }
  }
}

Amplitude evolve_amplitude(const Amplitude& w0, const ComplexMatrix& hamiltonian, double t) {
  if (hamiltonian.rows() != w0.mat.rows()) {
    throw Error(ErrorKind::DimMismatch, "Hamiltonian and amplitude dimensions differ");
  }
  const ComplexMatrix u = expm_i(hamiltonian, t, Sign::Negative);
  // The polar gauge of e^{-iHt} W0 is e^{-iHt} U0 only up to the basis of sqrt(rho(t)),
  // so recover it from the evolved matrix itself.
  return Amplitude::from_matrix(u * w0.mat);
}

Complex loschmidt_amplitude(const DensityMatrix& rho0, const ComplexMatrix& hamiltonian,
                            double t) {
  if (hamiltonian.rows() != rho0.dim()) {
    throw Error(ErrorKind::DimMismatch, "Hamiltonian and density matrix dimensions differ");
  }
  return (rho0.mat() * expm_i(hamiltonian, t, Sign::Negative)).trace();
}

double principal_arg(Complex g) {
  if (g.imag() == 0.0 && g.real() < 0.0) {
    return std::numbers::pi;
  }
  return std::arg(g);
}

std::optional<double> dynamical_phase(Complex g, double zero_tol) {
  if (std::abs(g) <= zero_tol) {
    return std::nullopt;
  }
  return principal_arg(g);
}

FreeEnergy free_energy_density(Complex g, int system_size, double cap) {
  const double magnitude = std::abs(g);
  if (magnitude <= kPhaseZeroTol) {
    return {cap, true};
  }
  const double f = -std::log(magnitude * magnitude) / system_size;
  if (f >= cap) {
    return {cap, true};
  }
  return {f, false};
}

LoschmidtSample sample_loschmidt(Complex g, double t) {
  const FreeEnergy fe = free_energy_density(g);
  return {t, g, std::norm(g), dynamical_phase(g), fe.value, fe.divergent};
}

std::vector<std::optional<double>> unwrap_phases(
    const std::vector<std::optional<double>>& phases) {
  std::vector<std::optional<double>> out(phases.size());
  std::optional<double> last_principal;
  double offset = 0.0;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (!phases[i]) {
      continue;
    }
    const double p = *phases[i];
    if (last_principal) {
      const double step = p - *last_principal;
      offset -= std::round(step / (2.0 * std::numbers::pi)) * 2.0 * std::numbers::pi;
    }
    last_principal = p;
    out[i] = p + offset;
  }
  return out;
}

std::vector<LoschmidtSample> loschmidt_series(const DensityMatrix& rho0,
                                              const ComplexMatrix& hamiltonian,
                                              const std::vector<double>& times, PhaseMode mode) {
  std::vector<LoschmidtSample> out;
  out.reserve(times.size());
  for (double t : times) {
    out.push_back(sample_loschmidt(loschmidt_amplitude(rho0, hamiltonian, t), t));
  }
  if (mode == PhaseMode::Continuous) {
    std::vector<std::optional<double>> phases;
    phases.reserve(out.size());
    for (const auto& s : out) phases.push_back(s.theta_d);
    const auto unwrapped = unwrap_phases(phases);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].theta_d = unwrapped[i];
  }
  return out;
}

double golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                               double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (std::abs(b - a) > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

ZeroSearch find_zero_times(const std::function<Complex(double)>& g, double t_min, double t_max,
                           int n_grid) {
  if (!(t_min < t_max)) {
    throw Error(ErrorKind::DomainError, "zero search needs t_min < t_max");
  }
  if (n_grid < 16) {
    throw Error(ErrorKind::DomainError, "zero search needs at least 16 grid points");
  }
  const double dt = (t_max - t_min) / (n_grid - 1);
  std::vector<double> mag(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    mag[i] = std::abs(g(t_min + i * dt));
  }
  auto magnitude = [&](double t) { return std::abs(g(t)); };

  ZeroSearch out;
  for (int i = 0; i < n_grid; ++i) {
    const bool left_ok = i == 0 || mag[i] <= mag[i - 1];
    const bool right_ok = i == n_grid - 1 || mag[i] < mag[i + 1];
    if (!left_ok || !right_ok) continue;
    // Refine every grid minimum: a zero between nodes can sit well above the threshold on the grid.
    const double a = t_min + std::max(i - 1, 0) * dt;
    const double b = t_min + std::min(i + 1, n_grid - 1) * dt;
    const double t_star = golden_section_minimize(magnitude, a, b);
    const TimeMinimum m{t_star, magnitude(t_star)};
    if (m.magnitude < kZeroAcceptTol) {
      out.zeros.push_back(m);
    } else if (m.magnitude < kZeroCandidateTol) {
      out.near_misses.push_back(m);
    }
  }
  return out;
}

ZeroSearch find_zero_times(const DensityMatrix& rho0, const ComplexMatrix& hamiltonian,
                           double t_min, double t_max, int n_grid) {
  return find_zero_times(
      [&](double t) { return loschmidt_amplitude(rho0, hamiltonian, t); }, t_min, t_max, n_grid);
}

}  // namespace loschmidt
