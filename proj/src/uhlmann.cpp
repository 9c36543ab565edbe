#include "loschmidt/uhlmann.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace loschmidt {

namespace {

constexpr double kClosureTol = 1e-10;
constexpr double kTracelessTol = 1e-10;

void require_full_rank(const DensityMatrix& rho, double s) {
  if (!rho.full_rank()) {
    std::ostringstream msg;
    msg << "density matrix at s = " << s << " has eigenvalue " << rho.min_eigenvalue()
        << " <= " << kFullRankTol;
    throw Error(ErrorKind::RankDeficient, msg.str());
  }
}

// Weights of the derivative at 0 of the cubic through the given offsets.
std::array<double, 4> derivative_weights(const std::array<double, 4>& x) {
  std::array<double, 4> w{};
  for (int j = 0; j < 4; ++j) {
    double denom = 1.0;
    for (int l = 0; l < 4; ++l) {
      if (l != j) denom *= x[j] - x[l];
    }
    double numer = 0.0;
    for (int m = 0; m < 4; ++m) {
      if (m == j) continue;
      double prod = 1.0;
      for (int l = 0; l < 4; ++l) {
        if (l != j && l != m) prod *= -x[l];
      }
      numer += prod;
    }
    w[j] = numer / denom;
  }
  return w;
}

struct PathSamples {
  std::vector<DensityMatrix> nodes;
  std::vector<DensityMatrix> midpoints;
};

PathSamples sample_path(const DensityPath& path) {
  const int n = path.n_steps();
  PathSamples out;
  out.nodes.reserve(n + 1);
  out.midpoints.reserve(n);
  for (int j = 0; j <= n; ++j) {
    const double s = static_cast<double>(j) / n;
    out.nodes.push_back(path.at(s));
    require_full_rank(out.nodes.back(), s);
  }
  for (int k = 0; k < n; ++k) {
    const double s = (k + 0.5) / n;
    out.midpoints.push_back(path.at(s));
    require_full_rank(out.midpoints.back(), s);
  }
  return out;
}

// Displacement of rho across step k, i.e. rho'(s_{k+1/2}) * ds, from a
// four-node cubic stencil kept inside [0, 1].
ComplexMatrix step_displacement(const PathSamples& samples, int k) {
  const int n = static_cast<int>(samples.midpoints.size());
  const int first = std::clamp(k - 1, 0, n - 3);
  std::array<double, 4> offsets{};
  for (int j = 0; j < 4; ++j) offsets[j] = (first + j) - (k + 0.5);
  const auto w = derivative_weights(offsets);
  ComplexMatrix d = w[0] * samples.nodes[first].mat();
  for (int j = 1; j < 4; ++j) d += w[j] * samples.nodes[first + j].mat();
  // Unit-trace samples give a traceless displacement up to roundoff.
  const Complex tr = d.trace() / static_cast<double>(d.rows());
  d.diagonal().array() -= tr;
  return 0.5 * (d + d.adjoint());
}

ComplexMatrix step_unitary(const ComplexMatrix& connection) {
  // exp(-A) with A = iK, K Hermitian.
  const ComplexMatrix k = -kI * connection;
  return expm_i(0.5 * (k + k.adjoint()), 1.0, Sign::Negative);
}

}  // namespace

DensityPath::DensityPath(Sampler sampler, bool closed, int n_steps)
    : sampler_(std::move(sampler)), closed_(closed), n_steps_(n_steps) {
  if (n_steps_ < kMinUhlmannSteps) {
    std::ostringstream msg;
    msg << "path needs at least " << kMinUhlmannSteps << " steps, got " << n_steps_;
    throw Error(ErrorKind::DomainError, msg.str());
  }
}

DensityMatrix DensityPath::at(double s) const { return DensityMatrix(sampler_(s)); }

ComplexMatrix sqrt_derivative(const DensityMatrix& rho, const ComplexMatrix& drho) {
  if (drho.rows() != rho.dim() || drho.cols() != rho.dim()) {
    throw Error(ErrorKind::DimMismatch, "displacement and density matrix dimensions differ");
  }
  const EigenSystem& es = rho.spectrum();
  const ComplexMatrix& v = es.vectors;
  ComplexMatrix x = v.adjoint() * drho * v;
  const Eigen::Index d = rho.dim();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double si = std::sqrt(std::max(es.values(i), 0.0));
      const double sj = std::sqrt(std::max(es.values(j), 0.0));
      x(i, j) /= si + sj;
    }
  }
  return v * x * v.adjoint();
}

ComplexMatrix uhlmann_connection_step(const DensityMatrix& rho, const ComplexMatrix& drho) {
  if (drho.rows() != rho.dim() || drho.cols() != rho.dim()) {
    throw Error(ErrorKind::DimMismatch, "displacement and density matrix dimensions differ");
  }
  if (!rho.full_rank()) {
    std::ostringstream msg;
    msg << "connection needs a full-rank density matrix, min eigenvalue " << rho.min_eigenvalue();
    throw Error(ErrorKind::RankDeficient, msg.str());
  }
  if (hermiticity_defect(drho) > kHermitianTol) {
    throw Error(ErrorKind::NotHermitian, "density displacement is not Hermitian");
  }
  if (std::abs(drho.trace()) > kTracelessTol) {
    throw Error(ErrorKind::DomainError, "density displacement is not traceless");
  }
  const EigenSystem& es = rho.spectrum();
  const ComplexMatrix& v = es.vectors;
  const ComplexMatrix x = v.adjoint() * drho * v;
  const Eigen::Index d = rho.dim();
  ComplexMatrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double si = std::sqrt(es.values(i));
      const double sj = std::sqrt(es.values(j));
      // <i|[d sqrt(rho), sqrt(rho)]|j> = (d sqrt(rho))_ij (s_j - s_i)
      const Complex dsqrt = x(i, j) / (si + sj);
      a(i, j) = -dsqrt * (sj - si) / (es.values(i) + es.values(j));
    }
  }
  const ComplexMatrix out = v * a * v.adjoint();
  return 0.5 * (out - out.adjoint());
}

std::vector<ComplexMatrix> connection_samples(const DensityPath& path) {
  const PathSamples samples = sample_path(path);
  std::vector<ComplexMatrix> out;
  out.reserve(samples.midpoints.size());
  for (int k = 0; k < static_cast<int>(samples.midpoints.size()); ++k) {
    out.push_back(uhlmann_connection_step(samples.midpoints[k], step_displacement(samples, k)));
  }
  return out;
}

Holonomy holonomy(const DensityPath& path) {
  if (!path.closed()) {
    throw Error(ErrorKind::NotClosed, "holonomy needs a closed path");
  }
  const DensityMatrix start = path.at(0.0);
  const DensityMatrix end = path.at(1.0);
  const double gap = max_abs(start.mat() - end.mat());
  if (gap > kClosureTol) {
    std::ostringstream msg;
    msg << "rho(0) and rho(1) differ by " << gap;
    throw Error(ErrorKind::NotClosed, msg.str());
  }
  const auto connections = connection_samples(path);
  ComplexMatrix product = identity(start.dim());
  for (const auto& a : connections) {
    product = step_unitary(a) * product;
  }
  return {product, path.n_steps()};
}

Complex uhlmann_loschmidt(const DensityPath& path) {
  const Holonomy h = holonomy(path);
  return (path.at(0.0).mat() * h.matrix).trace();
}

std::optional<double> snap_phase(Complex g, double zero_tol) {
  if (std::abs(g) <= zero_tol) {
    return std::nullopt;
  }
  double phase = std::arg(g);
  if (std::abs(phase) < kPhaseSnapTol) return 0.0;
  if (std::numbers::pi - std::abs(phase) < kPhaseSnapTol) return std::numbers::pi;
  return phase;
}

std::optional<double> uhlmann_phase(const DensityPath& path, double zero_tol) {
  return snap_phase(uhlmann_loschmidt(path), zero_tol);
}

std::vector<Amplitude> transport_trajectory(const Amplitude& w0, const DensityPath& path) {
  const PathSamples samples = sample_path(path);
  if (w0.mat.rows() != samples.nodes.front().dim()) {
    throw Error(ErrorKind::DimMismatch, "initial amplitude and path dimensions differ");
  }
  const double mismatch = max_abs(w0.mat * w0.mat.adjoint() - samples.nodes.front().mat());
  if (mismatch > 1e-8) {
    std::ostringstream msg;
    msg << "initial amplitude does not purify rho(0), deviation " << mismatch;
    throw Error(ErrorKind::DomainError, msg.str());
  }
  std::vector<Amplitude> out;
  out.reserve(samples.nodes.size());
  ComplexMatrix u = Amplitude::from_matrix(w0.mat).gauge;
  out.push_back(w0);
  for (int k = 0; k < static_cast<int>(samples.midpoints.size()); ++k) {
    const ComplexMatrix a =
        uhlmann_connection_step(samples.midpoints[k], step_displacement(samples, k));
    u = step_unitary(a) * u;
    out.push_back({sqrtm_psd(samples.nodes[k + 1].mat()) * u, u});
  }
  return out;
}

Amplitude transport_amplitude(const Amplitude& w0, const DensityPath& path) {
  return transport_trajectory(w0, path).back();
}

}  // namespace loschmidt
