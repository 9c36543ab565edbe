#include "loschmidt/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "loschmidt/roots.hpp"
#include "loschmidt/uhlmann.hpp"

namespace loschmidt {

namespace {

constexpr double kCandidateMagnitude = 0.25;
constexpr double kCriticalAcceptTol = 1e-6;
constexpr int kNewtonIterations = 60;

std::string format_double(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

// Evaluates every (i1, i2) cell, possibly on several threads. Results are
// stored by position, so the outcome does not depend on scheduling.
std::vector<Complex> evaluate_grid(const PlaneEvaluator& g, const std::vector<double>& x1,
                                   const std::vector<double>& x2, unsigned threads) {
  const std::size_t n2 = x2.size();
  const std::size_t total = x1.size() * n2;
  std::vector<Complex> out(total);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(total, 1)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      try {
        out[idx] = g(x1[idx / n2], x2[idx % n2]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = total;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

PhaseDiagram assemble(const GridAxis& axis1, const GridAxis& axis2, const std::vector<Complex>& g,
                      bool snap, const ScanOptions& options) {
  axis1.validate();
  axis2.validate();
  PhaseDiagram d{axis1, axis2, {}, {}, {}};
  const auto x1 = axis1.values();
  const auto x2 = axis2.values();
  d.cells.reserve(g.size());
  for (std::size_t i = 0; i < x1.size(); ++i) {
    for (std::size_t j = 0; j < x2.size(); ++j) {
      const Complex v = g[i * x2.size() + j];
      const FreeEnergy fe = free_energy_density(v, 1, options.cap);
      d.cells.push_back({x1[i], x2[j], v, std::norm(v),
                         snap ? snap_phase(v, kPhaseZeroTol) : dynamical_phase(v), fe.value,
                         fe.divergent});
    }
  }
  d.metadata["rate_cap"] = format_double(options.cap);
  d.metadata["system_size"] = "1";
  d.metadata["linear_axes"] = "nodes";
  d.metadata["log_axes"] = "cell_centers";
  return d;
}

bool inside(const GridAxis& axis, double x) {
  const double slack = 1e-9 * std::max(1.0, std::abs(axis.max));
  return x >= axis.min - slack && x <= axis.max + slack;
}

bool same_point(const CriticalPoint& a, const CriticalPoint& b) {
  return std::abs(a.x1 - b.x1) <= 1e-6 * std::max(1.0, std::abs(a.x1)) &&
         std::abs(a.x2 - b.x2) <= 1e-6 * std::max(1.0, std::abs(a.x2));
}

// Damped Newton on (Re G, Im G) = 0 with a central-difference Jacobian.
std::optional<CriticalPoint> newton_zero(const PlaneEvaluator& g, double x1, double x2) {
  Complex v = g(x1, x2);
  for (int it = 0; it < kNewtonIterations && std::abs(v) > 1e-15; ++it) {
    const double h1 = 1e-7 * std::max(1.0, std::abs(x1));
    const double h2 = 1e-7 * std::max(1.0, std::abs(x2));
    const Complex d1 = (g(x1 + h1, x2) - g(x1 - h1, x2)) / (2.0 * h1);
    const Complex d2 = (g(x1, x2 + h2) - g(x1, x2 - h2)) / (2.0 * h2);
    const double det = d1.real() * d2.imag() - d2.real() * d1.imag();
    if (!std::isfinite(det) || std::abs(det) < 1e-300) return std::nullopt;
    const double s1 = (v.real() * d2.imag() - v.imag() * d2.real()) / det;
    const double s2 = (d1.real() * v.imag() - d1.imag() * v.real()) / det;
    double lambda = 1.0;
    Complex trial = g(x1 - s1, x2 - s2);
    while (std::abs(trial) >= std::abs(v) && lambda > 1e-6) {
      lambda *= 0.5;
      trial = g(x1 - lambda * s1, x2 - lambda * s2);
    }
    if (std::abs(trial) >= std::abs(v)) break;
    x1 -= lambda * s1;
    x2 -= lambda * s2;
    v = trial;
  }
  if (std::abs(v) >= kCriticalAcceptTol) return std::nullopt;
  return CriticalPoint{x1, x2};
}

// Golden-section refinement of |G| along the single free axis.
std::optional<CriticalPoint> line_zero(const PlaneEvaluator& g, const PhaseDiagram& d, int i1,
                                       int i2) {
  const bool along_first = d.axis1.n > 1;
  const GridAxis& axis = along_first ? d.axis1 : d.axis2;
  const int i = along_first ? i1 : i2;
  const double a = axis.value(std::max(i - 1, 0));
  const double b = axis.value(std::min(i + 1, axis.n - 1));
  const double fixed = along_first ? d.axis2.value(0) : d.axis1.value(0);
  auto eval = [&](double x) { return along_first ? g(x, fixed) : g(fixed, x); };
  const double x = golden_section_minimize([&](double s) { return std::abs(eval(s)); }, a, b);
  if (std::abs(eval(x)) >= kCriticalAcceptTol) return std::nullopt;
  return along_first ? CriticalPoint{x, fixed} : CriticalPoint{fixed, x};
}

bool local_minimum(const PhaseDiagram& d, int i1, int i2) {
  const double m = std::abs(d.at(i1, i2).g);
  if (m >= kCandidateMagnitude) return false;
  for (int a = -1; a <= 1; ++a) {
    for (int b = -1; b <= 1; ++b) {
      const int j1 = i1 + a;
      const int j2 = i2 + b;
      if ((a == 0 && b == 0) || j1 < 0 || j2 < 0 || j1 >= d.axis1.n || j2 >= d.axis2.n) continue;
      if (std::abs(d.at(j1, j2).g) < m) return false;
    }
  }
  return true;
}

}  // namespace

GridAxis GridAxis::fixed(std::string name, double value) {
  return {std::move(name), value, value, 1, AxisScale::Fixed};
}

void GridAxis::validate() const {
  std::ostringstream msg;
  if (scale == AxisScale::Fixed) {
    if (n != 1 || min != max || !std::isfinite(min)) {
      msg << "fixed axis '" << name << "' needs one finite value";
      throw Error(ErrorKind::DomainError, msg.str());
    }
    return;
  }
  if (!(min < max) || !std::isfinite(min) || !std::isfinite(max)) {
    msg << "axis '" << name << "' needs min < max, got " << min << ":" << max;
    throw Error(ErrorKind::DomainError, msg.str());
  }
  if (n < 2) {
    msg << "axis '" << name << "' needs at least 2 points, got " << n;
    throw Error(ErrorKind::DomainError, msg.str());
  }
  if (scale == AxisScale::Log && !(min > 0.0)) {
    msg << "log axis '" << name << "' needs min > 0";
    throw Error(ErrorKind::DomainError, msg.str());
  }
}

double GridAxis::value(int i) const {
  switch (scale) {
    case AxisScale::Fixed:
      return min;
    case AxisScale::Log: {
      const double lo = std::log(min);
      const double hi = std::log(max);
      return std::exp(lo + (i + 0.5) * (hi - lo) / n);
    }
    case AxisScale::Linear:
      break;
  }
  if (i == n - 1) return max;
  return min + i * (max - min) / (n - 1);
}

std::vector<double> GridAxis::values() const {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = value(i);
  return out;
}

PhaseDiagram scan_dynamics(const PlaneEvaluator& g, const GridAxis& axis1, const GridAxis& axis2,
                           const ScanOptions& options) {
  axis1.validate();
  axis2.validate();
  PhaseDiagram d =
      assemble(axis1, axis2, evaluate_grid(g, axis1.values(), axis2.values(), options.threads),
               false, options);
  d.metadata["process"] = "dynamics";

  const bool free1 = axis1.n > 1;
  const bool free2 = axis2.n > 1;
  for (int i1 = 0; i1 < axis1.n; ++i1) {
    for (int i2 = 0; i2 < axis2.n; ++i2) {
      if (!local_minimum(d, i1, i2)) continue;
      const PhaseCell& c = d.at(i1, i2);
      std::optional<CriticalPoint> p;
      if (free1 && free2) {
        p = newton_zero(g, c.x1, c.x2);
      } else if (free1 || free2) {
        p = line_zero(g, d, i1, i2);
      } else if (std::abs(c.g) < kCriticalAcceptTol) {
        p = CriticalPoint{c.x1, c.x2};
      }
      if (!p || !inside(axis1, p->x1) || !inside(axis2, p->x2)) continue;
      if (std::none_of(d.criticals.begin(), d.criticals.end(),
                       [&](const CriticalPoint& q) { return same_point(*p, q); })) {
        d.criticals.push_back(*p);
      }
    }
  }
  // Refined points on one ridge share x1 only up to roundoff.
  std::sort(d.criticals.begin(), d.criticals.end(), [](const auto& a, const auto& b) {
    const bool same_x1 = std::abs(a.x1 - b.x1) <= 1e-9 * std::max(1.0, std::abs(a.x1));
    return same_x1 ? a.x2 < b.x2 : a.x1 < b.x1;
  });
  return d;
}

PhaseDiagram scan_uhlmann(const PlaneEvaluator& g, const GridAxis& axis1, const GridAxis& axis2,
                          const ScanOptions& options) {
  axis1.validate();
  axis2.validate();
  PhaseDiagram d =
      assemble(axis1, axis2, evaluate_grid(g, axis1.values(), axis2.values(), options.threads),
               true, options);
  d.metadata["process"] = "uhlmann";

  for (int i2 = 0; i2 < axis2.n; ++i2) {
    const double p = axis2.value(i2);
    for (int i1 = 0; i1 + 1 < axis1.n; ++i1) {
      const double lo = d.at(i1, i2).g.real();
      const double hi = d.at(i1 + 1, i2).g.real();
      if (lo == 0.0) {
        d.criticals.push_back({d.at(i1, i2).x1, p});
      } else if (lo * hi < 0.0) {
        const double t = refine_critical([&](double x) { return g(x, p).real(); },
                                         {d.at(i1, i2).x1, d.at(i1 + 1, i2).x1});
        d.criticals.push_back({t, p});
      }
    }
  }
  return d;
}

double refine_critical(const std::function<double(double)>& f, std::pair<double, double> bracket) {
  return bisect(f, bracket.first, bracket.second, 1e-10);
}

std::vector<PhaseJump> detect_phase_jumps(const PhaseDiagram& diagram, int axis) {
  if (axis != 1 && axis != 2) {
    throw Error(ErrorKind::DomainError, "phase-jump axis must be 1 or 2");
  }
  constexpr double pi = std::numbers::pi;
  std::vector<PhaseJump> out;
  const int n1 = diagram.axis1.n;
  const int n2 = diagram.axis2.n;
  const int lines = axis == 1 ? n2 : n1;
  const int length = axis == 1 ? n1 : n2;
  for (int line = 0; line < lines; ++line) {
    // Cells with an undefined phase (on a zero) are skipped, so a jump across them still counts.
    const PhaseCell* prev = nullptr;
    for (int pos = 0; pos < length; ++pos) {
      const PhaseCell& cell = axis == 1 ? diagram.at(pos, line) : diagram.at(line, pos);
      if (!cell.phase) continue;
      if (prev) {
        double delta = std::remainder(*cell.phase - *prev->phase, 2.0 * pi);
        if (delta <= -pi) delta += 2.0 * pi;
        if (std::abs(delta) > pi / 2) {
          out.push_back({0.5 * (prev->x1 + cell.x1), 0.5 * (prev->x2 + cell.x2), delta});
        }
      }
      prev = &cell;
    }
  }
  return out;
}

}  // namespace loschmidt
