#pragma once

// Rectangular parameter scans of Loschmidt and Uhlmann amplitudes with
// critical-point refinement and phase-jump detection.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "loschmidt/dynamics.hpp"

namespace loschmidt {

enum class AxisScale { Linear, Log, Fixed };

struct GridAxis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  int n = 2;
  AxisScale scale = AxisScale::Linear;

  /// A one-point axis pinned at `value`.
  static GridAxis fixed(std::string name, double value);

  /// min < max and n >= 2 (log: min > 0); a fixed axis needs n = 1 and min = max.
  void validate() const;
  /// Nodes for linear axes, geometric cell centers for log axes.
  double value(int i) const;
  std::vector<double> values() const;
};

struct PhaseCell {
  double x1 = 0.0;
  double x2 = 0.0;
  Complex g;
  double echo = 0.0;
  std::optional<double> phase;
  double rate = 0.0;
  bool divergent = false;
};

struct CriticalPoint {
  double x1 = 0.0;
  double x2 = 0.0;
};

struct PhaseDiagram {
  GridAxis axis1;
  GridAxis axis2;
  std::vector<PhaseCell> cells;  // axis1 major: index i1 * n2 + i2
  std::vector<CriticalPoint> criticals;
  std::map<std::string, std::string> metadata;

  const PhaseCell& at(int i1, int i2) const { return cells[i1 * axis2.n + i2]; }
};

struct PhaseJump {
  double x1 = 0.0;
  double x2 = 0.0;
  double delta_phase = 0.0;
};

using PlaneEvaluator = std::function<Complex(double, double)>;

struct ScanOptions {
  double cap = kRateCap;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// G over a (temperature-like, time) plane. Criticals are isolated
/// zeros of G located by Newton iteration from grid minima of |G|.
PhaseDiagram scan_dynamics(const PlaneEvaluator& g, const GridAxis& axis1,
                           const GridAxis& axis2, const ScanOptions& options = {});

/// G^U(T, p) over axis1 = temperature, axis2 = model parameter. Criticals are
/// sign changes of Re G^U along temperature, bisected per parameter column.
PhaseDiagram scan_uhlmann(const PlaneEvaluator& g, const GridAxis& temperature_axis,
                          const GridAxis& param_axis, const ScanOptions& options = {});

/// Bisection of a sign change until the bracket is below 1e-10 max(1, |x|).
double refine_critical(const std::function<double(double)>& f, std::pair<double, double> bracket);

/// Phase differences between consecutive defined cells along `axis` (1 or 2),
/// wrapped into (-pi, pi], whose magnitude exceeds pi/2. Reported line by line.
std::vector<PhaseJump> detect_phase_jumps(const PhaseDiagram& diagram, int axis);

}  // namespace loschmidt
