#pragma once

// Command-line front end: argument parsing, model dispatch, scan execution
// and CSV/JSON serialization.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "loschmidt/scan.hpp"

namespace loschmidt::cli {

enum class Command { Quasistatic, Quench, Uhlmann, Scan, Verify };
enum class ModelKind { TwoLevel, ThreeLevel, Creutz };
enum class OutputFormat { Csv, Json };
enum class EvalMode { ClosedForm, Numeric, Both };

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitIo = 4;

struct RunConfig {
  Command command = Command::Scan;
  ModelKind model = ModelKind::TwoLevel;
  std::map<std::string, double> params;
  std::vector<GridAxis> axes;
  int n_steps = 1024;
  std::string out_path;  // empty writes to stdout
  OutputFormat format = OutputFormat::Csv;
  EvalMode mode = EvalMode::Both;
};

/// argv without the program name. Throws Error(Usage) naming the offending flag.
RunConfig parse_args(const std::vector<std::string>& args);

/// Accepts plain reals and the forms pi, pi/4, 2*pi/5, -pi/2.
double parse_real(const std::string& text);

/// Runs a quasistatic, quench, uhlmann or scan command.
PhaseDiagram build_diagram(const RunConfig& config);

std::string to_csv(const PhaseDiagram& diagram);
std::string to_json(const PhaseDiagram& diagram);
PhaseDiagram diagram_from_json(const std::string& text);

/// Serializes in the configured format to out_path (atomically) or stdout.
void emit(const PhaseDiagram& diagram, const RunConfig& config, std::ostream& stdout_stream);

struct VerifyItem {
  std::string quantity;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool passed() const { return max_deviation <= tolerance; }
};

struct VerifyReport {
  std::vector<VerifyItem> items;
  bool passed() const;
  std::string text() const;
};

VerifyReport verify(const RunConfig& config);

/// Writes `contents` to a temporary sibling file and renames it over `path`.
void write_atomically(const std::string& path, const std::string& contents);

/// Full program: returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace loschmidt::cli
