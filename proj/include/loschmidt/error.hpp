#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace loschmidt {

enum class ErrorKind {
  NotHermitian,
  NotPositive,
  NotUnitary,
  DimMismatch,
  RankDeficient,
  NotClosed,
  GaplessPath,
  GridTooCoarse,
  DomainError,
  NoSignChange,
  Usage,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so the CLI can map it
// onto its exit-status contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::GaplessPath: return "GaplessPath";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::Usage: return "UsageError";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

}  // namespace loschmidt
