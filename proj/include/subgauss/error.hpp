#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace subgauss {

/// Failure categories surfaced by the library. Every throwing operation
/// raises `subgauss::Error` tagged with one of these.
enum class ErrorKind {
  InvalidArgument,
  UnsupportedPair,
  NoFiniteMgf,
  TooFewSamples,
  EnumerationTooLarge,
  BadK,
  BadMoments,
  BadDelta,
  OutOfRange,
  MeanZeroRequired,
  DeltaTooLarge,
  HypothesisUnmet,
  RankDeficient,
  DegenerateFit,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace subgauss
