#pragma once

#include <stdexcept>
#include <string>

namespace qmaps {

// Every precondition failure carries one of these codes so callers (and the
// CLI) can distinguish "bad input" from "computation impossible".
enum class Err {
  NotSquare,
  NotHermitian,
  NotDiagonal,
  NotUnitary,
  NotProjection,
  NotFiniteEntries,
  Singular,
  DimensionMismatch,
  NotHermitianChoi,
  NotCP,
  NotCPDiagonal,
  ResolventSingular,
  NotNonNegativeSpectrum,
  LimitDiverged,
  NotAState,
  NotFaithfulState,
  NotIdempotent,
  ContractionNormExceeded,
  PhiEKilledViolated,
  InvalidParams,
  NotRankOneUnital,
  TemplateMismatch,
  NotAQCorner,
  BadInput,
};

const char* to_string(Err code);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& message) { throw Error(code, message); }

inline void require(bool condition, Err code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace qmaps
