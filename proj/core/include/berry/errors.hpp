#pragma once

#include <stdexcept>
#include <string>

namespace berry {

// Raised when a tracked band touches (or comes within threshold of) another
// band somewhere the computation needs it isolated.
struct DegeneracyError : std::runtime_error {
  explicit DegeneracyError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised by XY-chain operations when some mode has Lambda_k = 0 exactly, so
// cos(theta_k) is undefined. Scan drivers catch this and dither lambda.
struct UndefinedAngleError : std::runtime_error {
  explicit UndefinedAngleError(const std::string& msg)
      : std::runtime_error(msg) {}
};

// Refinement or iteration failed to reach the requested tolerance.
struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& msg)
      : std::runtime_error(msg) {}
};

// Adjacent-loop phase jump >= pi: the winding of a surface sweep cannot be
// unwrapped at this resolution. Caller must refine the loop family.
struct UnwrapError : std::runtime_error {
  explicit UnwrapError(const std::string& msg) : std::runtime_error(msg) {}
};

// Configuration file / CLI argument problem, with the offending field path.
struct ConfigError : std::runtime_error {
  ConfigError(std::string field_path, const std::string& msg)
      : std::runtime_error(field_path.empty() ? msg : field_path + ": " + msg),
        field(std::move(field_path)) {}
  std::string field;
};

}  // namespace berry
