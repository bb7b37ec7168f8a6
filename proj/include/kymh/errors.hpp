#pragma once

#include <stdexcept>
#include <string>

namespace kymh {

/// Base of every error the library throws. `kind()` is a stable short tag
/// used by the CLI to pick exit codes and by reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error("configuration", what) {}
};

struct NumericInputError : Error {
  explicit NumericInputError(const std::string& what) : Error("numeric-input", what) {}
};

struct WrongRankError : Error {
  explicit WrongRankError(const std::string& what) : Error("wrong-rank", what) {}
};

struct InfeasibleError : Error {
  explicit InfeasibleError(const std::string& what) : Error("infeasible", what) {}
};

struct ObstructedError : Error {
  explicit ObstructedError(const std::string& what) : Error("obstructed", what) {}
};

struct ModelError : Error {
  explicit ModelError(const std::string& what) : Error("model", what) {}
};

struct UnsupportedRankError : Error {
  explicit UnsupportedRankError(const std::string& what) : Error("unsupported-rank", what) {}
};

struct PoleError : Error {
  explicit PoleError(const std::string& what) : Error("pole", what) {}
};

struct PreconditionError : Error {
  explicit PreconditionError(const std::string& what) : Error("precondition", what) {}
};

struct DegeneratePairError : Error {
  explicit DegeneratePairError(const std::string& what) : Error("degenerate-pair", what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error("io", what) {}
};

struct InvalidInputError : Error {
  explicit InvalidInputError(const std::string& what) : Error("invalid-input", what) {}
};

}  // namespace kymh
