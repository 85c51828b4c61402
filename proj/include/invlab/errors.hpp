#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace invlab {

// Base for all numerical failures; the CLI maps these to exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WindowTooNarrow : NumericError {
  using NumericError::NumericError;
};
struct GridMismatch : NumericError {
  using NumericError::NumericError;
};
struct LevelOutOfRange : NumericError {
  using NumericError::NumericError;
};
struct Unsupported : NumericError {
  using NumericError::NumericError;
};
struct ConvergenceFailure : NumericError {
  using NumericError::NumericError;
};
struct NoConvergence : NumericError {
  using NumericError::NumericError;
};
struct NonPositiveEigenfunction : NumericError {
  using NumericError::NumericError;
};
struct NotInvading : NumericError {
  using NumericError::NumericError;
};
struct Blowup : NumericError {
  using NumericError::NumericError;
};
struct PreconditionFailed : NumericError {
  using NumericError::NumericError;
};
struct InsufficientData : NumericError {
  using NumericError::NumericError;
};

// One scenario-file problem, with the line it came from (0 = whole document).
struct SchemaIssue {
  int line = 0;
  std::string message;
};

// Carries the full issue list; the CLI maps this to exit code 2.
struct SchemaError : std::runtime_error {
  std::vector<SchemaIssue> issues;
  explicit SchemaError(std::vector<SchemaIssue> list)
      : std::runtime_error(join(list)), issues(std::move(list)) {}

 private:
  static std::string join(const std::vector<SchemaIssue>& list) {
    std::string out;
    for (const auto& issue : list) {
      if (!out.empty()) out += "; ";
      out += "line " + std::to_string(issue.line) + ": " + issue.message;
    }
    return out.empty() ? std::string("schema error") : out;
  }
};

}  // namespace invlab
