#pragma once

#include <stdexcept>
#include <string>

namespace hpce {

// User-facing configuration problems (bad flags, bad files, bad thresholds).
// The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failures: overflow, conditioning, saturated leverage, degenerate
// models, root-bracket violations. CLI exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Integer/floating overflow in combinatorial quantities.
struct OverflowError : NumericError {
  using NumericError::NumericError;
};

// A requested computation exceeds the configured memory budget. CLI exit 4.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hpce
