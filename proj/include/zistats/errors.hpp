#pragma once

#include <stdexcept>
#include <string>

namespace zistats {

// Base class for every failure raised by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument or parameter outside the supported domain.
struct domain_error : error {
  using error::error;
};

// A series or iterative solver exhausted its budget before reaching
// the requested tolerance.
struct convergence_error : error {
  using error::error;
};

// A scaled evaluation cannot be formed without overflow/underflow.
struct overflow_error : error {
  using error::error;
};

// The sample carries no information for the requested fit
// (e.g. all counts zero, or zero variance for a dispersion fit).
struct degenerate_sample_error : error {
  using error::error;
};

// Two distributions that must share a mean do not.
struct mean_mismatch_error : error {
  using error::error;
};

// Malformed input text; `line` is 1-based, 0 when not applicable.
struct parse_error : error {
  explicit parse_error(const std::string& msg, int line_no = 0)
      : error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
        line(line_no) {}
  int line;
};

}  // namespace zistats
