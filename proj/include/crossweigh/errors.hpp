#pragma once

#include <stdexcept>

namespace crossweigh {

// A file that cannot be opened, read, or written.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text (CoNLL lines, weights files, model files).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A violated precondition or invariant.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configuration that cannot produce a result, e.g. a fold whose filtered
// train set is empty.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace crossweigh
