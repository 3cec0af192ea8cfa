#ifndef SURVLENS_ERRORS_H_
#define SURVLENS_ERRORS_H_

#include <stdexcept>
#include <string>

namespace survlens {

// Malformed input: bad dimensions, unknown names, invariant violations of
// caller-supplied data. The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A computation could not produce a defined result (no comparable pairs,
// zero weights, failed fit). The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

class FitError : public NumericError {
 public:
  explicit FitError(const std::string& what) : NumericError(what) {}
};

}  // namespace survlens

#endif  // SURVLENS_ERRORS_H_
