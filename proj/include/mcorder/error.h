#ifndef MCORDER_ERROR_H_
#define MCORDER_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcorder {

// Bad input: out-of-range arguments, violated preconditions, malformed specs.
// The CLI maps these to exit code 1.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed sample or config text. `position` is the 0-based index of the
// offending token (or line, for line-oriented formats).
class ParseError : public InvalidArgument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InvalidArgument(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Numerical failure at run time (non-convergence, too many failed
// replications). The CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mcorder

#endif  // MCORDER_ERROR_H_
