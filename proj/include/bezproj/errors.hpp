#ifndef BEZPROJ_ERRORS_HPP
#define BEZPROJ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bezproj {

/// Argument outside the operation's mathematical domain (bad degree, inverted
/// interval, invalid knot edit, out-of-range index).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A target function or geometry produced an unusable value.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Should-not-happen numerical failure, e.g. a singular extraction operator.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what, double condition_estimate = 0.0)
      : std::logic_error(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

/// T-mesh that violates the partition invariants or lacks the structure an
/// algorithm needs.
class MalformedMeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input file rejected; message names the offending field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bezproj

#endif  // BEZPROJ_ERRORS_HPP
