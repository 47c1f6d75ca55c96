#pragma once

#include <stdexcept>
#include <string>

namespace qgeom {

/// Input violates a documented constructor or operation precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation is not defined on the given input (e.g. a path that is not a
/// word over the graph, a point outside a map's domain).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A geometric predicate fell into the ambiguity band of the floating-point
/// side tests. Raised instead of returning a possibly wrong answer.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation is intentionally unsupported for this input class.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qgeom
