#ifndef INTERLACE_ERRORS_HPP
#define INTERLACE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

// Failure taxonomy for the whole library.  Every throw site uses one of
// these types so callers (and the CLI exit-code mapper) can dispatch on
// the class of failure instead of parsing message strings.

namespace interlace {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input sequence rejected before any math runs.
struct ValidationError : Error {
  enum class Kind { NonFinite, NonMonotone, TooShort };
  Kind kind;
  std::size_t index;  // offending position (first of the violating pair)
  ValidationError(Kind k, std::size_t i, const std::string& msg)
      : Error(msg), kind(k), index(i) {}
};

// Argument outside the domain of an average counting model.
struct DomainError : Error {
  using Error::Error;
};

// Root bracketing / refinement exceeded its iteration budget.
struct IterationLimit : Error {
  using Error::Error;
};

// Two consecutive levels coincide, so no interior point exists.
struct ZeroSpacing : Error {
  std::size_t index;
  ZeroSpacing(std::size_t i, const std::string& msg) : Error(msg), index(i) {}
};

// Eigenphase continuation across a grid step moved by more than the
// safe bound, so the branch identification is no longer trustworthy.
struct TrackingLoss : Error {
  using Error::Error;
};

// Orbit enumeration would exceed the hard cap on emitted orbits.
struct CutoffTooLarge : Error {
  using Error::Error;
};

// Closed-form spectrum requested for a graph that lacks the required
// regularity (equal bond lengths / vertex-transitive scattering).
struct NotRegular : Error {
  using Error::Error;
};

// Histogram or statistic asked of an empty value set.
struct EmptyInput : Error {
  using Error::Error;
};

// Text table could not be parsed; line is 1-based.
struct ParseError : Error {
  std::size_t line;
  ParseError(std::size_t l, const std::string& msg) : Error(msg), line(l) {}
};

// File could not be read or written.
struct IoError : Error {
  using Error::Error;
};

// Remote fetch failed and no cached copy exists.
struct NetworkError : Error {
  using Error::Error;
};

// Fetch succeeded but the payload contained no usable rows.
struct EmptyPayload : Error {
  using Error::Error;
};

// Cyclic difference operators need a modulus; plain sequences do not
// carry one.
struct RequiresModulus : Error {
  using Error::Error;
};

}  // namespace interlace

#endif
