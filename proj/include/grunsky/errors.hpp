#ifndef GRUNSKY_ERRORS_HPP
#define GRUNSKY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace grunsky {

/// Bad input: violated precondition, malformed descriptor, out-of-range argument.
class validation_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not deliver a result at the requested accuracy
/// (quadrature, singular-value iteration, branch tracking, series order).
class numerical_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw validation_error(what);
}

} // namespace detail

} // namespace grunsky

#endif // GRUNSKY_ERRORS_HPP
