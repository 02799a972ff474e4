#ifndef EPPOOL_ERRORS_HPP
#define EPPOOL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eppool {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SamplerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace eppool

#endif
