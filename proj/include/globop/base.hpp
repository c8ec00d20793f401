#pragma once

#include <stdexcept>
#include <string>

namespace globop {

// Malformed textual input (bracket syntax, term syntax, file formats).
class parse_error : public std::runtime_error {
public:
  parse_error(std::string msg, std::size_t pos = std::string::npos)
      : std::runtime_error(std::move(msg)), position(pos) {}
  std::size_t position;
};

// Violation of a structural precondition (dimension mismatch, arity
// mismatch, boundary-incoherent substitution, unknown generator, ...).
class invalid_argument_error : public std::runtime_error {
public:
  explicit invalid_argument_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace globop
